#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "vss/cli.hpp"

namespace {

struct Command {
  const char* name;
  const char* help;
};

constexpr Command kCommands[] = {
    {"joint-spectrum",
     "Joint spectral amplitude of the configured pump.\n"
     "  data.csv: omega_s_ev,omega_i_ev,magnitude,phase_rad (subsampled to joint.max_plot_points)\n"
     "  correlations.csv: pump_duration_fs,correlation_coefficient"},
    {"schmidt",
     "Schmidt decomposition and Bogoliubov gains at beam.target_photon_number.\n"
     "  data.csv: mode,lambda,u,v,occupation"},
    {"spectrogram",
     "Delay scan and spectrogram for one crystal.\n"
     "  trace.csv: delay_fs,noise,classical,quantum,total\n"
     "  data.csv: energy_ev,magnitude,magnitude_raw   peaks.csv: energy_ev,magnitude"},
    {"ensemble",
     "Crystal-length ensemble average of normalized traces, then one spectrogram.\n"
     "  trace.csv: delay_fs,averaged_trace   members.csv: length_m,gain,k_uv,trace_max,rank\n"
     "  data.csv: energy_ev,magnitude,magnitude_raw   peaks.csv: energy_ev,magnitude"},
    {"flux-sweep",
     "Delay-integrated noise/classical/quantum groups versus photon number.\n"
     "  data.csv: photon_number,gain,k_uv,noise,classical,quantum,slope_quantum,\n"
     "            slope_noise_classical,crossover_photon_number"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Virtual-state spectroscopy with intense twin beams"};
  app.set_version_flag("--version", vss::kVersion);
  std::string config_path;
  vss::CommandOptions options;
  app.add_option("--config", config_path, "JSON config file (empty or absent keys take defaults)");
  app.add_option("--out", options.out_dir, "Output directory")->capture_default_str();
  app.add_option("--threads", options.threads, "Worker threads, 0 = all cores")->capture_default_str();
  app.add_option("--seed", options.seed, "Seed for randomized level sets")->capture_default_str();
  app.require_subcommand(1);
  for (const auto& c : kCommands) {
    app.add_subcommand(c.name, c.help)->fallthrough();
  }
  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const vss::RunConfig config =
        config_path.empty() ? vss::parse_config("") : vss::load_config(config_path);
    const auto result = vss::run_command(name, config, options);
    std::printf("%s: %s\n", name.c_str(), result.summary.c_str());
    for (const auto& f : result.files) {
      std::printf("  wrote %s\n", (options.out_dir / f).string().c_str());
    }
    return 0;
  } catch (const vss::Error& e) {
    std::fprintf(stderr, "vss %s: %s: %s\n", name.c_str(), vss::to_string(e.kind()), e.what());
    return vss::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "vss %s: internal error: %s\n", name.c_str(), e.what());
    return 1;
  }
}
