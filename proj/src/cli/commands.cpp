#include "vss/cli.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "vss/output.hpp"
#include "vss/parallel.hpp"

namespace vss {

using nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

class Stopwatch {
 public:
  void lap(const std::string& stage) {
    const auto now = Clock::now();
    timings_[stage] = std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }
  ordered_json json() const { return timings_; }

 private:
  Clock::time_point last_ = Clock::now();
  ordered_json timings_ = ordered_json::object();
};

// Everything except "runtime" is a pure function of config, seed and version.
struct Manifest {
  ordered_json doc;

  Manifest(const std::string& command, const RunConfig& config, const CommandOptions& options,
           const std::vector<std::string>& notes) {
    doc["tool"] = "vss";
    doc["version"] = kVersion;
    doc["command"] = command;
    doc["seed"] = options.seed;
    doc["config"] = ordered_json::parse(config_to_json(config));
    doc["notes"] = notes;
    doc["derived"] = ordered_json::object();
  }

  void write(const std::filesystem::path& dir, const Stopwatch& watch, unsigned threads) {
    doc["runtime"] = {{"threads", resolve_threads(threads)}, {"timings_s", watch.json()}};
    write_text(dir / "manifest.json", doc.dump(2) + "\n");
  }
};

double nan_or(double v) { return std::isfinite(v) ? v : std::nan(""); }

ordered_json number_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(); }

ordered_json level_json(const MediumLevels& medium) {
  ordered_json levels = ordered_json::array();
  for (const auto& l : medium.levels) {
    levels.push_back({{"energy_ev", l.energy},
                      {"dipole", l.dipole_product},
                      {"mismatch_ev", 2.0 * l.energy - medium.final_energy - medium.ground_energy}});
  }
  return levels;
}

void write_peaks(const std::filesystem::path& dir, const std::vector<Peak>& peaks) {
  CsvTable csv({"energy_ev", "magnitude"});
  for (const auto& p : peaks) csv.row({p.energy, p.magnitude});
  csv.write(dir / "peaks.csv");
}

void write_spectrum(const std::filesystem::path& dir, const Spectrogram& spec, const Spectrogram& raw) {
  CsvTable csv({"energy_ev", "magnitude", "magnitude_raw"});
  for (std::size_t k = 0; k < spec.magnitude.size(); ++k) {
    csv.row({spec.bin_energies[k], spec.magnitude[k], raw.magnitude[k]});
  }
  csv.write(dir / "data.csv");
}

ordered_json peaks_json(const std::vector<Peak>& peaks) {
  ordered_json out = ordered_json::array();
  for (const auto& p : peaks) out.push_back({{"energy_ev", p.energy}, {"magnitude", p.magnitude}});
  return out;
}

std::string axis_label(const RunConfig& c) {
  return c.analysis.energy_axis == EnergyAxis::mismatch ? "energy mismatch 2E (eV)"
                                                        : "oscillation energy E (eV)";
}

struct Prepared {
  ModelConfig model;
  std::vector<std::string> notes;
};

Prepared prepare(const RunConfig& config, const CommandOptions& options) {
  Prepared p;
  p.model = model_config(config, options.seed, &p.notes);
  ensure_directory(options.out_dir);
  return p;
}

}  // namespace

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config:
    case ErrorKind::domain:
    case ErrorKind::input: return 2;
    case ErrorKind::numerical: return 3;
    case ErrorKind::io: return 4;
  }
  return 1;
}

CommandResult cmd_joint_spectrum(const RunConfig& config, const CommandOptions& options) {
  Stopwatch watch;
  auto [model, notes] = prepare(config, options);
  const auto& dir = options.out_dir;
  const JointAmplitude amp = normalize(
      build_joint_amplitude(model.pump, model.crystal, model.grid, model.idler_grid()));
  const double rho = correlation_coefficient(amp);
  watch.lap("amplitude");

  const std::size_t n = model.grid.points;
  const std::size_t stride = (n + config.joint.max_plot_points - 1) / config.joint.max_plot_points;
  CsvTable csv({"omega_s_ev", "omega_i_ev", "magnitude", "phase_rad"});
  std::vector<double> xs, ys;
  std::vector<std::vector<double>> heat;
  for (std::size_t j = 0; j < n; j += stride) ys.push_back(model.grid.node(j));
  for (std::size_t k = 0; k < n; k += stride) xs.push_back(amp.grid_i.node(k));
  for (std::size_t j = 0; j < n; j += stride) {
    heat.emplace_back();
    for (std::size_t k = 0; k < n; k += stride) {
      const auto v = amp.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
      csv.row({model.grid.node(j), amp.grid_i.node(k), std::abs(v), std::arg(v)});
      heat.back().push_back(std::abs(v));
    }
  }
  csv.write(dir / "data.csv");

  CsvTable corr({"pump_duration_fs", "correlation_coefficient"});
  ordered_json comparisons = ordered_json::array();
  for (double tau : config.joint.compare_durations_fs) {
    ModelConfig m = model;
    m.pump.duration = tau;
    const double r = correlation_coefficient(
        normalize(build_joint_amplitude(m.pump, m.crystal, m.grid, m.idler_grid())));
    corr.row({tau, r});
    comparisons.push_back({{"pump_duration_fs", tau}, {"correlation_coefficient", r}});
  }
  corr.write(dir / "correlations.csv");
  watch.lap("comparisons");

  ChartAxes axes{"|joint spectral amplitude|, tau_p = " + format_number(model.pump.duration) + " fs",
                 "idler energy (eV)", "signal energy (eV)"};
  write_text(dir / "plot.svg", svg_heatmap(axes, xs, ys, heat));

  Manifest manifest("joint-spectrum", config, options, notes);
  manifest.doc["derived"] = {{"correlation_coefficient", rho},
                             {"norm_factor", amp.norm_factor},
                             {"grid_half_width_ev", model.grid.half_width},
                             {"plot_stride", stride},
                             {"comparisons", comparisons}};
  watch.lap("output");
  manifest.write(dir, watch, options.threads);

  std::ostringstream summary;
  summary << "correlation coefficient " << rho << " at tau_p = " << model.pump.duration << " fs";
  return {{"data.csv", "correlations.csv", "plot.svg", "manifest.json"}, summary.str()};
}

CommandResult cmd_schmidt(const RunConfig& config, const CommandOptions& options) {
  Stopwatch watch;
  auto [model, notes] = prepare(config, options);
  const auto& dir = options.out_dir;
  const TwinBeam beam = prepare_twin_beam(model);
  watch.lap("decomposition");
  const BeamState state = beam_at(beam, config.beam.target_photon_number);
  watch.lap("gains");

  const auto& lambdas = beam.decomposition.lambdas;
  CsvTable csv({"mode", "lambda", "u", "v", "occupation"});
  std::vector<double> idx, lam2;
  double sum2 = 0.0, sum4 = 0.0;
  for (Eigen::Index g = 0; g < lambdas.size(); ++g) {
    const double v = state.gains.v(g);
    csv.row({static_cast<double>(g), lambdas(g), state.gains.u(g), v, v * v});
    idx.push_back(static_cast<double>(g));
    lam2.push_back(lambdas(g) * lambdas(g));
    sum2 += lambdas(g) * lambdas(g);
    sum4 += std::pow(lambdas(g), 4);
  }
  csv.write(dir / "data.csv");
  write_text(dir / "plot.svg",
             svg_line_chart({"Schmidt weights", "mode index", "lambda^2", false, true},
                            {{"lambda^2", idx, lam2}}));

  const double kuv = schmidt_number_uv(state.gains);
  Manifest manifest("schmidt", config, options, notes);
  manifest.doc["derived"] = {{"rank", beam.decomposition.rank()},
                             {"sum_lambda_squared", sum2},
                             {"schmidt_number", 1.0 / sum4},
                             {"reconstruction_error", beam.decomposition.reconstruction_error},
                             {"gain", state.gains.gain},
                             {"photon_number", photon_number(state.gains)},
                             {"k_uv", kuv},
                             {"correlation_coefficient", correlation_coefficient(beam.amplitude)}};
  watch.lap("output");
  manifest.write(dir, watch, options.threads);

  std::ostringstream summary;
  summary << "rank " << beam.decomposition.rank() << ", K = " << 1.0 / sum4 << ", K_UV = " << kuv;
  return {{"data.csv", "plot.svg", "manifest.json"}, summary.str()};
}

CommandResult cmd_spectrogram(const RunConfig& config, const CommandOptions& options) {
  Stopwatch watch;
  auto [model, notes] = prepare(config, options);
  const auto& dir = options.out_dir;
  const TwinBeam beam = prepare_twin_beam(model);
  watch.lap("decomposition");
  BeamState state = beam_at(beam, config.beam.target_photon_number);
  const double kuv = schmidt_number_uv(state.gains);
  const double gain = state.gains.gain;
  const double achieved = photon_number(state.gains);
  const TpaScanner scanner(TpaKernel(std::move(state.functions), model.medium));
  watch.lap("precompute");
  const DelayTrace trace = delay_scan(scanner, delay_sampling(config), options.threads);
  watch.lap("scan");

  CsvTable tcsv({"delay_fs", "noise", "classical", "quantum", "total"});
  for (std::size_t m = 0; m < trace.delays.size(); ++m) {
    const auto& g = trace.grouped[m];
    tcsv.row({trace.delays[m], g.noise, g.classical, g.quantum, g.total});
  }
  tcsv.write(dir / "trace.csv");

  const auto totals = trace.totals();
  const SpectrogramOptions opts = spectrogram_options(config);
  SpectrogramOptions raw_opts = opts;
  raw_opts.dc_removal = false;
  const Spectrogram spec = spectrogram(totals, trace.delays, opts);
  const Spectrogram raw = spectrogram(totals, trace.delays, raw_opts);
  write_spectrum(dir, spec, raw);
  const auto peaks = detect_peaks(spec, config.analysis.peak_min_energy_ev,
                                  config.analysis.peak_rel_threshold);
  write_peaks(dir, peaks);
  std::vector<double> energies;
  for (const auto& p : peaks) energies.push_back(p.energy);
  const double sbr = peaks.empty() ? std::nan("")
                                   : signal_to_background(spec, energies,
                                                          config.analysis.peak_min_energy_ev);
  watch.lap("analysis");

  write_text(dir / "plot.svg",
             svg_line_chart({"TPA spectrogram, N_s = " + format_number(achieved), axis_label(config),
                             "|FFT|", false, false},
                            {{"spectrum", spec.bin_energies, spec.magnitude}}));

  Manifest manifest("spectrogram", config, options, notes);
  manifest.doc["derived"] = {{"gain", gain},
                             {"photon_number", achieved},
                             {"k_uv", kuv},
                             {"correlation_coefficient", correlation_coefficient(beam.amplitude)},
                             {"rank", beam.decomposition.rank()},
                             {"bin_width_ev", spec.bin_width()},
                             {"levels", level_json(model.medium)},
                             {"peaks", peaks_json(peaks)},
                             {"signal_to_background", number_or_null(sbr)}};
  watch.lap("output");
  manifest.write(dir, watch, options.threads);

  std::ostringstream summary;
  summary << peaks.size() << " peaks; N_s = " << achieved << ", K_UV = " << kuv;
  return {{"data.csv", "trace.csv", "peaks.csv", "plot.svg", "manifest.json"}, summary.str()};
}

CommandResult cmd_ensemble(const RunConfig& config, const CommandOptions& options) {
  Stopwatch watch;
  auto [model, notes] = prepare(config, options);
  const auto& dir = options.out_dir;
  EnsembleOptions eo;
  eo.photon_number = config.beam.target_photon_number;
  eo.sampling = delay_sampling(config);
  eo.spectrogram = spectrogram_options(config);
  eo.normalization = config.analysis.normalization;
  eo.threads = options.threads;
  const auto lengths = uniform_lengths(config.ensemble.length_min_m, config.ensemble.length_max_m,
                                       config.ensemble.count);
  const EnsembleResult result = ensemble_average(model, lengths, eo);
  watch.lap("ensemble");

  CsvTable tcsv({"delay_fs", "averaged_trace"});
  for (std::size_t m = 0; m < result.delays.size(); ++m) {
    tcsv.row({result.delays[m], result.averaged_trace[m]});
  }
  tcsv.write(dir / "trace.csv");
  CsvTable mcsv({"length_m", "gain", "k_uv", "trace_max", "rank"});
  for (const auto& m : result.members) {
    mcsv.row({m.length, m.gain, m.k_uv, m.trace_max, static_cast<double>(m.rank)});
  }
  mcsv.write(dir / "members.csv");
  write_spectrum(dir, result.averaged_spectrogram, result.raw_spectrogram);

  const auto peaks = detect_peaks(result.averaged_spectrogram, config.analysis.peak_min_energy_ev,
                                  config.analysis.peak_rel_threshold);
  write_peaks(dir, peaks);
  std::vector<double> energies;
  for (const auto& p : peaks) energies.push_back(p.energy);
  const double sbr = peaks.empty() ? std::nan("")
                                   : signal_to_background(result.averaged_spectrogram, energies,
                                                          config.analysis.peak_min_energy_ev);
  watch.lap("analysis");

  write_text(dir / "plot.svg",
             svg_line_chart({"Ensemble-averaged TPA spectrogram (" +
                                 std::to_string(lengths.size()) + " crystals)",
                             axis_label(config), "|FFT|", false, false},
                            {{"average", result.averaged_spectrogram.bin_energies,
                              result.averaged_spectrogram.magnitude}}));

  Manifest manifest("ensemble", config, options, notes);
  manifest.doc["derived"] = {{"members", lengths.size()},
                             {"bin_width_ev", result.averaged_spectrogram.bin_width()},
                             {"levels", level_json(model.medium)},
                             {"peaks", peaks_json(peaks)},
                             {"signal_to_background", number_or_null(sbr)}};
  watch.lap("output");
  manifest.write(dir, watch, options.threads);

  std::ostringstream summary;
  summary << peaks.size() << " peaks from " << lengths.size() << " crystals";
  if (!peaks.empty()) summary << "; signal/background " << sbr;
  return {{"data.csv", "trace.csv", "members.csv", "peaks.csv", "plot.svg", "manifest.json"},
          summary.str()};
}

CommandResult cmd_flux_sweep(const RunConfig& config, const CommandOptions& options) {
  Stopwatch watch;
  auto [model, notes] = prepare(config, options);
  const auto& dir = options.out_dir;
  const FluxTable table = flux_sweep(model, config.sweep.photon_numbers, delay_sampling(config),
                                     options.threads, {config.sweep.fit_min, config.sweep.fit_max});
  watch.lap("sweep");

  const double crossover = table.crossover ? *table.crossover : std::nan("");
  CsvTable csv({"photon_number", "gain", "k_uv", "noise", "classical", "quantum", "slope_quantum",
                "slope_noise_classical", "crossover_photon_number"});
  Series q{"quantum", {}, {}}, nc{"noise + classical", {}, {}};
  for (const auto& r : table.rows) {
    csv.row({r.photon_number, r.gain, r.k_uv, r.integrals.noise, r.integrals.classical,
             r.integrals.quantum, nan_or(table.slope_quantum), nan_or(table.slope_noise_classical),
             crossover});
    q.x.push_back(r.photon_number);
    q.y.push_back(r.integrals.quantum);
    nc.x.push_back(r.photon_number);
    nc.y.push_back(r.integrals.noise + r.integrals.classical);
  }
  csv.write(dir / "data.csv");
  write_text(dir / "plot.svg",
             svg_line_chart({"Delay-integrated TPA signal", "N_s", "signal (arb. units)", true, true},
                            {q, nc}));

  Manifest manifest("flux-sweep", config, options, notes);
  manifest.doc["derived"] = {{"slope_quantum", number_or_null(table.slope_quantum)},
                             {"slope_noise_classical", number_or_null(table.slope_noise_classical)},
                             {"crossover_photon_number", number_or_null(crossover)},
                             {"rows", table.rows.size()}};
  watch.lap("output");
  manifest.write(dir, watch, options.threads);

  std::ostringstream summary;
  summary << "slopes " << table.slope_quantum << " (quantum), " << table.slope_noise_classical
          << " (noise+classical); crossover ";
  if (table.crossover) summary << *table.crossover;
  else summary << "absent";
  return {{"data.csv", "plot.svg", "manifest.json"}, summary.str()};
}

CommandResult run_command(const std::string& name, const RunConfig& config,
                          const CommandOptions& options) {
  if (name == "joint-spectrum") return cmd_joint_spectrum(config, options);
  if (name == "schmidt") return cmd_schmidt(config, options);
  if (name == "spectrogram") return cmd_spectrogram(config, options);
  if (name == "ensemble") return cmd_ensemble(config, options);
  if (name == "flux-sweep") return cmd_flux_sweep(config, options);
  fail(ErrorKind::config, "unknown command '" + name + "'");
}

}  // namespace vss
