#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "vss/cli.hpp"
#include "vss/config.hpp"

namespace py = pybind11;
using namespace vss;

namespace {

std::vector<double> nodes(const FrequencyGrid& g) {
  std::vector<double> out(g.points);
  for (std::size_t j = 0; j < g.points; ++j) out[j] = g.node(j);
  return out;
}

ModelConfig resolve(const std::string& config, std::uint64_t seed) {
  return model_config(parse_config(config), seed);
}

}  // namespace

PYBIND11_MODULE(_vss, m) {
  m.doc() = "Virtual-state spectroscopy with bright squeezed vacuum";
  m.attr("__version__") = kVersion;

  // Config and domain errors surface as ValueError, I/O as OSError.
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      switch (e.kind()) {
        case ErrorKind::io: PyErr_SetString(PyExc_OSError, e.what()); return;
        case ErrorKind::numerical: PyErr_SetString(PyExc_ArithmeticError, e.what()); return;
        default: PyErr_SetString(PyExc_ValueError, e.what()); return;
      }
    }
  });

  m.def("default_config", [] { return config_to_json(RunConfig{}); },
        "Every config key with its default value, as JSON text.");
  m.def("normalize_config", [](const std::string& text) { return config_to_json(parse_config(text)); },
        py::arg("config"), "Validate JSON config text and return it with defaults filled in.");

  m.def(
      "run",
      [](const std::string& command, const std::string& config, const std::filesystem::path& out,
         unsigned threads, std::uint64_t seed) {
        const auto r = run_command(command, parse_config(config), {out, threads, seed});
        py::dict d;
        d["files"] = r.files;
        d["summary"] = r.summary;
        return d;
      },
      py::arg("command"), py::arg("config") = "", py::arg("out_dir") = "out", py::arg("threads") = 0,
      py::arg("seed") = 0,
      "Run a CLI subcommand (joint-spectrum, schmidt, spectrogram, ensemble, flux-sweep).");

  m.def(
      "joint_amplitude",
      [](const std::string& config, std::uint64_t seed) {
        const auto cfg = resolve(config, seed);
        const auto amp = normalize(build_joint_amplitude(cfg.pump, cfg.crystal, cfg.grid, cfg.idler_grid()));
        py::dict d;
        d["omega_s"] = nodes(amp.grid_s);
        d["omega_i"] = nodes(amp.grid_i);
        d["values"] = amp.values;
        d["rho"] = correlation_coefficient(amp);
        return d;
      },
      py::arg("config") = "", py::arg("seed") = 0,
      "Normalized joint spectral amplitude; rows index signal, columns idler.");

  m.def(
      "schmidt",
      [](const std::string& config, std::uint64_t seed) {
        const auto beam = prepare_twin_beam(resolve(config, seed));
        const auto& d = beam.decomposition;
        py::dict out;
        out["lambdas"] = d.lambdas;
        out["modes_s"] = d.modes_s;
        out["modes_i"] = d.modes_i;
        out["reconstruction_error"] = d.reconstruction_error;
        return out;
      },
      py::arg("config") = "", py::arg("seed") = 0);

  m.def(
      "delay_scan",
      [](const std::string& config, std::optional<double> photon_number, unsigned threads,
         std::uint64_t seed) {
        const auto run = parse_config(config);
        const auto trace = run_delay_scan(model_config(run, seed),
                                          photon_number.value_or(run.beam.target_photon_number),
                                          delay_sampling(run), threads);
        py::dict d;
        d["delays"] = trace.delays;
        d["noise"] = trace.noise();
        d["classical"] = trace.classical();
        d["quantum"] = trace.quantum();
        d["total"] = trace.totals();
        return d;
      },
      py::arg("config") = "", py::arg("photon_number") = py::none(), py::arg("threads") = 0,
      py::arg("seed") = 0, "Grouped TPA signal over the configured delay sampling (fs).");

  m.def(
      "flux_sweep",
      [](const std::string& config, unsigned threads, std::uint64_t seed) {
        const auto run = parse_config(config);
        const auto numbers =
            run.sweep.photon_numbers.empty() ? default_sweep_photon_numbers() : run.sweep.photon_numbers;
        const auto t = flux_sweep(model_config(run, seed), numbers, delay_sampling(run), threads,
                                  {run.sweep.fit_min, run.sweep.fit_max});
        std::vector<double> n, g, k, noise, classical, quantum;
        for (const auto& r : t.rows) {
          n.push_back(r.photon_number);
          g.push_back(r.gain);
          k.push_back(r.k_uv);
          noise.push_back(r.integrals.noise);
          classical.push_back(r.integrals.classical);
          quantum.push_back(r.integrals.quantum);
        }
        py::dict d;
        d["photon_number"] = n;
        d["gain"] = g;
        d["k_uv"] = k;
        d["noise"] = noise;
        d["classical"] = classical;
        d["quantum"] = quantum;
        d["slope_quantum"] = t.slope_quantum;
        d["slope_noise_classical"] = t.slope_noise_classical;
        d["crossover"] = t.crossover;
        return d;
      },
      py::arg("config") = "", py::arg("threads") = 0, py::arg("seed") = 0);

  py::class_<Spectrogram>(m, "Spectrogram")
      .def_readonly("bin_energies", &Spectrogram::bin_energies)
      .def_readonly("magnitude", &Spectrogram::magnitude)
      .def_readonly("samples", &Spectrogram::samples)
      .def_property_readonly("bin_width", &Spectrogram::bin_width);

  m.def(
      "spectrogram",
      [](const std::vector<double>& trace, const std::vector<double>& delays, const std::string& window,
         bool dc_removal, const std::string& axis) {
        SpectrogramOptions o;
        if (window == "hann") o.window = Window::hann;
        else if (window == "rectangular") o.window = Window::rectangular;
        else throw Error(ErrorKind::config, "window must be 'hann' or 'rectangular'");
        if (axis == "oscillation") o.axis = EnergyAxis::oscillation;
        else if (axis == "mismatch") o.axis = EnergyAxis::mismatch;
        else throw Error(ErrorKind::config, "axis must be 'oscillation' or 'mismatch'");
        o.dc_removal = dc_removal;
        return spectrogram(trace, delays, o);
      },
      py::arg("trace"), py::arg("delays"), py::arg("window") = "hann", py::arg("dc_removal") = true,
      py::arg("axis") = "oscillation");

  m.def(
      "detect_peaks",
      [](const Spectrogram& s, double min_energy, double rel_threshold) {
        std::vector<std::pair<double, double>> out;
        for (const auto& p : detect_peaks(s, min_energy, rel_threshold)) out.emplace_back(p.energy, p.magnitude);
        return out;
      },
      py::arg("spectrogram"), py::arg("min_energy") = 0.01, py::arg("rel_threshold") = 0.2,
      "(energy, magnitude) pairs, strongest first.");
  m.def(
      "signal_to_background",
      [](const Spectrogram& s, const std::vector<double>& peaks, double min_energy) {
        return signal_to_background(s, peaks, min_energy);
      },
      py::arg("spectrogram"), py::arg("peak_energies"), py::arg("min_energy") = 0.01);
}
