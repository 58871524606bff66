#include "vss/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "vss/errors.hpp"

namespace vss {

using nlohmann::json;

namespace {

std::string window_name(Window w) { return w == Window::hann ? "hann" : "rectangular"; }
std::string axis_name(EnergyAxis a) { return a == EnergyAxis::mismatch ? "mismatch" : "oscillation"; }
std::string normalization_name(EnsembleNormalization n) {
  return n == EnsembleNormalization::delay_domain ? "delay" : "fourier";
}

// Reads keys out of one JSON object and remembers which it consumed, so leftovers can
// be reported as unknown.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(ErrorKind::config, where() + " must be an object");
  }

  bool has(const char* key) {
    seen_.insert(key);
    return node_.contains(key);
  }

  void number(const char* key, double& out) {
    if (!has(key)) return;
    const json& v = node_.at(key);
    if (!v.is_number()) fail(ErrorKind::config, name(key) + " must be a number");
    out = v.get<double>();
    if (!std::isfinite(out)) fail(ErrorKind::config, name(key) + " must be finite");
  }

  void count(const char* key, std::size_t& out) {
    if (!has(key)) return;
    const json& v = node_.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && v.get<long long>() < 0)) {
      fail(ErrorKind::config, name(key) + " must be a non-negative integer");
    }
    out = v.get<std::size_t>();
  }

  void flag(const char* key, bool& out) {
    if (!has(key)) return;
    const json& v = node_.at(key);
    if (!v.is_boolean()) fail(ErrorKind::config, name(key) + " must be true or false");
    out = v.get<bool>();
  }

  std::string text(const char* key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_string()) fail(ErrorKind::config, name(key) + " must be a string");
    return v.get<std::string>();
  }

  void numbers(const char* key, std::vector<double>& out) {
    if (!has(key)) return;
    const json& v = node_.at(key);
    if (!v.is_array()) fail(ErrorKind::config, name(key) + " must be an array of numbers");
    out.clear();
    for (const auto& x : v) {
      if (!x.is_number()) fail(ErrorKind::config, name(key) + " must be an array of numbers");
      out.push_back(x.get<double>());
    }
  }

  const json* child(const char* key) {
    if (!has(key)) return nullptr;
    return &node_.at(key);
  }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& item : node_.items()) {
      if (!seen_.count(item.key())) {
        fail(ErrorKind::config, "unknown key '" + name(item.key()) + "'");
      }
    }
  }

 private:
  std::string where() const { return path_.empty() ? "config" : "'" + path_ + "'"; }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::config, what);
}

}  // namespace

std::vector<double> default_sweep_photon_numbers() {
  std::vector<double> out;
  for (int k = -4; k <= 12; ++k) out.push_back(std::pow(10.0, 0.5 * k));
  return out;
}

void RunConfig::validate() const {
  require(pump.center_energy_ev > 0.0, "pump.center_energy_ev must be > 0");
  require(pump.duration_fs > 0.0, "pump.duration_fs must be > 0");
  require(crystal.length_m > 0.0, "crystal.length_m must be > 0");
  require(grid.points >= 8 && grid.points % 2 == 0, "grid.points must be even and >= 8");
  require(grid.half_width_ev > 0.0, "grid.half_width_ev must be > 0");
  require(grid.center_ev - grid.half_width_ev > 0.0, "grid must stay at positive energies");
  require(medium.final_energy_ev > 0.0, "medium.final_energy_ev must be > 0");
  require(medium.linewidth_ev >= 0.0, "medium.linewidth_ev must be >= 0");
  if (std::abs(2.0 * grid.center_ev - medium.final_energy_ev) > 1e-9) {
    std::ostringstream msg;
    msg << "grid alignment violated: 2 x grid.center_ev = " << 2.0 * grid.center_ev
        << " eV but medium.final_energy_ev = " << medium.final_energy_ev << " eV";
    fail(ErrorKind::config, msg.str());
  }
  if (std::abs(pump.center_energy_ev - medium.final_energy_ev) > 1e-9) {
    fail(ErrorKind::config, "pump.center_energy_ev must equal medium.final_energy_ev");
  }
  require(schmidt.truncation >= 0.0 && schmidt.truncation < 1.0,
          "schmidt.truncation must lie in [0, 1)");
  require(beam.target_photon_number > 0.0, "beam.target_photon_number must be > 0");
  require(scan.delay_max_fs > 0.0, "scan.delay_max_fs must be > 0");
  require(scan.delay_points >= 16, "scan.delay_points must be >= 16");
  require(ensemble.count >= 1, "ensemble.count must be >= 1");
  require(ensemble.length_min_m > 0.0, "ensemble.length_min_m must be > 0");
  require(ensemble.count == 1 ? ensemble.length_max_m >= ensemble.length_min_m
                              : ensemble.length_max_m > ensemble.length_min_m,
          "ensemble.length_max_m must exceed ensemble.length_min_m");
  require(analysis.peak_min_energy_ev > 0.0, "analysis.peak_min_energy_ev must be > 0");
  require(analysis.peak_rel_threshold > 0.0 && analysis.peak_rel_threshold < 1.0,
          "analysis.peak_rel_threshold must lie in (0, 1)");
  for (std::size_t i = 0; i < sweep.photon_numbers.size(); ++i) {
    require(sweep.photon_numbers[i] > 0.0, "sweep.photon_numbers must be positive");
    require(i == 0 || sweep.photon_numbers[i] > sweep.photon_numbers[i - 1],
            "sweep.photon_numbers must be strictly ascending");
  }
  require(sweep.fit_max > sweep.fit_min && sweep.fit_min > 0.0,
          "sweep.fit_min must be positive and below sweep.fit_max");
  for (double d : joint.compare_durations_fs) {
    require(d > 0.0, "joint.compare_durations_fs must be positive");
  }
  require(joint.max_plot_points >= 2, "joint.max_plot_points must be >= 2");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  cfg.sweep.photon_numbers = default_sweep_photon_numbers();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return cfg;

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream msg;
    msg << "config parse error at line " << line << ", column " << column << ": " << e.what();
    fail(ErrorKind::config, msg.str());
  }

  Section root(doc, "");
  if (const json* node = root.child("pump")) {
    Section s(*node, "pump");
    s.number("center_energy_ev", cfg.pump.center_energy_ev);
    s.number("duration_fs", cfg.pump.duration_fs);
    s.finish();
  }
  if (const json* node = root.child("crystal")) {
    Section s(*node, "crystal");
    s.number("length_m", cfg.crystal.length_m);
    s.number("gs_ps_per_mm", cfg.crystal.gs_ps_per_mm);
    s.number("gi_ps_per_mm", cfg.crystal.gi_ps_per_mm);
    s.finish();
  }
  if (const json* node = root.child("grid")) {
    Section s(*node, "grid");
    s.number("center_ev", cfg.grid.center_ev);
    s.number("half_width_ev", cfg.grid.half_width_ev);
    s.count("points", cfg.grid.points);
    s.finish();
  }
  if (const json* node = root.child("medium")) {
    Section s(*node, "medium");
    s.number("final_energy_ev", cfg.medium.final_energy_ev);
    s.number("linewidth_ev", cfg.medium.linewidth_ev);
    s.count("random_level_count", cfg.medium.random_level_count);
    if (const json* levels = s.child("levels")) {
      if (!levels->is_array()) fail(ErrorKind::config, "medium.levels must be an array");
      for (std::size_t i = 0; i < levels->size(); ++i) {
        Section l((*levels)[i], "medium.levels[" + std::to_string(i) + "]");
        IntermediateLevel level;
        if (!l.has("energy_ev")) fail(ErrorKind::config, l.name("energy_ev") + " is required");
        l.number("energy_ev", level.energy);
        l.number("dipole", level.dipole_product);
        l.finish();
        cfg.medium.levels.push_back(level);
      }
    }
    s.finish();
  }
  if (const json* node = root.child("schmidt")) {
    Section s(*node, "schmidt");
    s.number("truncation", cfg.schmidt.truncation);
    s.finish();
  }
  if (const json* node = root.child("beam")) {
    Section s(*node, "beam");
    s.number("target_photon_number", cfg.beam.target_photon_number);
    s.finish();
  }
  if (const json* node = root.child("scan")) {
    Section s(*node, "scan");
    s.number("delay_max_fs", cfg.scan.delay_max_fs);
    s.count("delay_points", cfg.scan.delay_points);
    s.finish();
  }
  if (const json* node = root.child("ensemble")) {
    Section s(*node, "ensemble");
    s.number("length_min_m", cfg.ensemble.length_min_m);
    s.number("length_max_m", cfg.ensemble.length_max_m);
    s.count("count", cfg.ensemble.count);
    s.finish();
  }
  if (const json* node = root.child("analysis")) {
    Section s(*node, "analysis");
    const std::string window = s.text("window", window_name(cfg.analysis.window));
    if (window == "hann") cfg.analysis.window = Window::hann;
    else if (window == "rectangular") cfg.analysis.window = Window::rectangular;
    else fail(ErrorKind::config, "analysis.window must be 'hann' or 'rectangular'");
    s.flag("dc_removal", cfg.analysis.dc_removal);
    s.number("peak_min_energy_ev", cfg.analysis.peak_min_energy_ev);
    s.number("peak_rel_threshold", cfg.analysis.peak_rel_threshold);
    const std::string axis = s.text("energy_axis", axis_name(cfg.analysis.energy_axis));
    if (axis == "mismatch") cfg.analysis.energy_axis = EnergyAxis::mismatch;
    else if (axis == "oscillation") cfg.analysis.energy_axis = EnergyAxis::oscillation;
    else fail(ErrorKind::config, "analysis.energy_axis must be 'mismatch' or 'oscillation'");
    const std::string norm = s.text("normalization", normalization_name(cfg.analysis.normalization));
    if (norm == "delay") cfg.analysis.normalization = EnsembleNormalization::delay_domain;
    else if (norm == "fourier") cfg.analysis.normalization = EnsembleNormalization::fourier_domain;
    else fail(ErrorKind::config, "analysis.normalization must be 'delay' or 'fourier'");
    s.finish();
  }
  if (const json* node = root.child("sweep")) {
    Section s(*node, "sweep");
    s.numbers("photon_numbers", cfg.sweep.photon_numbers);
    s.number("fit_min", cfg.sweep.fit_min);
    s.number("fit_max", cfg.sweep.fit_max);
    s.finish();
  }
  if (const json* node = root.child("joint")) {
    Section s(*node, "joint");
    s.numbers("compare_durations_fs", cfg.joint.compare_durations_fs);
    s.count("max_plot_points", cfg.joint.max_plot_points);
    s.finish();
  }
  root.finish();
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) fail(ErrorKind::io, "cannot read config file " + path.string());
  try {
    return parse_config(buf.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::string config_to_json(const RunConfig& c, int indent) {
  json levels = json::array();
  for (const auto& l : c.medium.levels) {
    levels.push_back({{"energy_ev", l.energy}, {"dipole", l.dipole_product}});
  }
  json doc = {
      {"pump", {{"center_energy_ev", c.pump.center_energy_ev}, {"duration_fs", c.pump.duration_fs}}},
      {"crystal",
       {{"length_m", c.crystal.length_m},
        {"gs_ps_per_mm", c.crystal.gs_ps_per_mm},
        {"gi_ps_per_mm", c.crystal.gi_ps_per_mm}}},
      {"grid",
       {{"center_ev", c.grid.center_ev},
        {"half_width_ev", c.grid.half_width_ev},
        {"points", c.grid.points}}},
      {"medium",
       {{"final_energy_ev", c.medium.final_energy_ev},
        {"levels", levels},
        {"linewidth_ev", c.medium.linewidth_ev},
        {"random_level_count", c.medium.random_level_count}}},
      {"schmidt", {{"truncation", c.schmidt.truncation}}},
      {"beam", {{"target_photon_number", c.beam.target_photon_number}}},
      {"scan", {{"delay_max_fs", c.scan.delay_max_fs}, {"delay_points", c.scan.delay_points}}},
      {"ensemble",
       {{"length_min_m", c.ensemble.length_min_m},
        {"length_max_m", c.ensemble.length_max_m},
        {"count", c.ensemble.count}}},
      {"analysis",
       {{"window", window_name(c.analysis.window)},
        {"dc_removal", c.analysis.dc_removal},
        {"peak_min_energy_ev", c.analysis.peak_min_energy_ev},
        {"peak_rel_threshold", c.analysis.peak_rel_threshold},
        {"energy_axis", axis_name(c.analysis.energy_axis)},
        {"normalization", normalization_name(c.analysis.normalization)}}},
      {"sweep",
       {{"photon_numbers", c.sweep.photon_numbers},
        {"fit_min", c.sweep.fit_min},
        {"fit_max", c.sweep.fit_max}}},
      {"joint",
       {{"compare_durations_fs", c.joint.compare_durations_fs},
        {"max_plot_points", c.joint.max_plot_points}}},
  };
  return doc.dump(indent);
}

ModelConfig model_config(const RunConfig& c, std::uint64_t seed, std::vector<std::string>* notes) {
  c.validate();
  ModelConfig m;
  m.pump.center_energy = c.pump.center_energy_ev;
  m.pump.duration = c.pump.duration_fs;
  m.crystal.length = c.crystal.length_m;
  m.crystal.inv_gv_signal_ps_per_mm = c.crystal.gs_ps_per_mm;
  m.crystal.inv_gv_idler_ps_per_mm = c.crystal.gi_ps_per_mm;
  m.grid.center = c.grid.center_ev;
  m.grid.half_width = c.grid.half_width_ev;
  m.grid.points = c.grid.points;
  m.truncation = c.schmidt.truncation;

  if (!c.medium.levels.empty()) {
    m.medium.levels = c.medium.levels;
  } else if (c.medium.random_level_count > 0) {
    m.medium = random_medium(seed, c.medium.random_level_count, c.medium.final_energy_ev);
  } else {
    m.medium = paper_default_medium();
    m.medium.levels.clear();
    for (double mismatch : {0.05, 0.075, 0.089}) {
      m.medium.levels.push_back({(c.medium.final_energy_ev + mismatch) / 2.0, 1.0});
    }
  }
  m.medium.ground_energy = 0.0;
  m.medium.final_energy = c.medium.final_energy_ev;
  m.medium.linewidth = c.medium.linewidth_ev;
  m.medium.validate();

  const FrequencyGrid moved = avoid_pole_collisions(m.grid, m.medium);
  if (moved.half_width != m.grid.half_width && notes) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "grid.half_width_ev widened from " << m.grid.half_width << " to " << moved.half_width
        << " to keep nodes off zero-linewidth resonances";
    notes->push_back(msg.str());
  }
  m.grid = moved;
  if (notes) {
    for (auto& w : m.medium.warnings()) notes->push_back(w);
  }
  m.validate();
  return m;
}

DelaySampling delay_sampling(const RunConfig& c) {
  return DelaySampling{c.scan.delay_points, c.scan.delay_max_fs};
}

SpectrogramOptions spectrogram_options(const RunConfig& c) {
  return SpectrogramOptions{c.analysis.window, c.analysis.dc_removal, c.analysis.energy_axis};
}

}  // namespace vss
