#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vss/cli.hpp"
#include "vss/output.hpp"

using namespace vss;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vss_test_" + name);
  fs::remove_all(p);
  return p;
}

ErrorKind kind_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::io;
}

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

// Small enough for a unit test, large enough that every stage does real work.
const char* kSmall = R"({
  "pump": {"duration_fs": 60},
  "crystal": {"length_m": 0.004},
  "grid": {"half_width_ev": 0.06, "points": 64},
  "scan": {"delay_points": 64, "delay_max_fs": 4000},
  "ensemble": {"length_min_m": 0.003, "length_max_m": 0.005, "count": 3},
  "sweep": {"photon_numbers": [0.01, 0.1, 1, 10]},
  "joint": {"max_plot_points": 32}
})";

}  // namespace

TEST_CASE("empty config yields the defaults") {
  for (const char* text : {"", "  \n\t", "{}"}) {
    const RunConfig c = parse_config(text);
    CHECK(c.pump.center_energy_ev == 3.1);
    CHECK(c.pump.duration_fs == 1000.0);
    CHECK(c.crystal.length_m == 1e-3);
    CHECK(c.crystal.gs_ps_per_mm == 5.2);
    CHECK(c.crystal.gi_ps_per_mm == 5.6);
    CHECK(c.grid.points == 1024);
    CHECK(c.scan.delay_max_fs == 8000.0);
    CHECK(c.scan.delay_points == 1024);
    CHECK(c.ensemble.count == 100);
    CHECK(c.ensemble.length_min_m == 0.020);
    CHECK(c.ensemble.length_max_m == 0.022);
    CHECK(c.beam.target_photon_number == 1.0);
    CHECK(c.analysis.window == Window::hann);
    CHECK(c.analysis.dc_removal);
    REQUIRE(c.sweep.photon_numbers.size() == 17);
    CHECK(c.sweep.photon_numbers.front() == doctest::Approx(1e-2));
    CHECK(c.sweep.photon_numbers.back() == doctest::Approx(1e6));
  }
  const ModelConfig m = model_config(parse_config(""), 0);
  REQUIRE(m.medium.levels.size() == 3);
  CHECK(m.medium.levels[0].energy == doctest::Approx(1.575));
}

TEST_CASE("config errors") {
  CHECK(kind_of(R"({"grid": {"center_ev": 1.6}})") == ErrorKind::config);
  CHECK(message_of(R"({"grid": {"center_ev": 1.6}})").find("alignment") != std::string::npos);
  CHECK(message_of(R"({"pump": {"power_w": 1}})").find("pump.power_w") != std::string::npos);
  CHECK(message_of(R"({"pumpp": {}})").find("pumpp") != std::string::npos);
  CHECK(message_of(R"({"medium": {"levels": [{"energy_ev": 1.6, "dipol": 1}]}})")
            .find("medium.levels[0].dipol") != std::string::npos);
  CHECK(message_of(R"({"scan": {"delay_points": 8}})").find("delay_points") != std::string::npos);
  CHECK(message_of(R"({"pump": {"duration_fs": "long"}})").find("pump.duration_fs") !=
        std::string::npos);
  CHECK(message_of(R"({"analysis": {"window": "blackman"}})").find("window") != std::string::npos);
  const std::string bad = "{\n  \"pump\": {\n    \"duration_fs\": 10,,\n  }\n}";
  CHECK(kind_of(bad) == ErrorKind::config);
  CHECK(message_of(bad).find("line 3") != std::string::npos);
  CHECK(message_of(R"({"sweep": {"photon_numbers": [1, 0.5]}})").find("ascending") !=
        std::string::npos);
}

TEST_CASE("load_config reports missing files as I/O errors") {
  try {
    load_config("/nonexistent/vss/config.json");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
    CHECK(exit_code(e.kind()) == 4);
  }
  CHECK(exit_code(ErrorKind::config) == 2);
  CHECK(exit_code(ErrorKind::numerical) == 3);
}

TEST_CASE("config echo round-trips") {
  const RunConfig c = parse_config(kSmall);
  const std::string echo = config_to_json(c);
  CHECK(config_to_json(parse_config(echo)) == echo);
  RunConfig withlevels = parse_config(R"({"medium": {"levels": [{"energy_ev": 1.58}]}})");
  CHECK(config_to_json(parse_config(config_to_json(withlevels))) == config_to_json(withlevels));
}

TEST_CASE("random level sets follow the seed") {
  const RunConfig c = parse_config(R"({"medium": {"random_level_count": 4}})");
  const auto a = model_config(c, 7);
  const auto b = model_config(c, 7);
  const auto d = model_config(c, 8);
  REQUIRE(a.medium.levels.size() == 4);
  CHECK(a.medium.levels[2].energy == b.medium.levels[2].energy);
  CHECK(a.medium.levels[2].energy != d.medium.levels[2].energy);
}

TEST_CASE("CSV number format golden") {
  CHECK(format_number(1.0) == "1.00000000e+00");
  CHECK(format_number(-0.0) == "0.00000000e+00");
  CHECK(format_number(0.000123456789123) == "1.23456789e-04");
  CHECK(format_number(-98765.4321) == "-9.87654321e+04");
  CHECK(format_number(std::nan("")) == "nan");
  CsvTable t({"a", "b"});
  t.row({1.5, -2.0});
  t.row({3e-300, 1e300});
  CHECK(t.str() ==
        "a,b\n"
        "1.50000000e+00,-2.00000000e+00\n"
        "3.00000000e-300,1.00000000e+300\n");
  CHECK_THROWS_AS(t.row({1.0}), Error);
}

TEST_CASE("commands write their files and are thread-count independent") {
  const RunConfig c = parse_config(kSmall);
  for (const char* name : {"joint-spectrum", "schmidt", "spectrogram", "ensemble", "flux-sweep"}) {
    CAPTURE(name);
    const fs::path one = scratch(std::string(name) + "_1");
    const fs::path many = scratch(std::string(name) + "_3");
    const auto r1 = run_command(name, c, {one, 1, 0});
    const auto r3 = run_command(name, c, {many, 3, 0});
    for (const auto& f : r1.files) {
      CAPTURE(f);
      REQUIRE(fs::exists(one / f));
      if (f == "manifest.json") {
        auto a = nlohmann::json::parse(slurp(one / f));
        auto b = nlohmann::json::parse(slurp(many / f));
        CHECK(a["command"] == name);
        CHECK(a.contains("derived"));
        a.erase("runtime");
        b.erase("runtime");
        CHECK(a == b);
        // The echoed config reproduces the run.
        CHECK(config_to_json(parse_config(a["config"].dump())) == config_to_json(c));
      } else if (f != "plot.svg") {
        CHECK(slurp(one / f) == slurp(many / f));
      }
    }
    const std::string data = slurp(one / "data.csv");
    REQUIRE(data.find('\n') != std::string::npos);
    CHECK(data.find('\r') == std::string::npos);
    CHECK(slurp(one / "plot.svg").rfind("<svg", 0) == 0);
    fs::remove_all(one);
    fs::remove_all(many);
  }
}

TEST_CASE("command headers are fixed") {
  const RunConfig c = parse_config(kSmall);
  const fs::path dir = scratch("headers");
  auto header = [&](const char* cmd, const char* file) {
    run_command(cmd, c, {dir, 1, 0});
    const std::string s = slurp(dir / file);
    return s.substr(0, s.find('\n'));
  };
  CHECK(header("joint-spectrum", "data.csv") == "omega_s_ev,omega_i_ev,magnitude,phase_rad");
  CHECK(header("joint-spectrum", "correlations.csv") == "pump_duration_fs,correlation_coefficient");
  CHECK(header("schmidt", "data.csv") == "mode,lambda,u,v,occupation");
  CHECK(header("spectrogram", "trace.csv") == "delay_fs,noise,classical,quantum,total");
  CHECK(header("spectrogram", "data.csv") == "energy_ev,magnitude,magnitude_raw");
  CHECK(header("spectrogram", "peaks.csv") == "energy_ev,magnitude");
  CHECK(header("flux-sweep", "data.csv") ==
        "photon_number,gain,k_uv,noise,classical,quantum,slope_quantum,slope_noise_classical,"
        "crossover_photon_number");
  fs::remove_all(dir);
}

TEST_CASE("unwritable output directory is an I/O error") {
  const RunConfig c = parse_config(kSmall);
  const fs::path file = scratch("blocker");
  { std::ofstream(file) << "x"; }
  try {
    run_command("schmidt", c, {file / "sub", 1, 0});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
  }
  fs::remove(file);
}
