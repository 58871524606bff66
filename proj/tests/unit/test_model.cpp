#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "vss/errors.hpp"
#include "vss/model.hpp"

using namespace vss;

TEST_CASE("log-log slope") {
  const std::vector<double> x{1, 10, 100};
  const std::vector<double> y{3, 300, 30000};
  CHECK(loglog_slope(x, y) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::isnan(loglog_slope(std::vector<double>{1}, std::vector<double>{1})));
}

TEST_CASE("flux sweep") {
  const auto cfg = fixtures::small_model(64);
  const std::vector<double> n{1e-2, std::pow(10.0, -1.5), 0.1, std::pow(10.0, -0.5), 1.0,
                              10.0, 100.0, 1e3, 1e4};
  const auto table = flux_sweep(cfg, n, {64, 4000.0}, 1);
  REQUIRE(table.rows.size() == n.size());
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const auto& a = table.rows[i - 1].integrals;
    const auto& b = table.rows[i].integrals;
    CHECK(b.quantum > a.quantum);
    CHECK(b.noise > a.noise);
    CHECK(b.noise + b.classical > a.noise + a.classical);
  }
  CHECK(table.slope_quantum == doctest::Approx(1.0).epsilon(0.1));
  CHECK(table.slope_noise_classical == doctest::Approx(2.0).epsilon(0.05));
  if (table.crossover) {
    CHECK(*table.crossover > n.front());
    CHECK(*table.crossover < n.back());
  }

  const std::vector<double> descending{1.0, 0.5};
  CHECK_THROWS_AS(flux_sweep(cfg, descending, {64, 4000.0}), Error);
  const std::vector<double> nonpositive{0.0, 1.0};
  CHECK_THROWS_AS(flux_sweep(cfg, nonpositive, {64, 4000.0}), Error);
}

TEST_CASE("crossover is absent when the range never reaches it") {
  const auto cfg = fixtures::small_model(64);
  const std::vector<double> n{1e-3, 1e-2};
  const auto table = flux_sweep(cfg, n, {32, 2000.0});
  CHECK_FALSE(table.crossover.has_value());
}

TEST_CASE("model validation") {
  ModelConfig cfg;
  cfg.pump.center_energy = 3.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  ModelConfig ok;
  CHECK_NOTHROW(ok.validate());
  CHECK(ok.idler_grid().center == doctest::Approx(1.55));
}
