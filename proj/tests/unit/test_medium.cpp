#include <doctest.h>

#include <cmath>

#include "vss/errors.hpp"
#include "vss/medium.hpp"

using namespace vss;

TEST_CASE("response values") {
  MediumLevels one;
  one.levels = {{1.575, 1.0}};
  CHECK(response(1.55, one).real() == doctest::Approx(40.0).epsilon(1e-12));
  CHECK(response(1.55, one).imag() == 0.0);
  CHECK(response(1.574, one).real() > 0.0);
  CHECK(response(1.576, one).real() < 0.0);

  const auto paper = paper_default_medium();
  CHECK(response(1.55, paper).real() == doctest::Approx(89.1386).epsilon(1e-6));
}

TEST_CASE("pole proximity") {
  MediumLevels one;
  one.levels = {{1.575, 1.0}};
  try {
    response(1.575, one);
    FAIL("expected a pole error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::numerical);
  }
  one.linewidth = 1e-3;
  CHECK(std::isfinite(response(1.575, one).imag()));
}

TEST_CASE("paper default medium") {
  const auto m = paper_default_medium();
  CHECK(m.final_energy == 3.1);
  CHECK(m.ground_energy == 0.0);
  CHECK(m.linewidth == 0.0);
  REQUIRE(m.levels.size() == 3);
  const double mismatch[] = {0.05, 0.075, 0.089};
  const double energy[] = {1.575, 1.5875, 1.5945};
  for (int k = 0; k < 3; ++k) {
    CHECK(m.levels[k].energy == doctest::Approx(energy[k]).epsilon(1e-14));
    CHECK(2.0 * m.levels[k].energy - m.final_energy == doctest::Approx(mismatch[k]).epsilon(1e-12));
    CHECK(m.levels[k].energy > 0.0);
    CHECK(m.levels[k].energy < m.final_energy);
    CHECK(m.levels[k].dipole_product == 1.0);
  }
  CHECK(m.warnings().empty());
}

TEST_CASE("response properties") {
  auto m = paper_default_medium();
  auto scaled = m;
  for (auto& l : scaled.levels) l.dipole_product *= -2.5;
  for (double w : {1.3, 1.55, 1.6, 1.8}) {
    CHECK(std::abs(response(w, scaled) + 2.5 * response(w, m)) <= 1e-14 * std::abs(response(w, scaled)));
  }
  for (double w : {1e6, -1e6}) {
    CHECK(std::abs(response(w, m)) < 3.0 / (std::abs(w) - 1.5945));
  }
  // 1/(x − iγ) = (x + iγ)/(x² + γ²): the regularized response has a positive imaginary part.
  m.linewidth = 2e-3;
  for (double w = 1.4; w < 1.7; w += 0.0013) CHECK(response(w, m).imag() > 0.0);
}

TEST_CASE("validation and warnings") {
  MediumLevels m;
  CHECK_THROWS_AS(m.validate(), Error);  // no levels
  m.levels = {{3.5, 1.0}};
  CHECK_NOTHROW(m.validate());
  CHECK(m.warnings().size() == 1);
  m.linewidth = -1.0;
  CHECK_THROWS_AS(m.validate(), Error);
}

TEST_CASE("random medium is reproducible and in range") {
  const auto a = random_medium(42, 5);
  const auto b = random_medium(42, 5);
  const auto c = random_medium(43, 5);
  REQUIRE(a.levels.size() == 5);
  bool differs = false;
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(a.levels[k].energy == b.levels[k].energy);
    differs = differs || a.levels[k].energy != c.levels[k].energy;
    const double mm = 2.0 * a.levels[k].energy - a.final_energy;
    CHECK(mm >= 0.01 - 1e-15);
    CHECK(mm < 0.1);
    if (k > 0) CHECK(a.levels[k].energy >= a.levels[k - 1].energy);
  }
  CHECK(differs);
}

TEST_CASE("grid collision avoidance") {
  const auto m = paper_default_medium();
  FrequencyGrid g;  // default grid puts every pole at a cell midpoint
  CHECK(pole_clearance(g, m) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(avoid_pole_collisions(g, m).half_width == g.half_width);

  // A grid with 1.575 eV exactly on node 1: center 1.55, step 0.025 → W = 0.025·(n−1)/2.
  FrequencyGrid hit;
  hit.points = 8;
  hit.center = 1.55;
  hit.half_width = 0.0875;  // nodes 1.4625 + 0.025·j → 1.5625, 1.5875 (pole), …
  CHECK(pole_clearance(hit, m) < 1e-9);
  const auto moved = avoid_pole_collisions(hit, m);
  CHECK(moved.half_width > hit.half_width);
  CHECK(moved.half_width < hit.half_width * (1.0 + 1e-5));
  for (std::size_t j = 0; j < moved.points; ++j) {
    for (const auto& l : m.levels) CHECK(std::abs(moved.node(j) - l.energy) >= 1e-12);
  }
}
