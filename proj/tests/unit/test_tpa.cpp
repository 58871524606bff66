#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "tpa_oracle.hpp"
#include "vss/errors.hpp"
#include "vss/tpa.hpp"
#include "vss/units.hpp"

using namespace vss;
using cd = std::complex<double>;

namespace {

using Oracle = oracle::TpaOracle;
double close(cd a, cd b) { return oracle::relative(a, b); }

}  // namespace

TEST_CASE("naive terms match the literal oracle on n = 8") {
  const auto cfg = fixtures::small_model(8, 0.05);
  for (double photons : {0.2, 5.0}) {
    const auto f = fixtures::functions_at(cfg, photons);
    const Oracle o{f, cfg.medium};
    CHECK(close(term_ssss(f, cfg.medium), o.ssss()) < 1e-12);
    CHECK(close(term_iiii(f, cfg.medium), o.iiii()) < 1e-12);
    for (double tau : {0.0, 37.0, 900.0, 7321.5}) {
      CAPTURE(tau);
      CHECK(close(term_sisi(f, cfg.medium, tau), o.sisi(tau)) < 1e-12);
      CHECK(close(term_isis(f, cfg.medium, tau), o.isis(tau)) < 1e-12);
      CHECK(close(term_siis(f, cfg.medium, tau), o.siis(tau)) < 1e-12);
      CHECK(close(term_issi(f, cfg.medium, tau), o.issi(tau)) < 1e-12);
    }
  }
}

TEST_CASE("fast scanner matches the naive sums on n = 64") {
  const auto cfg = fixtures::small_model(64);
  const auto f = fixtures::functions_at(cfg, 2.0);
  const TpaKernel kernel(f, cfg.medium);
  const TpaScanner fast(kernel);
  CHECK(close(fast.ssss(), kernel.ssss()) < 1e-10);
  CHECK(close(fast.iiii(), kernel.iiii()) < 1e-10);
  for (double tau : {0.0, 12.5, 640.0, 3999.0, 8000.0}) {
    CAPTURE(tau);
    const auto check = [](const TermBrackets& a, const TermBrackets& b) {
      const double scale = std::abs(b.classical) + std::abs(b.quantum);
      CHECK(std::abs(a.classical - b.classical) <= 1e-10 * scale);
      CHECK(std::abs(a.quantum - b.quantum) <= 1e-10 * scale);
    };
    check(fast.sisi(tau), kernel.sisi(tau));
    check(fast.isis(tau), kernel.isis(tau));
    check(fast.siis(tau), kernel.siis(tau));
    check(fast.issi(tau), kernel.issi(tau));
  }
}

TEST_CASE("term structure") {
  const auto cfg = fixtures::small_model(32);
  const auto f = fixtures::functions_at(cfg, 1.5);
  const TpaKernel kernel(f, cfg.medium);
  const TpaScanner scanner(kernel);

  const double ssss = term_ssss(f, cfg.medium);
  CHECK(ssss > 0.0);
  CHECK(std::abs(kernel.ssss().imag()) <= 1e-10 * ssss);
  CHECK(std::abs(kernel.iiii().imag()) <= 1e-10 * kernel.iiii().real());

  for (double tau : {0.0, 100.0, 2500.0}) {
    const auto t = scanner.terms(tau);
    CHECK(t.ssss == scanner.ssss());  // no τ dependence
    const double scale = std::abs(t.total());
    CHECK(std::abs((t.sisi + t.isis).imag()) <= 1e-10 * scale);
    CHECK(std::abs((t.siis + t.issi).imag()) <= 1e-10 * scale);
    CHECK(t.total().real() >= -1e-9 * scale);

    // F₂F₂ part of sisi is |Δω Σ K F₂ e^{iωτ/ħ}|².
    cd a = 0.0;
    for (std::size_t j = 0; j < cfg.grid.points; ++j) {
      const double w = f.grid_i.node(j);
      a += response(w, cfg.medium) * f.f2(static_cast<Eigen::Index>(cfg.grid.points - 1 - j),
                                          static_cast<Eigen::Index>(j)) *
           std::exp(cd(0.0, w * tau / kHbarEvFs));
    }
    const double expected = std::norm(f.grid_i.step() * a);
    CHECK(kernel.sisi(tau).quantum.real() == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::abs(kernel.sisi(tau).quantum.imag()) <= 1e-12 * expected);
  }

  // τ = 0: every phase factor is one, so siis reduces to plain products.
  const auto s0 = kernel.siis(0.0);
  cd direct = 0.0;
  const auto n = static_cast<Eigen::Index>(cfg.grid.points);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      direct += std::conj(kernel.response_idler()(j)) * kernel.response_signal()(k) *
                (std::conj(f.f2(n - 1 - j, j)) * f.f2(k, n - 1 - k) + f.f1s(n - 1 - j, k) * f.f1i(j, n - 1 - k));
  CHECK(close(s0.value(), f.grid_s.step() * f.grid_s.step() * direct) < 1e-12);
}

TEST_CASE("mirror symmetry for a symmetric twin beam") {
  auto cfg = fixtures::small_model(32);
  cfg.crystal.inv_gv_idler_ps_per_mm = cfg.crystal.inv_gv_signal_ps_per_mm;
  const auto f = fixtures::functions_at(cfg, 1.0);
  const double ssss = term_ssss(f, cfg.medium);
  CHECK(term_iiii(f, cfg.medium) == doctest::Approx(ssss).epsilon(1e-10));
  for (double tau : {0.0, 333.0, 5000.0}) {
    const cd a = term_sisi(f, cfg.medium, tau);
    const cd b = term_isis(f, cfg.medium, tau);
    CHECK(std::abs(b - std::conj(a)) <= 1e-10 * std::abs(a));
  }
}

TEST_CASE("global phase on the response leaves the groups unchanged") {
  const auto cfg = fixtures::small_model(32);
  const auto f = fixtures::functions_at(cfg, 1.0);
  // Dipole products are real, so the global phase reachable through the medium is π.
  auto rotated = cfg.medium;
  for (auto& l : rotated.levels) l.dipole_product = -l.dipole_product;
  for (double tau : {0.0, 1234.0}) {
    const auto a = grouped_signal(f, cfg.medium, tau);
    const auto b = grouped_signal(f, rotated, tau);
    CHECK(b.noise == doctest::Approx(a.noise).epsilon(1e-13));
    CHECK(b.classical == doctest::Approx(a.classical).epsilon(1e-12));
    CHECK(b.quantum == doctest::Approx(a.quantum).epsilon(1e-12));
  }
}

TEST_CASE("grouping") {
  const auto cfg = fixtures::small_model(32);
  const auto vac = fixtures::functions_at(cfg, 1.0);
  SUBCASE("vacuum") {
    auto zero = vac;
    zero.f1s.setZero();
    zero.f1i.setZero();
    zero.f2.setZero();
    const auto g = grouped_signal(zero, cfg.medium, 100.0);
    CHECK(g.noise == 0.0);
    CHECK(g.classical == 0.0);
    CHECK(g.quantum == 0.0);
    CHECK(g.total == 0.0);
  }
  SUBCASE("additivity") {
    for (double tau : {0.0, 50.0, 4000.0}) {
      const auto g = grouped_signal(vac, cfg.medium, tau);
      const cd six = term_ssss(vac, cfg.medium) + term_iiii(vac, cfg.medium) +
                     term_sisi(vac, cfg.medium, tau) + term_isis(vac, cfg.medium, tau) +
                     term_siis(vac, cfg.medium, tau) + term_issi(vac, cfg.medium, tau);
      CHECK(std::abs(g.total - (g.noise + g.classical + g.quantum)) <= 1e-9 * g.total);
      CHECK(std::abs(g.total - six.real()) <= 1e-9 * g.total);
    }
  }
  SUBCASE("low gain favours the quantum group") {
    ModelConfig def;
    def.grid.points = 256;
    def.grid.half_width = 0.06375;
    const auto f = fixtures::functions_at(def, 1e-3);
    const auto g = grouped_signal(f, def.medium, 0.0);
    CHECK(g.quantum > 100.0 * std::abs(g.classical));
    CHECK(g.quantum > 100.0 * g.noise);
  }
  SUBCASE("residue check") {
    CHECK_THROWS_AS(group_terms(cd(1.0, 0.1), 0.0, {}, {}, {}, {}), Error);
    const auto g = group_terms(cd(1.0, 1e-12), 0.0, {}, {}, {}, {});
    CHECK(g.noise == 1.0);
  }
  SUBCASE("misaligned grids") {
    auto bad = vac;
    bad.grid_i.center += 0.01;
    try {
      grouped_signal(bad, cfg.medium, 0.0);
      FAIL("expected a configuration error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::config);
    }
  }
}

TEST_CASE("delay scan") {
  const auto cfg = fixtures::small_model(64);
  const auto f = fixtures::functions_at(cfg, 1.0);
  const TpaScanner scanner(TpaKernel(f, cfg.medium));
  CHECK_THROWS_AS(delay_scan(scanner, {15, 100.0}), Error);
  CHECK_THROWS_AS(delay_scan(scanner, {64, 0.0}), Error);

  const DelaySampling sampling{128, 8000.0};
  const auto trace = delay_scan(scanner, sampling, 1);
  REQUIRE(trace.delays.size() == 128);
  CHECK(trace.delays.front() == 0.0);
  CHECK(trace.delays.back() == 8000.0);
  for (std::size_t m = 1; m < 128; ++m) {
    CHECK(trace.delays[m] - trace.delays[m - 1] == doctest::Approx(8000.0 / 127).epsilon(1e-12));
  }
  const auto g0 = grouped_signal(f, cfg.medium, 0.0);
  CHECK(trace.grouped[0].total == doctest::Approx(g0.total).epsilon(1e-13));
  const double n0 = trace.grouped[0].noise;
  for (const auto& g : trace.grouped) {
    CHECK(std::abs(g.noise - n0) <= 1e-10 * std::abs(n0));
    CHECK(g.total >= -1e-9 * std::abs(g.total));
  }

  const auto threaded = delay_scan(scanner, sampling, 3);
  for (std::size_t m = 0; m < 128; ++m) {
    CHECK(threaded.grouped[m].total == trace.grouped[m].total);
  }
}

TEST_CASE("delay integration") {
  DelayTrace t;
  t.delays = DelaySampling{16, 750.0}.delays();
  t.grouped.assign(16, GroupedSignal{});
  auto zero = delay_integrated(t);
  CHECK(zero.noise == 0.0);
  CHECK(zero.quantum == 0.0);
  for (auto& g : t.grouped) g = {2.0, 3.0, 5.0, 10.0};
  const auto c = delay_integrated(t);
  CHECK(c.noise == doctest::Approx(1500.0).epsilon(1e-14));
  CHECK(c.classical == doctest::Approx(2250.0).epsilon(1e-14));
  CHECK(c.quantum == doctest::Approx(3750.0).epsilon(1e-14));
}
