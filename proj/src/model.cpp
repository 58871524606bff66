#include "vss/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "vss/errors.hpp"

namespace vss {

FrequencyGrid ModelConfig::idler_grid() const {
  FrequencyGrid g = grid;
  g.center = medium.final_energy - medium.ground_energy - grid.center;
  return g;
}

void ModelConfig::validate() const {
  pump.validate();
  crystal.validate();
  grid.validate();
  medium.validate();
  if (std::abs(pump.center_energy - (medium.final_energy - medium.ground_energy)) > 1e-9) {
    std::ostringstream msg;
    msg << "pump center " << pump.center_energy << " eV must equal the transition energy "
        << medium.final_energy - medium.ground_energy << " eV";
    fail(ErrorKind::config, msg.str());
  }
  require_aligned(grid, idler_grid(), medium.final_energy - medium.ground_energy);
  if (!(truncation >= 0.0 && truncation < 1.0)) {
    fail(ErrorKind::config, "truncation must lie in [0, 1)");
  }
}

TwinBeam prepare_twin_beam(const ModelConfig& config) {
  config.validate();
  TwinBeam beam;
  beam.amplitude =
      normalize(build_joint_amplitude(config.pump, config.crystal, config.grid, config.idler_grid()));
  beam.decomposition = decompose(beam.amplitude, config.truncation);
  return beam;
}

BeamState beam_at(const TwinBeam& beam, double photon_number) {
  BeamState s;
  s.photon_number = photon_number;
  s.gains = mode_gains(beam.decomposition,
                       gain_for_photon_number(beam.decomposition, photon_number));
  s.functions = spectral_functions(beam.decomposition, s.gains);
  return s;
}

DelayTrace run_delay_scan(const ModelConfig& config, double photon_number,
                          const DelaySampling& sampling, unsigned threads) {
  sampling.validate();
  const TwinBeam beam = prepare_twin_beam(config);
  BeamState state = beam_at(beam, photon_number);
  const TpaScanner scanner(TpaKernel(std::move(state.functions), config.medium));
  return delay_scan(scanner, sampling, threads);
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (!(sxx > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return sxy / sxx;
}

FluxTable flux_sweep(const ModelConfig& config, std::span<const double> photon_numbers,
                     const DelaySampling& sampling, unsigned threads, FitWindow fit) {
  sampling.validate();
  if (photon_numbers.empty()) fail(ErrorKind::config, "sweep.photon_numbers is empty");
  for (std::size_t i = 0; i < photon_numbers.size(); ++i) {
    if (!(photon_numbers[i] > 0.0) || !std::isfinite(photon_numbers[i])) {
      fail(ErrorKind::config, "sweep.photon_numbers must be positive and finite");
    }
    if (i > 0 && !(photon_numbers[i] > photon_numbers[i - 1])) {
      fail(ErrorKind::config, "sweep.photon_numbers must be strictly ascending");
    }
  }

  const TwinBeam beam = prepare_twin_beam(config);
  FluxTable table;
  for (double n : photon_numbers) {
    BeamState state = beam_at(beam, n);
    FluxRow row;
    row.photon_number = n;
    row.gain = state.gains.gain;
    row.k_uv = schmidt_number_uv(state.gains);
    const TpaScanner scanner(TpaKernel(std::move(state.functions), config.medium));
    row.integrals = delay_integrated(delay_scan(scanner, sampling, threads));
    table.rows.push_back(row);
  }

  std::vector<double> xs, q, nc;
  for (const auto& row : table.rows) {
    if (row.photon_number >= fit.min_photon_number * (1 - 1e-12) &&
        row.photon_number <= fit.max_photon_number * (1 + 1e-12)) {
      xs.push_back(row.photon_number);
      q.push_back(row.integrals.quantum);
      nc.push_back(row.integrals.noise + row.integrals.classical);
    }
  }
  table.slope_quantum = loglog_slope(xs, q);
  table.slope_noise_classical = loglog_slope(xs, nc);

  // First sign change of log(quantum) − log(noise + classical), interpolated in log N.
  auto excess = [](const FluxRow& r) {
    const double q = r.integrals.quantum;
    const double nc = r.integrals.noise + r.integrals.classical;
    if (!(q > 0.0) || !(nc > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return std::log(q) - std::log(nc);
  };
  for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
    const double a = excess(table.rows[i]);
    const double b = excess(table.rows[i + 1]);
    if (!std::isfinite(a) || !std::isfinite(b)) continue;
    if (a == 0.0) {
      table.crossover = table.rows[i].photon_number;
      break;
    }
    if ((a > 0.0) != (b > 0.0) || b == 0.0) {
      const double la = std::log(table.rows[i].photon_number);
      const double lb = std::log(table.rows[i + 1].photon_number);
      table.crossover = std::exp(la + (lb - la) * a / (a - b));
      break;
    }
  }
  return table;
}

}  // namespace vss
