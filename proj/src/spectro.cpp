#include "vss/spectro.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <sstream>

#include "vss/errors.hpp"
#include "vss/parallel.hpp"
#include "vss/units.hpp"

namespace vss {

namespace {

// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  double* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan plan = nullptr;

  explicit FftwBuffer(std::size_t m) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    in = static_cast<double*>(fftw_malloc(sizeof(double) * m));
    out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (m / 2 + 1)));
    if (in == nullptr || out == nullptr) fail(ErrorKind::numerical, "FFT buffer allocation failed");
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(m), in, out, FFTW_ESTIMATE);
    if (plan == nullptr) fail(ErrorKind::numerical, "FFT plan creation failed");
  }
  ~FftwBuffer() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan) fftw_destroy_plan(plan);
    fftw_free(in);
    fftw_free(out);
  }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
};

double window_weight(Window w, std::size_t m, std::size_t count) {
  if (w == Window::rectangular) return 1.0;
  // Periodic Hann: a bin-centred tone leaks into its two neighbours only.
  return 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(m) / static_cast<double>(count)));
}

std::vector<double> prepared(std::span<const double> trace, const SpectrogramOptions& options) {
  const std::size_t m = trace.size();
  double mean = 0.0;
  if (options.dc_removal) {
    for (double x : trace) mean += x;
    mean /= static_cast<double>(m);
  }
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = (trace[i] - mean) * window_weight(options.window, i, m);
  return out;
}

double check_delays(std::span<const double> trace, std::span<const double> delays) {
  if (trace.size() != delays.size()) {
    fail(ErrorKind::input, "trace and delay vectors differ in length");
  }
  if (trace.size() < 16) fail(ErrorKind::input, "spectrogram needs at least 16 delays");
  const double dt = (delays.back() - delays.front()) / static_cast<double>(delays.size() - 1);
  if (!(dt > 0.0)) fail(ErrorKind::input, "delays must increase");
  for (std::size_t i = 1; i < delays.size(); ++i) {
    if (std::abs((delays[i] - delays[i - 1]) - dt) > 1e-9 * dt) {
      std::ostringstream msg;
      msg << "non-uniform delays at index " << i;
      fail(ErrorKind::input, msg.str());
    }
  }
  return dt;
}

std::vector<std::complex<double>> one_sided(std::span<const double> samples) {
  const std::size_t m = samples.size();
  FftwBuffer buf(m);
  std::copy(samples.begin(), samples.end(), buf.in);
  fftw_execute(buf.plan);
  std::vector<std::complex<double>> out(m / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = {buf.out[k][0], buf.out[k][1]};
  return out;
}

Spectrogram assemble(const std::vector<std::complex<double>>& spectrum, std::size_t m, double dt,
                     const SpectrogramOptions& options) {
  Spectrogram s;
  s.window = options.window;
  s.dc_removed = options.dc_removal;
  s.axis = options.axis;
  s.samples = m;
  const double scale = options.axis == EnergyAxis::mismatch ? 2.0 : 1.0;
  const double width = scale * kTwoPi * kHbarEvFs / (static_cast<double>(m) * dt);
  s.bin_energies.resize(spectrum.size());
  s.magnitude.resize(spectrum.size());
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    s.bin_energies[k] = static_cast<double>(k) * width;
    s.magnitude[k] = std::abs(spectrum[k]);
  }
  return s;
}

std::size_t first_band_bin(const Spectrogram& spec, double min_energy) {
  const double width = spec.bin_width();
  if (!(min_energy >= width * (1.0 - 1e-12))) {
    fail(ErrorKind::domain, "min_energy must be at least one bin to exclude the DC pedestal");
  }
  std::size_t k = 0;
  while (k < spec.bin_energies.size() && spec.bin_energies[k] < min_energy * (1.0 - 1e-12)) ++k;
  if (k >= spec.bin_energies.size()) {
    fail(ErrorKind::input, "no spectrogram bins above the minimum peak energy");
  }
  return k;
}

}  // namespace

double Spectrogram::bin_width() const noexcept {
  return bin_energies.size() > 1 ? bin_energies[1] - bin_energies[0] : 0.0;
}

Spectrogram spectrogram(std::span<const double> trace, std::span<const double> delays,
                        const SpectrogramOptions& options) {
  const double dt = check_delays(trace, delays);
  return assemble(one_sided(prepared(trace, options)), trace.size(), dt, options);
}

std::vector<std::complex<double>> complex_spectrum(std::span<const double> trace,
                                                   std::span<const double> delays,
                                                   const SpectrogramOptions& options) {
  check_delays(trace, delays);
  return one_sided(prepared(trace, options));
}

double windowed_energy(std::span<const double> trace, const SpectrogramOptions& options) {
  double e = 0.0;
  for (double x : prepared(trace, options)) e += x * x;
  return e;
}

double spectral_energy(const Spectrogram& spec) {
  const std::size_t m = spec.samples;
  double e = 0.0;
  for (std::size_t k = 0; k < spec.magnitude.size(); ++k) {
    const double p = spec.magnitude[k] * spec.magnitude[k];
    const bool unpaired = k == 0 || (m % 2 == 0 && k == m / 2);
    e += unpaired ? p : 2.0 * p;
  }
  return e / static_cast<double>(m);
}

std::vector<Peak> detect_peaks(const Spectrogram& spec, double min_energy, double rel_threshold) {
  if (!(rel_threshold > 0.0 && rel_threshold < 1.0)) {
    fail(ErrorKind::domain, "rel_threshold must lie in (0, 1)");
  }
  const std::size_t first = first_band_bin(spec, min_energy);
  const auto& mag = spec.magnitude;
  const double top = *std::max_element(mag.begin() + static_cast<std::ptrdiff_t>(first), mag.end());
  const double floor = rel_threshold * top;
  const double width = spec.bin_width();

  std::vector<Peak> peaks;
  for (std::size_t k = std::max<std::size_t>(first, 1); k + 1 < mag.size(); ++k) {
    const double a = mag[k - 1], b = mag[k], c = mag[k + 1];
    if (!(b > a && b > c) || b < floor || !(b > 0.0)) continue;
    const double denom = a - 2.0 * b + c;
    const double p = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
    peaks.push_back({spec.bin_energies[k] + p * width, b - 0.25 * (a - c) * p});
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& x, const Peak& y) { return x.magnitude > y.magnitude; });
  return peaks;
}

double signal_to_background(const Spectrogram& spec, std::span<const double> peak_energies,
                            double min_energy) {
  if (peak_energies.empty()) fail(ErrorKind::input, "signal_to_background needs at least one peak");
  const std::size_t first = first_band_bin(spec, min_energy);
  const double width = spec.bin_width();
  const auto last = static_cast<long>(spec.magnitude.size()) - 1;

  std::vector<long> bins;
  double signal = 0.0;
  for (double e : peak_energies) {
    const long k = std::clamp(std::lround(e / width), 0L, last);
    bins.push_back(k);
    signal += spec.magnitude[static_cast<std::size_t>(k)];
  }
  signal /= static_cast<double>(bins.size());

  std::vector<double> background;
  for (std::size_t k = first; k < spec.magnitude.size(); ++k) {
    const bool near = std::any_of(bins.begin(), bins.end(), [k](long p) {
      return std::abs(static_cast<long>(k) - p) <= 2;
    });
    if (!near) background.push_back(spec.magnitude[k]);
  }
  if (background.empty()) return kSignalToBackgroundCap;
  const std::size_t half = background.size() / 2;
  std::nth_element(background.begin(), background.begin() + static_cast<std::ptrdiff_t>(half),
                   background.end());
  double median = background[half];
  if (background.size() % 2 == 0) {
    const double lower = *std::max_element(background.begin(),
                                           background.begin() + static_cast<std::ptrdiff_t>(half));
    median = 0.5 * (median + lower);
  }
  if (!(median > 0.0)) return kSignalToBackgroundCap;
  return std::min(signal / median, kSignalToBackgroundCap);
}

std::vector<double> uniform_lengths(double min, double max, std::size_t count) {
  if (count == 0) fail(ErrorKind::config, "ensemble.count must be >= 1");
  if (!(min > 0.0) || !(max >= min)) fail(ErrorKind::config, "ensemble length range is invalid");
  if (count > 1 && !(max > min)) {
    fail(ErrorKind::config, "ensemble with more than one member needs length_max > length_min");
  }
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = count == 1 ? min
                        : min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  if (count > 1) out.back() = max;
  return out;
}

EnsembleResult ensemble_average(const ModelConfig& base, std::span<const double> lengths,
                                const EnsembleOptions& options) {
  if (lengths.empty()) fail(ErrorKind::config, "ensemble needs at least one length");
  for (std::size_t i = 1; i < lengths.size(); ++i) {
    if (!(lengths[i] > lengths[i - 1])) {
      fail(ErrorKind::config, "ensemble lengths must be strictly increasing");
    }
  }
  options.sampling.validate();

  EnsembleResult result;
  result.lengths.assign(lengths.begin(), lengths.end());
  result.delays = options.sampling.delays();
  const std::size_t m = result.delays.size();

  std::vector<std::vector<double>> traces(lengths.size());
  result.members.resize(lengths.size());
  parallel_for(lengths.size(), options.threads, [&](std::size_t i) {
    try {
      ModelConfig cfg = base;
      cfg.crystal.length = lengths[i];
      const TwinBeam beam = prepare_twin_beam(cfg);
      BeamState state = beam_at(beam, options.photon_number);
      EnsembleMember& member = result.members[i];
      member.length = lengths[i];
      member.gain = state.gains.gain;
      member.k_uv = schmidt_number_uv(state.gains);
      member.rank = beam.decomposition.rank();
      const TpaScanner scanner(TpaKernel(std::move(state.functions), cfg.medium));
      traces[i] = delay_scan(scanner, options.sampling, 1).totals();
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "ensemble member with crystal length " << lengths[i] << " m failed: " << e.what();
      throw Error(e.kind(), msg.str());
    }
  });

  result.averaged_trace.assign(m, 0.0);
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const double top = *std::max_element(traces[i].begin(), traces[i].end());
    if (!(top > 0.0)) {
      std::ostringstream msg;
      msg << "ensemble member with crystal length " << lengths[i] << " m has a non-positive trace";
      fail(ErrorKind::numerical, msg.str());
    }
    result.members[i].trace_max = top;
    for (std::size_t t = 0; t < m; ++t) result.averaged_trace[t] += traces[i][t] / top;
  }
  for (double& x : result.averaged_trace) x /= static_cast<double>(traces.size());

  const double dt = check_delays(result.averaged_trace, result.delays);
  SpectrogramOptions raw = options.spectrogram;
  raw.dc_removal = false;
  result.raw_spectrogram = assemble(one_sided(prepared(result.averaged_trace, raw)), m, dt, raw);

  if (options.normalization == EnsembleNormalization::delay_domain) {
    result.averaged_spectrogram =
        assemble(one_sided(prepared(result.averaged_trace, options.spectrogram)), m, dt,
                 options.spectrogram);
  } else {
    std::vector<std::complex<double>> mean(m / 2 + 1, {0.0, 0.0});
    for (const auto& trace : traces) {
      const auto spectrum = one_sided(prepared(trace, options.spectrogram));
      double top = 0.0;
      for (const auto& x : spectrum) top = std::max(top, std::abs(x));
      if (!(top > 0.0)) fail(ErrorKind::numerical, "ensemble member has an empty spectrum");
      for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += spectrum[k] / top;
    }
    for (auto& x : mean) x /= static_cast<double>(traces.size());
    result.averaged_spectrogram = assemble(mean, m, dt, options.spectrogram);
  }
  return result;
}

}  // namespace vss
