#pragma once

// Converter figures of merit: code-density DNL/INL from a slow ramp, and
// DFT-based SNDR/SFDR/ENOB from a coherently sampled sine.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include "pipeadc/config.hpp"
#include "pipeadc/fft.hpp"
#include "pipeadc/pipeline.hpp"

namespace pipeadc {

// ---------------------------------------------------------------------------
// Linearity

struct Extremum {
  double value = 0.0;  // largest magnitude, in LSB
  int code = 0;
};

struct LinearityReport {
  std::vector<double> dnl = std::vector<double>(kNumCodes, 0.0);
  std::vector<double> inl = std::vector<double>(kNumCodes, 0.0);
  std::vector<std::size_t> histogram = std::vector<std::size_t>(kNumCodes, 0);
  std::vector<int> missing_codes;
  Extremum max_dnl;
  Extremum max_inl;
};

inline constexpr std::size_t kMinHitsPerCode = 32;

/// Code-density linearity. End codes absorb the over-range ramp, so only
/// codes 1..254 enter the average; INL is referenced to the line through
/// codes 1 and 254.
inline LinearityReport ramp_linearity(std::span<const int> codes) {
  LinearityReport r;
  for (int c : codes) {
    if (c < 0 || c >= kNumCodes) throw Error("ramp_linearity: code out of range");
    ++r.histogram[c];
  }
  if (r.histogram.front() == 0 || r.histogram.back() == 0)
    throw Error("ramp_linearity: insufficient code coverage (ramp must reach both end codes)");

  constexpr int first = 1;
  constexpr int last = kNumCodes - 2;
  const double interior = std::accumulate(r.histogram.begin() + first,
                                          r.histogram.begin() + last + 1, 0.0);
  const double h_avg = interior / (last - first + 1);
  if (h_avg < static_cast<double>(kMinHitsPerCode))
    throw Error("ramp_linearity: insufficient samples per code");

  for (int k = first; k <= last; ++k) {
    r.dnl[k] = static_cast<double>(r.histogram[k]) / h_avg - 1.0;
    if (r.histogram[k] == 0) r.missing_codes.push_back(k);
  }
  double acc = 0.0;
  for (int k = first; k <= last; ++k) {
    acc += r.dnl[k];
    r.inl[k] = acc;
  }
  const double i_first = r.inl[first];
  const double i_last = r.inl[last];
  for (int k = first; k <= last; ++k) {
    const double frac = static_cast<double>(k - first) / (last - first);
    r.inl[k] -= i_first + (i_last - i_first) * frac;
  }

  auto extremum = [](const std::vector<double>& v) {
    Extremum e;
    for (int k = 0; k < kNumCodes; ++k)
      if (std::abs(v[k]) > std::abs(e.value)) e = {v[k], k};
    e.value = std::abs(e.value);
    return e;
  };
  r.max_dnl = extremum(r.dnl);
  r.max_inl = extremum(r.inl);
  return r;
}

inline LinearityReport ramp_linearity(const CodeStream& stream) {
  return ramp_linearity(stream.settled());
}

// ---------------------------------------------------------------------------
// Spectrum

enum class Window { rectangular, hann };

/// Bins excluded around the tone (and DC) for each window.
inline constexpr std::size_t leakage_bins(Window w) { return w == Window::hann ? 2 : 1; }

struct Spectrum {
  std::vector<double> power;  // one-sided, bins 0..N/2, full-scale normalized
  std::size_t n_fft = 0;
  double fs = 0.0;
  Window window = Window::rectangular;

  double bin_frequency(std::size_t k) const {
    return static_cast<double>(k) * fs / static_cast<double>(n_fft);
  }
};

/// One-sided power spectrum of the first `n_fft` samples: mean removed,
/// optionally windowed. Bins 1..N/2-1 carry both the positive and negative
/// frequency halves, so sum(power) equals sum(x^2) of the processed record.
inline Spectrum spectrum(std::span<const double> samples, std::size_t n_fft, Window window,
                         double fs = 1.0) {
  if (n_fft < 2 || !std::has_single_bit(n_fft))
    throw Error("spectrum: n_fft must be a power of two >= 2");
  if (samples.size() < n_fft) throw Error("spectrum: stream too short");
  std::vector<double> x(samples.begin(), samples.begin() + n_fft);
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n_fft);
  for (auto& v : x) v -= mean;
  if (window == Window::hann)
    for (std::size_t i = 0; i < n_fft; ++i)
      x[i] *= 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / static_cast<double>(n_fft)));

  const auto bins = fft(x);
  Spectrum s;
  s.n_fft = n_fft;
  s.fs = fs;
  s.window = window;
  s.power.resize(n_fft / 2 + 1);
  const double scale = 1.0 / static_cast<double>(n_fft);
  for (std::size_t k = 0; k <= n_fft / 2; ++k) {
    const double p = std::norm(bins[k]) * scale;
    s.power[k] = (k == 0 || k == n_fft / 2) ? p : 2.0 * p;
  }
  return s;
}

/// Spectrum of a code stream after dropping warm-up codes; codes are scaled
/// so a full-scale sine has unit amplitude.
inline Spectrum spectrum(const CodeStream& stream, std::size_t n_fft,
                         Window window = Window::rectangular) {
  const auto codes = stream.settled();
  if (codes.size() < n_fft) throw Error("spectrum: stream too short");
  std::vector<double> x(n_fft);
  for (std::size_t i = 0; i < n_fft; ++i) x[i] = codes[i] / (kNumCodes / 2.0);
  return spectrum(x, n_fft, window, stream.fs);
}

inline constexpr double kDbCap = 200.0;

struct SpectrumReport {
  std::vector<double> power_dbc;  // per bin, relative to the carrier
  std::size_t signal_bin = 0;
  double signal_power = 0.0;
  double noise_distortion_power = 0.0;
  std::size_t largest_spur_bin = 0;
  double sndr_db = 0.0;
  double sfdr_db = 0.0;
  double enob = 0.0;
  std::vector<std::size_t> harmonic_bins;  // aliased bins of harmonics 2..n+1
};

inline double enob_from_sndr(double sndr_db) { return (sndr_db - 1.76) / 6.02; }

/// Folds harmonic `h` of `bin` into the first Nyquist zone.
inline std::size_t alias_bin(std::size_t bin, std::size_t h, std::size_t n_fft) {
  std::size_t k = (bin * h) % n_fft;
  return k > n_fft / 2 ? n_fft - k : k;
}

/// SNDR counts every bin other than DC and the tone (with its leakage
/// neighbours); SFDR is the tone over the single largest such bin. Ratios
/// with an empty denominator are capped at kDbCap.
inline SpectrumReport sndr_sfdr_enob(const Spectrum& spec, std::size_t signal_bin,
                                     std::size_t n_harmonics = 5) {
  const std::size_t nyq = spec.power.size() - 1;
  if (signal_bin == 0 || signal_bin > nyq) throw Error("sndr: signal bin outside (0, N/2]");
  const std::size_t guard = leakage_bins(spec.window);
  const std::size_t lo = signal_bin > guard ? signal_bin - guard : 1;
  const std::size_t hi = std::min(nyq, signal_bin + guard);
  const std::size_t dc_guard = spec.window == Window::hann ? guard : 0;

  SpectrumReport r;
  r.signal_bin = signal_bin;
  for (std::size_t k = lo; k <= hi; ++k) r.signal_power += spec.power[k];
  if (!(r.signal_power > 0.0)) throw Error("sndr: signal bin has zero power");

  double largest = 0.0;
  for (std::size_t k = dc_guard + 1; k <= nyq; ++k) {
    if (k >= lo && k <= hi) continue;
    r.noise_distortion_power += spec.power[k];
    if (spec.power[k] > largest) {
      largest = spec.power[k];
      r.largest_spur_bin = k;
    }
  }
  auto ratio_db = [](double num, double den) {
    if (!(den > 0.0)) return kDbCap;
    return std::min(kDbCap, 10.0 * std::log10(num / den));
  };
  r.sndr_db = ratio_db(r.signal_power, r.noise_distortion_power);
  r.sfdr_db = std::max(0.0, ratio_db(r.signal_power, largest));
  r.enob = enob_from_sndr(r.sndr_db);

  r.power_dbc.resize(spec.power.size());
  for (std::size_t k = 0; k < spec.power.size(); ++k)
    r.power_dbc[k] = spec.power[k] > 0.0 ? 10.0 * std::log10(spec.power[k] / r.signal_power)
                                         : -kDbCap;
  for (std::size_t h = 2; h < n_harmonics + 2; ++h)
    r.harmonic_bins.push_back(alias_bin(signal_bin, h, spec.n_fft));
  return r;
}

struct CoherentTone {
  double f_in = 0.0;
  std::size_t bin = 0;
};

/// Nearest odd bin M coprime with n_fft to f_target * n_fft / fs (ties go
/// to the larger M); the tone then completes exactly M cycles per record.
inline CoherentTone coherent_frequency(double fs, std::size_t n_fft, double f_target) {
  if (!(f_target > 0.0) || !(f_target < fs / 2.0))
    throw Error("coherent_frequency: target must lie in (0, fs/2)");
  if (n_fft < 4) throw Error("coherent_frequency: n_fft too small");
  const double ideal = f_target * static_cast<double>(n_fft) / fs;
  std::size_t best = 0;
  double best_dist = 0.0;
  for (std::size_t m = 1; m < n_fft / 2; m += 2) {
    if (std::gcd(m, n_fft) != 1) continue;
    const double dist = std::abs(static_cast<double>(m) - ideal);
    if (best == 0 || dist <= best_dist) {
      best = m;
      best_dist = dist;
    }
    if (static_cast<double>(m) > ideal) break;
  }
  if (best == 0) throw Error("coherent_frequency: no odd coprime bin below Nyquist");
  return {static_cast<double>(best) * fs / static_cast<double>(n_fft), best};
}

}  // namespace pipeadc
