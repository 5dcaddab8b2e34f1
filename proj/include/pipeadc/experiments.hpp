#pragma once

// Standard measurement set-ups: coherent sine for dynamic performance and a
// slow over-range ramp for static linearity.

#include <vector>

#include "pipeadc/metrics.hpp"
#include "pipeadc/pipeline.hpp"
#include "pipeadc/waveform.hpp"

namespace pipeadc {

struct SineTestOptions {
  std::size_t n_fft = 4096;
  double f_target = 10.417e6;
  double amplitude_fraction = 1.0;  // of vref
  Window window = Window::rectangular;
  std::size_t n_harmonics = 5;
};

struct SineTestResult {
  CoherentTone tone;
  CodeStream codes;
  Spectrum spectrum;
  SpectrumReport report;
};

inline SineTestResult run_sine_test(const AdcConfig& config, const SineTestOptions& opt = {}) {
  SineTestResult r;
  r.tone = coherent_frequency(config.clock.fs, opt.n_fft, opt.f_target);
  Waveform w;
  w.kind = WaveKind::sine;
  w.amplitude = opt.amplitude_fraction * config.reference.vref;
  w.frequency = r.tone.f_in;
  w.length = opt.n_fft + pipeline_latency_samples;
  const auto samples = generate(w, config.clock, config.reference);
  r.codes = convert(samples, config);
  r.spectrum = spectrum(r.codes, opt.n_fft, opt.window);
  r.report = sndr_sfdr_enob(r.spectrum, r.tone.bin, opt.n_harmonics);
  return r;
}

inline constexpr std::size_t kDefaultRampSamples = std::size_t{1} << 20;

struct RampTestResult {
  CodeStream codes;
  LinearityReport report;
};

/// Ramp from just below -vref to just above +vref.
inline RampTestResult run_ramp_test(const AdcConfig& config,
                                    std::size_t samples = kDefaultRampSamples) {
  Waveform w;
  w.kind = WaveKind::ramp;
  w.v_low = -config.reference.vref;
  w.v_high = config.reference.vref;
  w.length = samples + pipeline_latency_samples;
  const auto v = generate(w, config.clock, config.reference);
  RampTestResult r;
  r.codes = convert(v, config);
  r.report = ramp_linearity(r.codes);
  return r;
}

}  // namespace pipeadc
