#pragma once

#include <cmath>
#include <numbers>
#include <string_view>
#include <vector>

#include "pipeadc/config.hpp"
#include "pipeadc/correction.hpp"

namespace pipeadc {

enum class WaveKind { sine, ramp, pulse, dc };

inline WaveKind parse_wave_kind(std::string_view s) {
  if (s == "sine") return WaveKind::sine;
  if (s == "ramp") return WaveKind::ramp;
  if (s == "pulse") return WaveKind::pulse;
  if (s == "dc") return WaveKind::dc;
  throw Error("unknown waveform kind '" + std::string(s) + "'");
}

struct Waveform {
  WaveKind kind = WaveKind::dc;
  double amplitude = 0.0;  // sine amplitude, or dc level
  double frequency = 0.0;  // sine only
  double v_low = 0.0;      // pulse / ramp
  double v_high = 0.0;
  std::size_t length = 1;
};

/// Samples the stimulus at the converter clock.
///  - sine:  A sin(2 pi f n / fs)
///  - ramp:  linear from v_low - 1 LSB to v_high + 1 LSB
///  - pulse: v_low for the first half, v_high from the midpoint on
///  - dc:    amplitude
inline std::vector<double> generate(const Waveform& w, const ClockParams& clock,
                                    const ReferenceConfig& ref = {}) {
  if (w.length < 1) throw Error("waveform: length must be >= 1");
  if (!std::isfinite(w.amplitude) || !std::isfinite(w.v_low) || !std::isfinite(w.v_high))
    throw Error("waveform: levels must be finite");
  std::vector<double> v(w.length);
  const std::size_t n = w.length;
  switch (w.kind) {
    case WaveKind::sine: {
      if (!(w.frequency > 0.0) || !(w.frequency < clock.fs / 2.0))
        throw Error("waveform: sine frequency must lie in (0, fs/2)");
      const double step = 2.0 * std::numbers::pi * w.frequency / clock.fs;
      for (std::size_t i = 0; i < n; ++i) v[i] = w.amplitude * std::sin(step * static_cast<double>(i));
      break;
    }
    case WaveKind::ramp: {
      if (!(w.v_high > w.v_low)) throw Error("waveform: ramp needs v_high > v_low");
      const double lsb = lsb_volts(ref.vref);
      const double a = w.v_low - lsb;
      const double b = w.v_high + lsb;
      if (n == 1) {
        v[0] = a;
        break;
      }
      for (std::size_t i = 0; i < n; ++i)
        v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
      break;
    }
    case WaveKind::pulse:
      for (std::size_t i = 0; i < n; ++i) v[i] = i < n / 2 ? w.v_low : w.v_high;
      break;
    case WaveKind::dc:
      std::fill(v.begin(), v.end(), w.amplitude);
      break;
  }
  return v;
}

}  // namespace pipeadc
