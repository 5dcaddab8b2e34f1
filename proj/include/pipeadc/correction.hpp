#pragma once

// Redundant-sign-digit correction: overlap-adds six 1.5-bit decisions and
// the 2-bit flash into one 8-bit code.

#include <algorithm>
#include <array>
#include <cmath>

#include "pipeadc/config.hpp"

namespace pipeadc {

struct CorrectionInput {
  std::array<int, kNumStages> d{};  // each in {-1, 0, +1}
  int d_flash = 2;                  // in {0, 1, 2, 3}
  bool operator==(const CorrectionInput&) const = default;
};

/// Sign of the last stage's contribution relative to mid-scale: the flash
/// splits the final residue in four vref/2-wide bins, two below zero.
inline constexpr int kFlashOffset = 2;

/// code = 128 + sum_i d_i 2^(7-i) + (d_flash - 2), clamped to [0, 255].
/// With ideal stages this equals floor((vin + vref) / (2 vref) * 256).
inline int align_and_correct(const CorrectionInput& c) {
  int code = kNumCodes / 2;
  for (int i = 0; i < kNumStages; ++i) {
    if (c.d[i] < -1 || c.d[i] > 1)
      throw Error("stage " + std::to_string(i + 1) + " decision out of range");
    code += c.d[i] * (1 << (kNumBits - 2 - i));  // stage i+1 weighs 2^(6-i)
  }
  if (c.d_flash < 0 || c.d_flash > 3) throw Error("flash decision out of range");
  code += c.d_flash - kFlashOffset;
  return std::clamp(code, 0, kNumCodes - 1);
}

/// Reference mid-rise 8-bit quantizer over [-vref, +vref).
inline int ideal_quantize(double vin, double vref) {
  const double scaled = std::floor((vin + vref) / (2.0 * vref) * kNumCodes);
  return static_cast<int>(std::clamp(scaled, 0.0, static_cast<double>(kNumCodes - 1)));
}

/// Input voltage at the middle of `code`.
inline double code_center(int code, double vref) {
  return -vref + (code + 0.5) * 2.0 * vref / kNumCodes;
}

inline double lsb_volts(double vref) { return 2.0 * vref / kNumCodes; }

}  // namespace pipeadc
