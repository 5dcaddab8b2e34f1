#pragma once

// Single-stage analog behavior: amplifier settling, 1.5-bit sub-ADC,
// MDAC residue, the back-end 2-bit flash and the front-end sample-and-hold.
// All functions are pure.

#include <array>
#include <cmath>
#include <numbers>

#include "pipeadc/config.hpp"

namespace pipeadc {

struct SettleInput {
  double v_target_in = 0.0;  // ideal closed-loop output
  double v_init = 0.0;       // amplifier output when the hold phase starts
  OtaParams ota;
  double t = 0.0;
};

/// Closed-loop time constant 1 / (2 pi beta GBW).
inline double settle_tau(const OtaParams& ota) {
  return 1.0 / (2.0 * std::numbers::pi * ota.beta * ota.gbw);
}

/// Finite-gain closed-loop output: the ideal target scaled by
/// beta*A0 / (1 + beta*A0). Written as 1 / (1 + 1/(beta*A0)) so that an
/// infinite A0 gives exactly the target.
inline double static_settle(double v_target_in, const OtaParams& ota) {
  return v_target_in / (1.0 + 1.0 / (ota.beta * ota.a0));
}

/// Output after settling for `t` seconds from `v_init` towards the static
/// value with a single-pole response.
inline double ota_settle(const SettleInput& s) {
  const double v_static = static_settle(s.v_target_in, s.ota);
  const double x = s.t <= 0.0 ? 0.0 : s.t * 2.0 * std::numbers::pi * s.ota.beta * s.ota.gbw;
  return v_static + (s.v_init - v_static) * std::exp(-x);
}

/// Pre-amplifier input of the switched-capacitor comparator.
inline constexpr double comparator_diff(double vr_p, double vr_n, double vi_p, double vi_n) {
  return (vr_p - vr_n) - (vi_p - vi_n);
}

namespace detail {

// Differential comparator against a threshold: the reference taps sit at
// +-threshold and the input at +-vin, so V_diff = 2 (threshold - vin)
// without rounding.
inline double threshold_diff(double vin, double threshold) {
  return comparator_diff(threshold, -threshold, vin, -vin);
}

}  // namespace detail

/// 1.5-bit decision against +-vref/4 (plus each comparator's offset).
/// Inputs exactly on a threshold resolve towards d = 0.
inline int sub_adc_decide(double vin, const StageParams& stage, double vref) {
  if (detail::threshold_diff(vin, vref / 4.0 + stage.cmp_offset_hi) < 0.0) return +1;
  if (detail::threshold_diff(vin, -vref / 4.0 + stage.cmp_offset_lo) > 0.0) return -1;
  return 0;
}

/// Ideal residue r = 2(1 + eg) vin - d (1 + ed) vref.
inline double mdac_residue(double vin, int d, const StageParams& stage, double vref) {
  return 2.0 * (1.0 + stage.gain_mismatch) * vin -
         static_cast<double>(d) * (1.0 + stage.dac_mismatch) * vref;
}

/// Thermometer 2-bit flash with thresholds {-vref/2, 0, +vref/2}. A tie
/// gives the lower code.
inline int flash2b(double vin, const std::array<double, 3>& offsets, double vref) {
  const std::array<double, 3> thresholds{-vref / 2.0, 0.0, vref / 2.0};
  int code = 0;
  for (std::size_t i = 0; i < thresholds.size(); ++i)
    if (detail::threshold_diff(vin, thresholds[i] + offsets[i]) < 0.0) ++code;
  return code;
}

/// Sample-and-hold output at the end of the hold phase, starting from
/// `v_init`.
inline double sha_hold(double vin, const OtaParams& sha_ota, const StageParams& sha,
                       const ClockParams& clock, double v_init = 0.0) {
  return ota_settle({(1.0 + sha.gain_mismatch) * vin, v_init, sha_ota, clock.t_settle()});
}

/// Convenience overload taking the amplifier from a full config.
inline double sha_hold(double vin, const AdcConfig& config, double v_init = 0.0) {
  return sha_hold(vin, config.sha_ota(), config.sha, config.clock, v_init);
}

}  // namespace pipeadc
