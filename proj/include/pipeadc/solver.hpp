#pragma once

// Amplifier requirements from the settling-error budget, and parameter
// sweeps that map a non-ideality onto a converter metric.

#include <cmath>
#include <future>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pipeadc/config.hpp"
#include "pipeadc/experiments.hpp"

namespace pipeadc {

/// Half an LSB split between static (finite gain) and dynamic (finite
/// bandwidth) settling error; each gets `err_fraction` of an LSB.
struct Budget {
  int n_bits = kNumBits;
  double err_fraction = 0.25;
  double beta = 0.5;
  double t_settle = 0.0;
};

inline void check_budget(const Budget& b) {
  if (b.n_bits < 1) throw Error("budget: n_bits must be >= 1");
  if (!(b.err_fraction > 0.0 && b.err_fraction < 1.0))
    throw Error("budget: err_fraction must lie in (0, 1)");
  if (!(b.beta > 0.0 && b.beta <= 1.0)) throw Error("budget: beta must lie in (0, 1]");
}

/// Allowed error as a fraction of full scale.
inline double budget_error(const Budget& b) {
  return b.err_fraction * std::ldexp(1.0, -b.n_bits);
}

struct GainRequirement {
  double linear = 0.0;
  double db = 0.0;
};

/// Smallest A0 with 1 / (beta A0) <= err_fraction LSB.
inline GainRequirement min_dc_gain(const Budget& b) {
  check_budget(b);
  const double a0 = 1.0 / (b.beta * budget_error(b));
  return {a0, linear_to_db(a0)};
}

/// Smallest GBW with exp(-2 pi beta GBW t) <= err_fraction LSB.
inline double min_gbw(const Budget& b) {
  check_budget(b);
  if (!(b.t_settle > 0.0)) throw Error("budget: t_settle must be positive");
  const double exponent = b.n_bits * std::numbers::ln2 + std::log(1.0 / b.err_fraction);
  return exponent / (2.0 * std::numbers::pi * b.beta * b.t_settle);
}

/// Relaxed budget for 1-based `stage`: stage k only has to resolve the
/// n_bits - (k - 1) bits that are still undecided when it amplifies.
inline Budget stage_budget(Budget b, int stage) {
  if (stage < 1) throw Error("stage_budget: stages are numbered from 1");
  b.n_bits = std::max(1, b.n_bits - (stage - 1));
  return b;
}

inline Budget budget_for(const AdcConfig& c, double err_fraction = 0.25) {
  return {kNumBits, err_fraction, c.ota.beta, c.clock.t_settle()};
}

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepMetric { enob, inl, dnl };

inline SweepMetric parse_sweep_metric(std::string_view s) {
  if (s == "enob") return SweepMetric::enob;
  if (s == "inl") return SweepMetric::inl;
  if (s == "dnl") return SweepMetric::dnl;
  throw Error("unknown sweep metric '" + std::string(s) + "'");
}

inline std::string metric_column(SweepMetric m) {
  switch (m) {
    case SweepMetric::enob: return "enob_bits";
    case SweepMetric::inl: return "max_inl_lsb";
    case SweepMetric::dnl: return "max_dnl_lsb";
  }
  return {};
}

struct SweepOptions {
  SineTestOptions sine;
  std::size_t ramp_samples = kDefaultRampSamples;
};

struct SweepRow {
  double value = 0.0;
  double metric = 0.0;
};

inline double measure(const AdcConfig& config, SweepMetric metric, const SweepOptions& opt) {
  switch (metric) {
    case SweepMetric::enob: return run_sine_test(config, opt.sine).report.enob;
    case SweepMetric::inl: return run_ramp_test(config, opt.ramp_samples).report.max_inl.value;
    case SweepMetric::dnl: return run_ramp_test(config, opt.ramp_samples).report.max_dnl.value;
  }
  return 0.0;
}

/// Runs one independent simulation per value (each with a fresh engine and
/// the config's own seed) and returns rows in input order.
inline std::vector<SweepRow> sweep(const AdcConfig& base, std::string_view axis,
                                   const std::vector<double>& values, SweepMetric metric,
                                   const SweepOptions& opt = {}) {
  // Resolve the path once up front so a bad axis fails before any work.
  {
    AdcConfig probe = base;
    set_param(probe, axis, values.empty() ? std::string("0") : detail::format_double(values[0]));
    if (!values.empty()) validate(probe);
  }
  std::vector<std::future<double>> jobs;
  jobs.reserve(values.size());
  for (double v : values) {
    AdcConfig c = base;
    set_param(c, axis, v);
    validate(c);
    jobs.push_back(std::async(std::launch::async,
                              [c, metric, opt] { return measure(c, metric, opt); }));
  }
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) rows.push_back({values[i], jobs[i].get()});
  return rows;
}

inline std::string sweep_csv(std::string_view axis, SweepMetric metric,
                             const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << axis << ',' << metric_column(metric) << '\n';
  for (const auto& r : rows)
    out << detail::format_double(r.value) << ',' << detail::format_double(r.metric) << '\n';
  return out.str();
}

}  // namespace pipeadc
