#pragma once

// Sample-by-sample engine: SHA -> six 1.5-bit stages on three shared
// amplifiers -> 2-bit flash. Each stage consumes what its predecessor
// produced one sample earlier; decisions are re-aligned per input sample
// before they leave the engine.

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pipeadc/config.hpp"
#include "pipeadc/correction.hpp"
#include "pipeadc/stage_models.hpp"

namespace pipeadc {

/// Samples between an input entering the SHA and its decisions leaving the
/// flash: one per stage boundary (SHA -> 1 -> ... -> 6 -> flash).
inline constexpr std::size_t pipeline_latency_samples = kNumStages + 1;

inline constexpr std::size_t kNumSharedOtas = 3;

enum class Phase { phi1, phi2 };

/// Which shared amplifier slot each stage uses.
using OtaAssignment = std::array<std::size_t, kNumStages>;
inline constexpr OtaAssignment kPairedOtas{0, 0, 1, 1, 2, 2};

/// Odd stages (1, 3, 5) amplify in phi1, even stages in phi2, so the two
/// stages sharing an amplifier never need it at the same time.
inline constexpr Phase amplify_phase(std::size_t stage) {
  return stage % 2 == 0 ? Phase::phi1 : Phase::phi2;
}

struct StageTrace {
  std::size_t timestamp = 0;  // output index
  std::int64_t sample = 0;    // input sample described; negative during warm-up
  double vin = 0.0;
  double sha_out = 0.0;
  std::array<double, kNumStages> residue{};
  CorrectionInput decisions;
  bool warmup = false;
};

struct PipelineState {
  std::array<double, kNumSharedOtas> ota_last{};  // last settled output per shared slot
  double sha_ota_last = 0.0;
  double sha_held = 0.0;
  std::array<double, kNumStages> residue{};  // in flight towards the next stage
  Phase phase = Phase::phi2;
  std::size_t samples = 0;
};

struct StepOutput {
  CorrectionInput decisions;
  StageTrace trace;
};

class PipelineEngine {
 public:
  /// Validates `config` and draws its static mismatch.
  explicit PipelineEngine(const AdcConfig& config, OtaAssignment assignment = kPairedOtas)
      : config_(realize(validate(config))), assignment_(assignment) {
    for (auto slot : assignment_)
      if (slot >= kNumSharedOtas) throw Error("ota assignment: slot out of range");
    for (std::size_t i = 0; i < kNumStages; ++i) stage_ota_[i] = config_.stage_ota(i);
    sha_ota_ = config_.sha_ota();
    // Samples already "in flight" at start-up saw the all-zero state.
    StageTrace idle;
    for (std::size_t k = 0; k < kNumStages; ++k)
      idle.decisions.d[k] = sub_adc_decide(0.0, config_.stages[k], config_.reference.vref);
    idle.decisions.d_flash = flash2b(0.0, config_.flash_offsets, config_.reference.vref);
    idle.warmup = true;
    pending_.fill(idle);
  }

  const AdcConfig& config() const { return config_; }
  const PipelineState& state() const { return state_; }

  StepOutput step(double vin) {
    const double vref = config_.reference.vref;
    const std::size_t n = state_.samples;
    const auto slot_of = [](std::size_t n, std::size_t back) {
      return (n + kRing - back) % kRing;
    };

    // Pipeline registers as they were at the start of this sample.
    const double held = state_.sha_held;
    const auto residue_in = state_.residue;

    const int d_flash = flash2b(residue_in[kNumStages - 1], config_.flash_offsets, vref);

    for (Phase phase : {Phase::phi1, Phase::phi2}) {
      for (std::size_t k = 0; k < kNumStages; ++k) {
        if (amplify_phase(k) != phase) continue;
        const double stage_in = k == 0 ? held : residue_in[k - 1];
        const auto& sp = config_.stages[k];
        const int d = sub_adc_decide(stage_in, sp, vref);
        const double target = mdac_residue(stage_in, d, sp, vref);
        double& last = state_.ota_last[assignment_[k]];
        const double out = ota_settle({target, initial_condition(last, stage_ota_[k]),
                                       stage_ota_[k], config_.clock.t_settle()});
        last = out;
        state_.residue[k] = out;

        auto& rec = pending_[slot_of(n, k + 1)];
        rec.residue[k] = out;
        rec.decisions.d[k] = d;
      }
      state_.phase = phase;
    }

    const double sha_out = sha_hold(vin, sha_ota_, config_.sha, config_.clock,
                                    initial_condition(state_.sha_ota_last, sha_ota_));
    state_.sha_ota_last = sha_out;
    state_.sha_held = sha_out;

    auto& fresh = pending_[slot_of(n, 0)];
    fresh = StageTrace{};
    fresh.sample = static_cast<std::int64_t>(n);
    fresh.vin = vin;
    fresh.sha_out = sha_out;

    auto& done = pending_[slot_of(n, pipeline_latency_samples)];
    done.decisions.d_flash = d_flash;
    done.timestamp = n;
    done.warmup = n < pipeline_latency_samples;
    if (done.warmup) done.sample = static_cast<std::int64_t>(n) -
                                   static_cast<std::int64_t>(pipeline_latency_samples);

    ++state_.samples;
    return {done.decisions, done};
  }

 private:
  static constexpr std::size_t kRing = pipeline_latency_samples + 1;

  double initial_condition(double last_output, const OtaParams& ota) const {
    return config_.clock.reset_enabled ? 0.0 : ota.k_mem * last_output;
  }

  AdcConfig config_;
  OtaAssignment assignment_;
  std::array<OtaParams, kNumStages> stage_ota_;
  OtaParams sha_ota_;
  PipelineState state_;
  std::array<StageTrace, kRing> pending_;
};

struct CodeStream {
  std::vector<int> codes;
  double fs = 0.0;
  std::size_t warmup = 0;  // leading codes produced before the pipeline filled

  std::span<const int> settled() const {
    return std::span<const int>(codes).subspan(std::min(warmup, codes.size()));
  }
};

struct SimulationResult {
  std::vector<CorrectionInput> decisions;
  std::vector<StageTrace> traces;
  std::size_t warmup = 0;
  double fs = 0.0;
};

inline SimulationResult simulate(std::span<const double> waveform, const AdcConfig& config,
                                 OtaAssignment assignment = kPairedOtas) {
  if (waveform.empty()) throw Error("simulate: empty waveform");
  PipelineEngine engine(config, assignment);
  SimulationResult out;
  out.decisions.reserve(waveform.size());
  out.traces.reserve(waveform.size());
  for (double v : waveform) {
    auto step = engine.step(v);
    out.decisions.push_back(step.decisions);
    out.traces.push_back(step.trace);
  }
  out.warmup = std::min(pipeline_latency_samples, waveform.size());
  out.fs = config.clock.fs;
  return out;
}

inline CodeStream to_codes(const SimulationResult& sim) {
  CodeStream cs;
  cs.fs = sim.fs;
  cs.warmup = sim.warmup;
  cs.codes.reserve(sim.decisions.size());
  for (const auto& d : sim.decisions) cs.codes.push_back(align_and_correct(d));
  return cs;
}

/// Converts a waveform straight to corrected codes without keeping traces.
inline CodeStream convert(std::span<const double> waveform, const AdcConfig& config,
                          OtaAssignment assignment = kPairedOtas) {
  if (waveform.empty()) throw Error("simulate: empty waveform");
  PipelineEngine engine(config, assignment);
  CodeStream cs;
  cs.fs = config.clock.fs;
  cs.warmup = std::min(pipeline_latency_samples, waveform.size());
  cs.codes.reserve(waveform.size());
  for (double v : waveform) cs.codes.push_back(align_and_correct(engine.step(v).decisions));
  return cs;
}

// ---------------------------------------------------------------------------
// Full-swing step experiment

struct SettleRow {
  std::string stage;
  double ideal_mv = 0.0;
  double simulated_mv = 0.0;
  double error_pct = 0.0;
};

/// Drives a -vref -> +vref step through the chain and reports every block's
/// settled output against its own input (the block before it), which is how
/// a unity-gain-at-full-scale chain is judged: at +vref each 1.5-bit stage
/// maps vref back onto vref.
inline std::vector<SettleRow> settle_report(const AdcConfig& config) {
  const double vref = config.reference.vref;
  constexpr std::size_t half = pipeline_latency_samples + 1;
  std::vector<double> pulse(2 * half, -vref);
  std::fill(pulse.begin() + half, pulse.end(), vref);
  const auto sim = simulate(pulse, config);
  const StageTrace& t = sim.traces.back();  // trace of the first +vref sample

  std::vector<SettleRow> rows;
  auto add = [&](std::string name, double ideal, double simulated) {
    const double err = ideal == 0.0 ? 0.0 : std::abs(ideal - simulated) / std::abs(ideal) * 100.0;
    rows.push_back({std::move(name), ideal * 1e3, simulated * 1e3, err});
  };
  add("Vin", t.vin, t.vin);
  add("SHA", t.vin, t.sha_out);
  double prev = t.sha_out;
  for (std::size_t k = 0; k < kNumStages; ++k) {
    add("Stage" + std::to_string(k + 1), prev, t.residue[k]);
    prev = t.residue[k];
  }
  return rows;
}

}  // namespace pipeadc
