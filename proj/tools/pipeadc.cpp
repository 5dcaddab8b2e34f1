// pipeadc: command-line driver for the pipelined converter model.
//
//   pipeadc simulate      --wave sine|ramp|pulse|dc ...  -> codes.csv [trace.csv]
//   pipeadc linearity     --samples N                    -> linearity.csv/.gp
//   pipeadc spectrum      --nfft N --fin HZ              -> spectrum.csv/.gp
//   pipeadc specs                                        -> stdout
//   pipeadc sweep         --axis KEY --values a,b,c      -> sweep.csv/.gp
//   pipeadc settle-report                                -> settle_report.csv

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pipeadc/pipeadc.hpp"

namespace fs = std::filesystem;
using namespace pipeadc;

namespace {

struct Common {
  std::string config = "default";
  std::optional<std::uint64_t> seed;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "config file, or preset: default|ideal|prototype|degraded");
  cmd->add_option("--seed", c.seed, "override rng_seed");
  cmd->add_option("--out", c.out, "output directory (default: $PIPEADC_OUT_DIR or .)");
}

AdcConfig load(const Common& c) {
  AdcConfig cfg = load_config(c.config);
  if (c.seed) cfg.rng_seed = *c.seed;
  return validate(cfg);
}

fs::path out_dir(const Common& c) {
  if (!c.out.empty()) return c.out;
  if (const char* env = std::getenv("PIPEADC_OUT_DIR"); env && *env) return env;
  return ".";
}

// Writes `csv` and a gnuplot script beside it; the script references the CSV
// by file name so the output directory can be moved.
void emit_with_plot(const fs::path& dir, const std::string& stem, const std::string& csv,
                    io::PlotSpec plot) {
  io::write_file(dir / (stem + ".csv"), csv);
  plot.csv = stem + ".csv";
  io::write_file(dir / (stem + ".gp"), io::gnuplot_script(plot));
}

Window parse_window(const std::string& s) {
  if (s == "rect" || s == "rectangular") return Window::rectangular;
  if (s == "hann") return Window::hann;
  throw Error("unknown window '" + s + "'");
}

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < list.size()) {
    auto comma = list.find(',', pos);
    auto item = list.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!item.empty()) out.push_back(detail::parse_double(item, "--values"));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Behavioral model of an 8-bit 1.5-bit/stage pipelined ADC with shared amplifiers"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  // simulate
  Common sim_c;
  std::string wave = "sine";
  double amplitude = 0.6, freq = 10.417e6, v_low = -0.6, v_high = 0.6;
  std::size_t length = 4096;
  bool trace = false;
  auto* sim = app.add_subcommand("simulate", "convert a generated waveform, write codes CSV");
  add_common(sim, sim_c);
  sim->add_option("--wave", wave, "sine|ramp|pulse|dc")->capture_default_str();
  sim->add_option("--amplitude", amplitude, "sine amplitude or dc level [V]")->capture_default_str();
  sim->add_option("--freq", freq, "sine frequency [Hz]")->capture_default_str();
  sim->add_option("--low", v_low, "ramp/pulse low level [V]")->capture_default_str();
  sim->add_option("--high", v_high, "ramp/pulse high level [V]")->capture_default_str();
  sim->add_option("--length", length, "samples")->capture_default_str();
  sim->add_flag("--trace", trace, "also write per-stage trace.csv");

  // linearity
  Common lin_c;
  std::size_t ramp_samples = kDefaultRampSamples;
  auto* lin = app.add_subcommand("linearity", "slow-ramp code-density DNL/INL");
  add_common(lin, lin_c);
  lin->add_option("--samples", ramp_samples, "ramp samples")->capture_default_str();

  // spectrum
  Common spec_c;
  SineTestOptions sine;
  std::string window = "rect";
  auto* spec = app.add_subcommand("spectrum", "coherent sine test: SNDR/SFDR/ENOB");
  add_common(spec, spec_c);
  spec->add_option("--nfft", sine.n_fft, "FFT length (power of two)")->capture_default_str();
  spec->add_option("--fin", sine.f_target, "target input frequency [Hz]")->capture_default_str();
  spec->add_option("--amplitude", sine.amplitude_fraction, "amplitude as fraction of vref")
      ->capture_default_str();
  spec->add_option("--window", window, "rect|hann")->capture_default_str();

  // specs
  Common specs_c;
  Budget budget;
  std::optional<double> beta_opt, sf_opt;
  bool per_stage = false;
  auto* specs = app.add_subcommand("specs", "minimum amplifier gain and GBW");
  add_common(specs, specs_c);
  specs->add_option("--bits", budget.n_bits, "resolution")->capture_default_str();
  specs->add_option("--err", budget.err_fraction, "LSB fraction per error term")
      ->capture_default_str();
  specs->add_option("--beta", beta_opt, "feedback factor (default: from config)");
  specs->add_option("--settle-fraction", sf_opt, "settling window / T (default: from config)");
  specs->add_flag("--per-stage", per_stage, "also list the relaxed per-stage requirements");

  // sweep
  Common sw_c;
  std::string axis, values, metric = "enob";
  SweepOptions sweep_opt;
  auto* sw = app.add_subcommand("sweep", "map one parameter onto ENOB / INL / DNL");
  add_common(sw, sw_c);
  sw->add_option("--axis", axis, "config key, e.g. ota.a0_db")->required();
  sw->add_option("--values", values, "comma-separated values")->required();
  sw->add_option("--metric", metric, "enob|inl|dnl")->capture_default_str();
  sw->add_option("--samples", sweep_opt.ramp_samples, "ramp samples for inl/dnl")
      ->capture_default_str();

  // settle-report
  Common st_c;
  auto* st = app.add_subcommand("settle-report", "full-swing step through every stage");
  add_common(st, st_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*sim) {
      const auto cfg = load(sim_c);
      Waveform w;
      w.kind = parse_wave_kind(wave);
      w.amplitude = amplitude;
      w.frequency = freq;
      w.v_low = v_low;
      w.v_high = v_high;
      w.length = length;
      const auto v = generate(w, cfg.clock, cfg.reference);
      const auto result = simulate(v, cfg);
      const auto codes = to_codes(result);
      const auto dir = out_dir(sim_c);
      io::write_file(dir / "codes.csv", io::codes_csv(v, codes));
      if (trace) io::write_file(dir / "trace.csv", io::trace_csv(result));
      std::printf("wrote %zu codes (%zu warm-up) to %s\n", codes.codes.size(), codes.warmup,
                  (dir / "codes.csv").string().c_str());
    } else if (*lin) {
      const auto cfg = load(lin_c);
      const auto r = run_ramp_test(cfg, ramp_samples).report;
      emit_with_plot(out_dir(lin_c), "linearity", io::linearity_csv(r),
                     {"", "DNL / INL", "code", "LSB", {{2, "DNL"}, {3, "INL"}}, 1, "steps"});
      std::printf("max |DNL| = %.3f LSB at code %d\n", r.max_dnl.value, r.max_dnl.code);
      std::printf("max |INL| = %.3f LSB at code %d\n", r.max_inl.value, r.max_inl.code);
      std::printf("missing codes: %zu\n", r.missing_codes.size());
    } else if (*spec) {
      const auto cfg = load(spec_c);
      sine.window = parse_window(window);
      const auto r = run_sine_test(cfg, sine);
      emit_with_plot(out_dir(spec_c), "spectrum", io::spectrum_csv(r.spectrum, r.report),
                     {"", "Output spectrum", "frequency [Hz]", "power [dBc]", {{3, "spectrum"}}});
      std::printf("f_in = %.6f MHz (bin %zu of %zu)\n", r.tone.f_in / 1e6, r.tone.bin, sine.n_fft);
      std::printf("SNDR = %.2f dB\nSFDR = %.2f dB\nENOB = %.3f bit\n", r.report.sndr_db,
                  r.report.sfdr_db, r.report.enob);
    } else if (*specs) {
      const auto cfg = load(specs_c);
      budget.beta = beta_opt.value_or(cfg.ota.beta);
      const double sf = sf_opt.value_or(cfg.clock.settle_fraction);
      budget.t_settle = sf / cfg.clock.fs;
      const auto gain = min_dc_gain(budget);
      const double gbw = min_gbw(budget);
      std::printf("A0 ≥ %.1f dB, GBW ≥ %.0f MHz @ settle_fraction %.3g\n", gain.db,
                  gbw / 1e6, sf);
      if (per_stage) {
        for (int k = 1; k <= kNumStages; ++k) {
          const auto b = stage_budget(budget, k);
          std::printf("  stage %d (%d bits): A0 ≥ %.1f dB, GBW ≥ %.0f MHz\n", k, b.n_bits,
                      min_dc_gain(b).db, min_gbw(b) / 1e6);
        }
      }
    } else if (*sw) {
      const auto cfg = load(sw_c);
      const auto m = parse_sweep_metric(metric);
      const auto rows = sweep(cfg, axis, parse_values(values), m, sweep_opt);
      emit_with_plot(out_dir(sw_c), "sweep", sweep_csv(axis, m, rows),
                     {"", "Sweep", axis, metric_column(m), {{2, metric_column(m)}}, 1,
                      "linespoints"});
      std::fputs(sweep_csv(axis, m, rows).c_str(), stdout);
    } else if (*st) {
      const auto cfg = load(st_c);
      const auto rows = settle_report(cfg);
      io::write_file(out_dir(st_c) / "settle_report.csv", io::settle_csv(rows));
      std::printf("%-8s %12s %15s %8s\n", "Stage", "Ideal/mV", "Simulation/mV", "Error%");
      for (const auto& r : rows)
        std::printf("%-8s %12.1f %15.1f %7.2f%%\n", r.stage.c_str(), r.ideal_mv, r.simulated_mv,
                    r.error_pct);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
