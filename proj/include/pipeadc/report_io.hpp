#pragma once

// CSV emitters and gnuplot command scripts for every report type.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pipeadc/config.hpp"
#include "pipeadc/metrics.hpp"
#include "pipeadc/pipeline.hpp"

namespace pipeadc::io {

using detail::format_double;

inline std::string codes_csv(std::span<const double> vin, const CodeStream& cs) {
  std::ostringstream out;
  out << "n,vin_v,code,warmup\n";
  for (std::size_t n = 0; n < cs.codes.size(); ++n) {
    // Output n describes input n - latency.
    const bool warm = n < cs.warmup;
    const double v = warm ? 0.0 : vin[n - cs.warmup];
    out << n << ',' << format_double(v) << ',' << cs.codes[n] << ',' << (warm ? 1 : 0) << '\n';
  }
  return out.str();
}

inline std::string trace_csv(const SimulationResult& sim) {
  std::ostringstream out;
  out << "n,vin_v";
  for (int k = 1; k <= kNumStages; ++k) out << ",stage" << k << "_residue_v";
  for (int k = 1; k <= kNumStages; ++k) out << ",d" << k;
  out << ",dflash\n";
  for (const auto& t : sim.traces) {
    out << t.sample << ',' << format_double(t.vin);
    for (double r : t.residue) out << ',' << format_double(r);
    for (int d : t.decisions.d) out << ',' << d;
    out << ',' << t.decisions.d_flash << '\n';
  }
  return out.str();
}

inline std::string linearity_csv(const LinearityReport& r) {
  std::ostringstream out;
  out << "code,dnl_lsb,inl_lsb\n";
  for (int k = 0; k < kNumCodes; ++k)
    out << k << ',' << format_double(r.dnl[k]) << ',' << format_double(r.inl[k]) << '\n';
  return out.str();
}

inline std::string spectrum_csv(const Spectrum& s, const SpectrumReport& r) {
  std::ostringstream out;
  out << "bin,freq_hz,power_dbc\n";
  for (std::size_t k = 0; k < r.power_dbc.size(); ++k)
    out << k << ',' << format_double(s.bin_frequency(k)) << ',' << format_double(r.power_dbc[k])
        << '\n';
  return out.str();
}

inline std::string settle_csv(const std::vector<SettleRow>& rows) {
  std::ostringstream out;
  out << "stage,ideal_mv,simulated_mv,error_pct\n";
  for (const auto& r : rows)
    out << r.stage << ',' << format_double(r.ideal_mv) << ',' << format_double(r.simulated_mv)
        << ',' << format_double(r.error_pct) << '\n';
  return out.str();
}

/// gnuplot script that renders `csv` (same directory) to a PNG next to it.
struct PlotSpec {
  std::string csv;
  std::string title;
  std::string xlabel;
  std::string ylabel;
  std::vector<std::pair<int, std::string>> series;  // 1-based y column, legend
  int xcolumn = 1;
  std::string style = "lines";
};

inline std::string gnuplot_script(const PlotSpec& p) {
  const auto png = std::filesystem::path(p.csv).replace_extension(".png").string();
  std::ostringstream out;
  out << "set terminal pngcairo size 900,600\n"
      << "set output '" << png << "'\n"
      << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set title '" << p.title << "'\n"
      << "set xlabel '" << p.xlabel << "'\n"
      << "set ylabel '" << p.ylabel << "'\n"
      << "set grid\n"
      << "plot ";
  for (std::size_t i = 0; i < p.series.size(); ++i) {
    if (i) out << ", \\\n     ";
    out << "'" << p.csv << "' using " << p.xcolumn << ':' << p.series[i].first << " with "
        << p.style << " title '" << p.series[i].second << "'";
  }
  out << '\n';
  return out.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace pipeadc::io
