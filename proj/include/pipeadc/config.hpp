#pragma once

// Parameter types for the 8-bit pipelined converter model, plus the flat
// `key = value` configuration format used by the command-line tool.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pipeadc {

/// Raised for invalid parameters, malformed config files and bad inputs.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kNumStages = 6;
inline constexpr int kNumBits = 8;
inline constexpr int kNumCodes = 1 << kNumBits;

inline double db_to_linear(double db) { return std::pow(10.0, db / 20.0); }
inline double linear_to_db(double gain) { return 20.0 * std::log10(gain); }

struct ReferenceConfig {
  double vref = 0.6;  // differential half-range: input spans [-vref, +vref]
  double vcm = 0.9;
  bool operator==(const ReferenceConfig&) const = default;
};

/// Behavioral amplifier: DC gain (linear), gain-bandwidth product, feedback
/// factor and the fraction of the previous output that survives into the
/// next amplification when the reset phase is disabled.
struct OtaParams {
  double a0 = 1e9;
  double gbw = 1e15;
  double beta = 0.5;
  double k_mem = 0.0;
  bool operator==(const OtaParams&) const = default;
};

/// Per-field override of the converter-wide OtaParams.
struct OtaOverride {
  std::optional<double> a0;
  std::optional<double> gbw;
  std::optional<double> beta;
  std::optional<double> k_mem;

  OtaParams resolve(OtaParams base) const {
    if (a0) base.a0 = *a0;
    if (gbw) base.gbw = *gbw;
    if (beta) base.beta = *beta;
    if (k_mem) base.k_mem = *k_mem;
    return base;
  }
  bool operator==(const OtaOverride&) const = default;
};

struct ClockParams {
  double fs = 166.6e6;
  double settle_fraction = 0.387;  // of T = 1/fs
  bool reset_enabled = true;

  double period() const { return 1.0 / fs; }
  double t_settle() const { return settle_fraction / fs; }
  bool operator==(const ClockParams&) const = default;
};

struct StageParams {
  double gain_mismatch = 0.0;  // stage gain is 2(1 + gain_mismatch)
  double dac_mismatch = 0.0;   // DAC level is d(1 + dac_mismatch) vref
  double cmp_offset_hi = 0.0;
  double cmp_offset_lo = 0.0;
  OtaOverride ota;
  bool operator==(const StageParams&) const = default;
};

/// Standard deviations of the static mismatch drawn once per instantiation.
struct MismatchSigma {
  double gain = 0.0;
  double dac = 0.0;
  double offset = 0.0;  // volts, applied to every comparator
  bool operator==(const MismatchSigma&) const = default;

  bool any() const { return gain != 0.0 || dac != 0.0 || offset != 0.0; }
};

struct AdcConfig {
  ReferenceConfig reference;
  ClockParams clock;
  OtaParams ota;
  StageParams sha;
  std::vector<StageParams> stages = std::vector<StageParams>(kNumStages);
  std::array<double, 3> flash_offsets{};
  MismatchSigma mismatch;
  std::uint64_t rng_seed = 1;

  /// Amplifier seen by pipeline stage `i` (0-based).
  OtaParams stage_ota(std::size_t i) const { return stages.at(i).ota.resolve(ota); }

  /// The SHA is a unity-feedback hold, so beta defaults to 1.
  OtaParams sha_ota() const {
    OtaParams base = ota;
    base.beta = 1.0;
    return sha.ota.resolve(base);
  }

  bool operator==(const AdcConfig&) const = default;
};

// ---------------------------------------------------------------------------
// Presets

namespace presets {

/// Near-ideal converter: 180 dB gain, 1 PHz GBW, no mismatch, reset on.
inline AdcConfig ideal() { return AdcConfig{}; }

/// Amplifier at the 85 dB / 2.5 GHz operating point. The settling window of
/// 0.16 T is fitted so a full-swing step loses ~0.3 mV per stage at the front
/// and ~2 % by stage 6.
inline AdcConfig prototype() {
  AdcConfig c;
  c.ota.a0 = db_to_linear(85.0);
  c.ota.gbw = 2.5e9;
  c.clock.settle_fraction = 0.16;
  return c;
}

/// Amplifier sized exactly at the minimum budget (67 dB, 950 MHz at
/// settle_fraction 0.387) with 0.1 % capacitor mismatch and 5 mV comparator
/// offsets.
inline AdcConfig degraded(std::uint64_t seed = 1) {
  AdcConfig c;
  c.ota.a0 = db_to_linear(67.0);
  c.ota.gbw = 950e6;
  c.clock.settle_fraction = 0.387;
  c.mismatch = {0.001, 0.001, 0.005};
  c.rng_seed = seed;
  return c;
}

inline std::optional<AdcConfig> by_name(std::string_view name) {
  if (name == "default" || name == "ideal") return ideal();
  if (name == "prototype") return prototype();
  if (name == "degraded") return degraded();
  return std::nullopt;
}

}  // namespace presets

// ---------------------------------------------------------------------------
// Validation

namespace detail {

inline void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw Error(path + ": " + what);
}

inline void check_ota(const OtaParams& o, const std::string& p) {
  require(!std::isnan(o.a0) && o.a0 >= 1.0, p + ".a0", "a0 must be >= 1");
  require(!std::isnan(o.gbw) && o.gbw > 0.0, p + ".gbw", "gbw must be positive");
  require(o.beta > 0.0, p + ".beta", "beta must be positive");
  require(o.beta <= 1.0, p + ".beta", "beta must be <= 1");
  require(o.k_mem >= 0.0 && o.k_mem <= 1.0, p + ".k_mem", "k_mem must lie in [0, 1]");
}

inline void check_stage(const StageParams& s, const std::string& p) {
  require(std::abs(s.gain_mismatch) < 0.5, p + ".gain_mismatch", "|gain_mismatch| must be < 0.5");
  require(std::abs(s.dac_mismatch) < 0.5, p + ".dac_mismatch", "|dac_mismatch| must be < 0.5");
  require(std::isfinite(s.cmp_offset_hi), p + ".cmp_offset_hi", "offset must be finite");
  require(std::isfinite(s.cmp_offset_lo), p + ".cmp_offset_lo", "offset must be finite");
}

}  // namespace detail

/// Returns `config` unchanged if every invariant holds; throws Error naming
/// the first violated field otherwise.
inline AdcConfig validate(const AdcConfig& config) {
  using detail::require;
  const auto& c = config;
  require(std::isfinite(c.reference.vref) && c.reference.vref > 0.0, "reference.vref",
          "vref must be positive");
  require(std::isfinite(c.reference.vcm), "reference.vcm", "vcm must be finite");
  require(std::isfinite(c.clock.fs) && c.clock.fs > 0.0, "clock.fs", "fs must be positive");
  require(c.clock.settle_fraction > 0.0 && c.clock.settle_fraction <= 0.5,
          "clock.settle_fraction", "settle_fraction must lie in (0, 0.5]");
  detail::check_ota(c.ota, "ota");
  detail::check_stage(c.sha, "sha");
  detail::check_ota(c.sha_ota(), "sha.ota");
  require(c.stages.size() == kNumStages, "stages", "expected " + std::to_string(kNumStages));
  for (std::size_t i = 0; i < c.stages.size(); ++i) {
    const std::string p = "stages[" + std::to_string(i) + "]";
    detail::check_stage(c.stages[i], p);
    detail::check_ota(c.stage_ota(i), p + ".ota");
  }
  for (std::size_t j = 0; j < c.flash_offsets.size(); ++j)
    require(std::isfinite(c.flash_offsets[j]), "flash_offsets[" + std::to_string(j) + "]",
            "offset must be finite");
  require(c.mismatch.gain >= 0.0 && c.mismatch.dac >= 0.0 && c.mismatch.offset >= 0.0,
          "mismatch", "sigmas must be non-negative");
  return config;
}

/// Draws the static mismatch described by `config.mismatch` from `rng_seed`
/// and adds it to the explicit per-stage values. The result has zero sigmas,
/// so realizing twice is the same as realizing once.
inline AdcConfig realize(const AdcConfig& config) {
  AdcConfig out = config;
  if (!config.mismatch.any()) return out;
  std::mt19937_64 rng(config.rng_seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  const auto& s = config.mismatch;
  for (auto& st : out.stages) {
    st.gain_mismatch += s.gain * unit(rng);
    st.dac_mismatch += s.dac * unit(rng);
    st.cmp_offset_hi += s.offset * unit(rng);
    st.cmp_offset_lo += s.offset * unit(rng);
  }
  for (auto& f : out.flash_offsets) f += s.offset * unit(rng);
  out.mismatch = {};
  return out;
}

// ---------------------------------------------------------------------------
// Flat key/value access

namespace detail {

inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, const std::string& key) {
  double v = 0.0;
  std::string_view t = s;
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
    throw Error(key + ": cannot parse number '" + std::string(s) + "'");
  return v;
}

inline bool parse_bool(std::string_view s, const std::string& key) {
  if (s == "true" || s == "1" || s == "on") return true;
  if (s == "false" || s == "0" || s == "off") return false;
  throw Error(key + ": cannot parse flag '" + std::string(s) + "'");
}

// "stages[3].gain_mismatch" -> ("stages", 3, "gain_mismatch")
struct IndexedKey {
  std::string head;
  std::optional<std::size_t> index;
  std::string tail;
};

inline IndexedKey split_key(std::string_view key) {
  IndexedKey k;
  auto dot = key.find('.');
  std::string_view head = key.substr(0, dot);
  k.tail = dot == std::string_view::npos ? "" : std::string(key.substr(dot + 1));
  auto lb = head.find('[');
  if (lb != std::string_view::npos) {
    auto rb = head.find(']', lb);
    if (rb == std::string_view::npos || rb + 1 != head.size())
      throw Error(std::string(key) + ": malformed index");
    std::size_t idx = 0;
    auto digits = head.substr(lb + 1, rb - lb - 1);
    auto res = std::from_chars(digits.data(), digits.data() + digits.size(), idx);
    if (res.ec != std::errc{} || res.ptr != digits.data() + digits.size())
      throw Error(std::string(key) + ": malformed index");
    k.index = idx;
    head = head.substr(0, lb);
  }
  k.head = std::string(head);
  return k;
}

[[noreturn]] inline void unknown_key(std::string_view key) {
  throw Error("unknown key '" + std::string(key) + "'");
}

inline void set_ota(OtaParams& o, std::string_view field, std::string_view value,
                    const std::string& key) {
  if (field == "a0") o.a0 = parse_double(value, key);
  else if (field == "a0_db") o.a0 = db_to_linear(parse_double(value, key));
  else if (field == "gbw") o.gbw = parse_double(value, key);
  else if (field == "beta") o.beta = parse_double(value, key);
  else if (field == "k_mem") o.k_mem = parse_double(value, key);
  else unknown_key(key);
}

inline void set_override(OtaOverride& o, std::string_view field, std::string_view value,
                         const std::string& key) {
  if (field == "a0") o.a0 = parse_double(value, key);
  else if (field == "a0_db") o.a0 = db_to_linear(parse_double(value, key));
  else if (field == "gbw") o.gbw = parse_double(value, key);
  else if (field == "beta") o.beta = parse_double(value, key);
  else if (field == "k_mem") o.k_mem = parse_double(value, key);
  else unknown_key(key);
}

inline void set_stage(StageParams& s, std::string_view field, std::string_view value,
                      const std::string& key) {
  if (field == "gain_mismatch") s.gain_mismatch = parse_double(value, key);
  else if (field == "dac_mismatch") s.dac_mismatch = parse_double(value, key);
  else if (field == "cmp_offset_hi") s.cmp_offset_hi = parse_double(value, key);
  else if (field == "cmp_offset_lo") s.cmp_offset_lo = parse_double(value, key);
  else if (field.starts_with("ota.")) set_override(s.ota, field.substr(4), value, key);
  else unknown_key(key);
}

}  // namespace detail

/// Sets one parameter by its dotted path, e.g. `clock.fs` or
/// `stages[2].gain_mismatch`. `ota.a0_db` is accepted as a dB alias for
/// `ota.a0`. Unknown paths throw.
inline void set_param(AdcConfig& c, std::string_view key, std::string_view value) {
  using namespace detail;
  const std::string k(key);
  auto ik = split_key(key);
  const std::string_view f = ik.tail;
  if (ik.head == "stages" && ik.index) {
    if (*ik.index >= 64) throw Error(k + ": stage index out of range");
    if (*ik.index >= c.stages.size()) c.stages.resize(*ik.index + 1);
    set_stage(c.stages[*ik.index], f, value, k);
    return;
  }
  if (ik.head == "flash_offsets" && ik.index && f.empty()) {
    if (*ik.index >= c.flash_offsets.size()) throw Error(k + ": flash offset index out of range");
    c.flash_offsets[*ik.index] = parse_double(value, k);
    return;
  }
  if (ik.index) unknown_key(key);
  if (ik.head == "reference") {
    if (f == "vref") c.reference.vref = parse_double(value, k);
    else if (f == "vcm") c.reference.vcm = parse_double(value, k);
    else unknown_key(key);
  } else if (ik.head == "clock") {
    if (f == "fs") c.clock.fs = parse_double(value, k);
    else if (f == "settle_fraction") c.clock.settle_fraction = parse_double(value, k);
    else if (f == "reset_enabled") c.clock.reset_enabled = parse_bool(value, k);
    else unknown_key(key);
  } else if (ik.head == "ota") {
    set_ota(c.ota, f, value, k);
  } else if (ik.head == "sha") {
    set_stage(c.sha, f, value, k);
  } else if (ik.head == "mismatch") {
    if (f == "gain_sigma") c.mismatch.gain = parse_double(value, k);
    else if (f == "dac_sigma") c.mismatch.dac = parse_double(value, k);
    else if (f == "offset_sigma") c.mismatch.offset = parse_double(value, k);
    else unknown_key(key);
  } else if (ik.head == "rng_seed" && f.empty()) {
    std::uint64_t seed = 0;
    auto res = std::from_chars(value.data(), value.data() + value.size(), seed);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
      throw Error(k + ": cannot parse integer '" + std::string(value) + "'");
    c.rng_seed = seed;
  } else {
    unknown_key(key);
  }
}

inline void set_param(AdcConfig& c, std::string_view key, double value) {
  set_param(c, key, detail::format_double(value));
}

/// Parses the flat configuration text on top of `base`. Blank lines and
/// `#` comments are ignored; the result is validated.
inline AdcConfig parse_config(std::string_view text, AdcConfig base = presets::ideal()) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string_view s) {
      const char* ws = " \t\r";
      auto b = s.find_first_not_of(ws);
      if (b == std::string_view::npos) return std::string_view{};
      return s.substr(b, s.find_last_not_of(ws) - b + 1);
    };
    std::string_view body = trim(line);
    if (body.empty()) continue;
    auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw Error("line " + std::to_string(lineno) + ": expected 'key = value'");
    auto key = trim(body.substr(0, eq));
    auto value = trim(body.substr(eq + 1));
    try {
      set_param(base, key, value);
    } catch (const Error& e) {
      throw Error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return validate(base);
}

inline std::string serialize_config(const AdcConfig& c) {
  using detail::format_double;
  std::ostringstream out;
  auto put = [&](const std::string& k, double v) { out << k << " = " << format_double(v) << '\n'; };
  auto put_override = [&](const std::string& p, const OtaOverride& o) {
    if (o.a0) put(p + ".ota.a0", *o.a0);
    if (o.gbw) put(p + ".ota.gbw", *o.gbw);
    if (o.beta) put(p + ".ota.beta", *o.beta);
    if (o.k_mem) put(p + ".ota.k_mem", *o.k_mem);
  };
  auto put_stage = [&](const std::string& p, const StageParams& s) {
    put(p + ".gain_mismatch", s.gain_mismatch);
    put(p + ".dac_mismatch", s.dac_mismatch);
    put(p + ".cmp_offset_hi", s.cmp_offset_hi);
    put(p + ".cmp_offset_lo", s.cmp_offset_lo);
    put_override(p, s.ota);
  };
  put("reference.vref", c.reference.vref);
  put("reference.vcm", c.reference.vcm);
  put("clock.fs", c.clock.fs);
  put("clock.settle_fraction", c.clock.settle_fraction);
  out << "clock.reset_enabled = " << (c.clock.reset_enabled ? "true" : "false") << '\n';
  put("ota.a0", c.ota.a0);
  put("ota.gbw", c.ota.gbw);
  put("ota.beta", c.ota.beta);
  put("ota.k_mem", c.ota.k_mem);
  put_stage("sha", c.sha);
  for (std::size_t i = 0; i < c.stages.size(); ++i)
    put_stage("stages[" + std::to_string(i) + "]", c.stages[i]);
  for (std::size_t j = 0; j < c.flash_offsets.size(); ++j)
    put("flash_offsets[" + std::to_string(j) + "]", c.flash_offsets[j]);
  put("mismatch.gain_sigma", c.mismatch.gain);
  put("mismatch.dac_sigma", c.mismatch.dac);
  put("mismatch.offset_sigma", c.mismatch.offset);
  out << "rng_seed = " << c.rng_seed << '\n';
  return out.str();
}

/// Loads a config file, or a built-in preset when `path` names one
/// (`default`, `ideal`, `prototype`, `degraded`).
inline AdcConfig load_config(const std::string& path) {
  if (auto preset = presets::by_name(path)) return validate(*preset);
  std::ifstream in(path);
  if (!in) throw Error("cannot read config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace pipeadc
