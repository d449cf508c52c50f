#include "halbach/motor_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "halbach/constants.hpp"
#include "halbach/error.hpp"

namespace halbach {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingKey: return "MissingKey";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::NonPositiveLength: return "NonPositiveLength";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::UnsupportedPhaseCount: return "UnsupportedPhaseCount";
    case ErrorCode::OffsetExceedsGap: return "OffsetExceedsGap";
    case ErrorCode::InvalidMagnetCount: return "InvalidMagnetCount";
    case ErrorCode::InvalidTruncation: return "InvalidTruncation";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ZeroVelocity: return "ZeroVelocity";
    case ErrorCode::ZeroLoss: return "ZeroLoss";
    case ErrorCode::EmptyBounds: return "EmptyBounds";
  }
  return "Unknown";
}

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::NonPositiveLength, std::string(name) + " must be > 0");
  }
}

void require_positive_value(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::InvalidValue, std::string(name) + " must be > 0");
  }
}

}  // namespace

MotorDesign::MotorDesign(const MotorParameters& p) : p_(p) {
  require_positive(p.lambda, "lambda");
  require_positive(p.gap, "gap");
  require_positive(p.coil_height, "coil height");
  require_positive(p.pm_height, "pm height");
  require_positive(p.depth, "depth");
  if (p.phases != 3 && p.phases != 5) {
    throw Error(ErrorCode::UnsupportedPhaseCount,
                "n_phases = " + std::to_string(p.phases) + " (supported: 3, 5)");
  }
  if (p.magnets_per_pole < 2) {
    throw Error(ErrorCode::InvalidMagnetCount,
                "n_magnets_per_pole = " + std::to_string(p.magnets_per_pole) + " (need >= 2)");
  }
  if (!(p.gap_offset >= 0.0) || !std::isfinite(p.gap_offset)) {
    throw Error(ErrorCode::InvalidValue, "gap offset must be >= 0");
  }
  if (p.gap_offset >= p.gap) {
    throw Error(ErrorCode::OffsetExceedsGap, "gap offset must be smaller than the airgap");
  }
  if (p.turns < 1) throw Error(ErrorCode::InvalidValue, "turns_per_coil must be >= 1");
  if (!std::isfinite(p.remanence) || p.remanence < 0.0) {
    throw Error(ErrorCode::InvalidValue, "remanence must be >= 0");
  }
  if (!std::isfinite(p.j_max) || p.j_max < 0.0) {
    throw Error(ErrorCode::InvalidValue, "j_max must be >= 0");
  }
  if (!std::isfinite(p.frequency) || p.frequency < 0.0) {
    throw Error(ErrorCode::InvalidValue, "frequency must be >= 0");
  }
  require_positive_value(p.rho_pm, "rho_pm");
  require_positive_value(p.rho_cu, "rho_cu");
  require_positive_value(p.sigma_cu, "sigma_cu");

  k_ = 2.0 * kPi / p.lambda;
  omega_ = 2.0 * kPi * p.frequency;
  magnetization_ = p.remanence / kMu0;
}

double MotorDesign::piece_span() const noexcept { return kPi / p_.magnets_per_pole; }

MotorDesign MotorDesign::with_gap(double gap) const {
  MotorParameters p = p_;
  p.gap = gap;
  p.gap_offset = 0.0;
  return MotorDesign(p);
}

HarmonicTruncation::HarmonicTruncation(int n_max) : n_max_(n_max) {
  if (n_max < 1 || n_max % 2 == 0) {
    throw Error(ErrorCode::InvalidTruncation,
                "n_max must be odd and >= 1, got " + std::to_string(n_max));
  }
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "lambda_m",      "gap_m",          "coil_height_m",    "pm_height_m",
      "depth_m",       "n_magnets_per_pole", "n_phases",     "back_iron",
      "remanence_T",   "j_max_A_per_m2", "frequency_Hz",     "phi0_rad",
      "turns_per_coil", "rho_pm_kg_m3",  "rho_cu_kg_m3",     "sigma_cu_S_m",
      "gap_offset_m",  "n_max_harmonic"};
  return keys;
}

namespace {

const std::set<std::string>& required_keys() {
  static const std::set<std::string> keys = {
      "lambda_m",    "gap_m",          "coil_height_m", "pm_height_m",
      "depth_m",     "n_magnets_per_pole", "n_phases",  "back_iron",
      "remanence_T", "j_max_A_per_m2", "frequency_Hz"};
  return keys;
}

std::string trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, key + ": not a number: '" + v + "'");
  }
  if (used != v.size()) throw Error(ErrorCode::ParseError, key + ": trailing characters in '" + v + "'");
  return out;
}

int parse_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto* first = v.data();
  const auto* last = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::ParseError, key + ": not an integer: '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorCode::ParseError, key + ": not a boolean: '" + v + "'");
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

MotorConfig parse_config(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected key = value");
    }
    auto key = trim(std::string_view(body).substr(0, eq));
    auto value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": empty key or value");
    }
    const auto& known = config_keys();
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw Error(ErrorCode::UnknownKey, key);
    }
    if (kv.contains(key)) throw Error(ErrorCode::ParseError, "duplicate key " + key);
    kv.emplace(std::move(key), std::move(value));
  }
  for (const auto& k : required_keys()) {
    if (!kv.contains(k)) throw Error(ErrorCode::MissingKey, k);
  }

  MotorParameters p;
  auto get_d = [&](const char* key, double& dst) {
    if (auto it = kv.find(key); it != kv.end()) dst = parse_double(key, it->second);
  };
  auto get_i = [&](const char* key, int& dst) {
    if (auto it = kv.find(key); it != kv.end()) dst = parse_int(key, it->second);
  };
  get_d("lambda_m", p.lambda);
  get_d("gap_m", p.gap);
  get_d("coil_height_m", p.coil_height);
  get_d("pm_height_m", p.pm_height);
  get_d("depth_m", p.depth);
  get_i("n_magnets_per_pole", p.magnets_per_pole);
  get_i("n_phases", p.phases);
  p.back_iron = parse_bool("back_iron", kv.at("back_iron"));
  get_d("remanence_T", p.remanence);
  get_d("j_max_A_per_m2", p.j_max);
  get_d("frequency_Hz", p.frequency);
  get_d("phi0_rad", p.phi0);
  get_i("turns_per_coil", p.turns);
  get_d("rho_pm_kg_m3", p.rho_pm);
  get_d("rho_cu_kg_m3", p.rho_cu);
  get_d("sigma_cu_S_m", p.sigma_cu);
  get_d("gap_offset_m", p.gap_offset);
  int n_max = 199;
  get_i("n_max_harmonic", n_max);

  return MotorConfig{MotorDesign(p), HarmonicTruncation(n_max)};
}

MotorConfig load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::ParseError, "cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

MotorDesign load_design(std::string_view text) { return parse_config(text).design; }

std::map<std::string, std::string> to_key_values(const MotorConfig& cfg) {
  const auto& p = cfg.design.params();
  return {
      {"lambda_m", format_double(p.lambda)},
      {"gap_m", format_double(p.gap)},
      {"coil_height_m", format_double(p.coil_height)},
      {"pm_height_m", format_double(p.pm_height)},
      {"depth_m", format_double(p.depth)},
      {"n_magnets_per_pole", std::to_string(p.magnets_per_pole)},
      {"n_phases", std::to_string(p.phases)},
      {"back_iron", p.back_iron ? "true" : "false"},
      {"remanence_T", format_double(p.remanence)},
      {"j_max_A_per_m2", format_double(p.j_max)},
      {"frequency_Hz", format_double(p.frequency)},
      {"phi0_rad", format_double(p.phi0)},
      {"turns_per_coil", std::to_string(p.turns)},
      {"rho_pm_kg_m3", format_double(p.rho_pm)},
      {"rho_cu_kg_m3", format_double(p.rho_cu)},
      {"sigma_cu_S_m", format_double(p.sigma_cu)},
      {"gap_offset_m", format_double(p.gap_offset)},
      {"n_max_harmonic", std::to_string(cfg.truncation.n_max())},
  };
}

std::string to_config_text(const MotorConfig& cfg) {
  const auto kv = to_key_values(cfg);
  std::ostringstream os;
  for (const auto& key : config_keys()) os << key << " = " << kv.at(key) << '\n';
  return os.str();
}

SlotCurrent slot_current(int phases, int m) {
  if (phases != 3 && phases != 5) {
    throw Error(ErrorCode::UnsupportedPhaseCount, std::to_string(phases));
  }
  if (m < 1 || m > phases) {
    throw Error(ErrorCode::IndexOutOfRange,
                "slot " + std::to_string(m) + " outside 1.." + std::to_string(phases));
  }
  const double step = 2.0 * kPi / phases;
  // Slot order a, c', b (three-phase) and a, d', b, e', c (five-phase); the
  // multiplier is (j - 1) of the phase letter, negated for primed slots.
  static constexpr int three[3][2] = {{+1, 0}, {-1, 2}, {+1, 1}};
  static constexpr int five[5][2] = {{+1, 0}, {-1, 3}, {+1, 1}, {-1, 4}, {+1, 2}};
  const auto& row = phases == 3 ? three[m - 1] : five[m - 1];
  return {row[0], -row[1] * step};
}

double phase_current_density(const MotorDesign& d, int m, double t) {
  const auto sc = slot_current(d.phases(), m);
  return sc.sign * d.j_max() * std::cos(d.omega() * t + sc.offset + d.phi0());
}

}  // namespace halbach
