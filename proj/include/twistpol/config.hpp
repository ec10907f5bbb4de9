#pragma once

// Flat key = value configuration for the scan driver. '#' starts a comment.
// Repeated `mode.m_gamma` keys open successive beam modes; the other mode.*
// keys apply to the most recently opened mode:
//
//   theta_k = 0.1
//   mode.m_gamma  = -2
//   mode.helicity = 1
//   mode.weight_re = 1.0
//   mode.weight_im = 0.0
//   mode.m_gamma  = 3
//   mode.helicity = -1
//   l_f = 1
//   mask = all              # all | transverse | longitudinal
//   kind = grid             # radial | grid | point
//   b_max = 20.0            # radial scans: 0 <= b <= b_max
//   n_steps = 201
//   phi_b = 0.0
//   half_width = 3.0        # grid scans: |b_x|, |b_y| <= half_width
//   grid_n = 201
//   b = 0.0                 # point evaluations / ratio
//   observables = prob, lz, B1, B2

#include <cctype>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "twistpol/beam.hpp"
#include "twistpol/transition.hpp"

namespace twistpol {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ScanKind { radial, grid, point };

struct ScanConfig {
  double theta_k = 0.1;
  std::vector<TwistedMode> modes;  // theta_k field of each mode mirrors theta_k

  int l_f = 1;
  FieldMask mask = FieldMask::full();

  ScanKind kind = ScanKind::radial;
  double b_max = 20.0;
  int n_steps = 201;
  double phi_b = 0.0;
  double half_width = 3.0;
  int grid_n = 201;
  double b = 0.0;

  std::vector<std::string> observables;  // empty -> driver defaults

  bool operator==(const ScanConfig&) const;
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

inline double parse_double(const std::string& value, int line, const std::string& key) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "' needs a number, got '" + value + "'");
  }
  if (used != value.size())
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "' has trailing characters in '" + value + "'");
  return v;
}

inline int parse_int(const std::string& value, int line, const std::string& key) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(value, &used);
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "' needs an integer, got '" + value + "'");
  }
  if (used != value.size())
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "' has trailing characters in '" + value + "'");
  return v;
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline bool ScanConfig::operator==(const ScanConfig& o) const {
  if (modes.size() != o.modes.size()) return false;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (modes[i].theta_k != o.modes[i].theta_k || modes[i].m_gamma != o.modes[i].m_gamma ||
        modes[i].helicity != o.modes[i].helicity || modes[i].weight != o.modes[i].weight)
      return false;
  }
  return theta_k == o.theta_k && l_f == o.l_f && mask == o.mask && kind == o.kind &&
         b_max == o.b_max && n_steps == o.n_steps && phi_b == o.phi_b &&
         half_width == o.half_width && grid_n == o.grid_n && b == o.b &&
         observables == o.observables;
}

// Parse configuration text. Throws ConfigError naming the line and key for
// anything malformed or unknown. Structural validity (mode list, ranges) is
// checked by validate_scan_config so that partially built configs can still
// be assembled programmatically.
inline ScanConfig parse_scan_config(std::string_view text) {
  ScanConfig cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string stripped = detail::trim(raw);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line) + ": expected 'key = value', got '" +
                        stripped + "'");
    const std::string key = detail::trim(stripped.substr(0, eq));
    const std::string value = detail::trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(line) + ": empty key or value");

    auto current_mode = [&]() -> TwistedMode& {
      if (cfg.modes.empty())
        throw ConfigError("line " + std::to_string(line) + ": '" + key +
                          "' before any 'mode.m_gamma' line");
      return cfg.modes.back();
    };

    if (key == "theta_k") {
      cfg.theta_k = detail::parse_double(value, line, key);
    } else if (key == "mode.m_gamma") {
      TwistedMode mode;
      mode.m_gamma = detail::parse_int(value, line, key);
      cfg.modes.push_back(mode);  // theta_k synced below
    } else if (key == "mode.helicity") {
      current_mode().helicity = detail::parse_int(value, line, key);
    } else if (key == "mode.weight_re") {
      auto& m = current_mode();
      m.weight = {detail::parse_double(value, line, key), m.weight.imag()};
    } else if (key == "mode.weight_im") {
      auto& m = current_mode();
      m.weight = {m.weight.real(), detail::parse_double(value, line, key)};
    } else if (key == "l_f") {
      cfg.l_f = detail::parse_int(value, line, key);
    } else if (key == "mask") {
      if (value == "all")
        cfg.mask = FieldMask::full();
      else if (value == "transverse")
        cfg.mask = FieldMask::transverse();
      else if (value == "longitudinal")
        cfg.mask = FieldMask::longitudinal();
      else
        throw ConfigError("line " + std::to_string(line) +
                          ": mask must be all, transverse or longitudinal, got '" + value + "'");
    } else if (key == "kind") {
      if (value == "radial")
        cfg.kind = ScanKind::radial;
      else if (value == "grid")
        cfg.kind = ScanKind::grid;
      else if (value == "point")
        cfg.kind = ScanKind::point;
      else
        throw ConfigError("line " + std::to_string(line) +
                          ": kind must be radial, grid or point, got '" + value + "'");
    } else if (key == "b_max") {
      cfg.b_max = detail::parse_double(value, line, key);
    } else if (key == "n_steps") {
      cfg.n_steps = detail::parse_int(value, line, key);
    } else if (key == "phi_b") {
      cfg.phi_b = detail::parse_double(value, line, key);
    } else if (key == "half_width") {
      cfg.half_width = detail::parse_double(value, line, key);
    } else if (key == "grid_n") {
      cfg.grid_n = detail::parse_int(value, line, key);
    } else if (key == "b") {
      cfg.b = detail::parse_double(value, line, key);
    } else if (key == "observables") {
      cfg.observables.clear();
      std::istringstream items(value);
      std::string item;
      while (std::getline(items, item, ',')) {
        const std::string name = detail::trim(item);
        if (!name.empty()) cfg.observables.push_back(name);
      }
    } else {
      throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
  }
  for (auto& mode : cfg.modes) mode.theta_k = cfg.theta_k;
  return cfg;
}

// Structural validation with field-level messages.
inline void validate_scan_config(const ScanConfig& cfg) {
  if (cfg.modes.empty()) throw ConfigError("config: at least one mode.m_gamma block required");
  if (!(cfg.theta_k > 0.0) || !(cfg.theta_k < 0.5 * pi))
    throw ConfigError("config: theta_k must lie in (0, pi/2)");
  for (std::size_t i = 0; i < cfg.modes.size(); ++i) {
    const auto& m = cfg.modes[i];
    if (m.helicity != 1 && m.helicity != -1)
      throw ConfigError("config: mode " + std::to_string(i + 1) + ": helicity must be +1 or -1");
    if (m.weight == std::complex<double>(0.0, 0.0))
      throw ConfigError("config: mode " + std::to_string(i + 1) + ": weight must be nonzero");
  }
  if (cfg.l_f < 1) throw ConfigError("config: l_f must be >= 1");
  if (!cfg.mask.any()) throw ConfigError("config: mask excludes every field component");
  if (!(cfg.b_max > 0.0)) throw ConfigError("config: b_max must be > 0");
  if (cfg.n_steps < 2) throw ConfigError("config: n_steps must be >= 2");
  if (!(cfg.half_width > 0.0)) throw ConfigError("config: half_width must be > 0");
  if (cfg.grid_n < 2) throw ConfigError("config: grid_n must be >= 2");
  if (!(cfg.b >= 0.0)) throw ConfigError("config: b must be >= 0");
}

inline ScanConfig load_scan_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scan_config(text.str());
}

// Serialization; parse_scan_config(serialize_scan_config(cfg)) == cfg.
inline std::string serialize_scan_config(const ScanConfig& cfg) {
  std::ostringstream out;
  out << "theta_k = " << detail::format_double(cfg.theta_k) << "\n";
  for (const auto& m : cfg.modes) {
    out << "mode.m_gamma = " << m.m_gamma << "\n";
    out << "mode.helicity = " << m.helicity << "\n";
    out << "mode.weight_re = " << detail::format_double(m.weight.real()) << "\n";
    out << "mode.weight_im = " << detail::format_double(m.weight.imag()) << "\n";
  }
  out << "l_f = " << cfg.l_f << "\n";
  const char* mask_name = nullptr;
  if (cfg.mask == FieldMask::full())
    mask_name = "all";
  else if (cfg.mask == FieldMask::transverse())
    mask_name = "transverse";
  else if (cfg.mask == FieldMask::longitudinal())
    mask_name = "longitudinal";
  else
    throw ConfigError("config: mask has no config-file name");
  out << "mask = " << mask_name << "\n";
  out << "kind = "
      << (cfg.kind == ScanKind::radial ? "radial"
                                       : (cfg.kind == ScanKind::grid ? "grid" : "point"))
      << "\n";
  out << "b_max = " << detail::format_double(cfg.b_max) << "\n";
  out << "n_steps = " << cfg.n_steps << "\n";
  out << "phi_b = " << detail::format_double(cfg.phi_b) << "\n";
  out << "half_width = " << detail::format_double(cfg.half_width) << "\n";
  out << "grid_n = " << cfg.grid_n << "\n";
  out << "b = " << detail::format_double(cfg.b) << "\n";
  if (!cfg.observables.empty()) {
    out << "observables = ";
    for (std::size_t i = 0; i < cfg.observables.size(); ++i) {
      if (i) out << ", ";
      out << cfg.observables[i];
    }
    out << "\n";
  }
  return out.str();
}

inline Beam beam_from_config(const ScanConfig& cfg) {
  validate_scan_config(cfg);
  return Beam(cfg.modes);
}

inline TransitionSpec transition_from_config(const ScanConfig& cfg) {
  return TransitionSpec{cfg.l_f, cfg.mask};
}

}  // namespace twistpol
