#pragma once

// Scan driver: radial and 2-D impact-parameter sweeps of polarization
// observables, CSV emission, and gnuplot script generation.
//
// Cells are independent pure evaluations; they may run in parallel but every
// result lands in its preallocated slot indexed by cell, so output is
// byte-identical across runs and thread counts.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "twistpol/config.hpp"
#include "twistpol/polarization.hpp"

namespace twistpol {

// Node masking: a cell is masked when its total excitation probability falls
// below this fraction of the scan's maximum.
inline constexpr double node_threshold_relative = 1e-12;

struct ScanGrid {
  ScanKind kind = ScanKind::radial;
  std::vector<std::string> coord_names;  // {"b"} or {"b_x", "b_y"}
  std::vector<std::string> columns;      // expanded observable column names
  int nx = 0;
  int ny = 1;
  std::vector<double> coord_x;              // per cell
  std::vector<double> coord_y;              // per cell (grid scans only)
  std::vector<std::vector<double>> values;  // [cell][column]; NaN when masked
  std::vector<std::uint8_t> node_mask;      // 1 = masked

  std::size_t cells() const { return coord_x.size(); }
};

namespace detail {

template <typename F>
void parallel_for(std::size_t n, F&& fn) {
  const unsigned hw = std::thread::hardware_concurrency();
  const std::size_t nthreads =
      std::min<std::size_t>(hw == 0 ? 1 : hw, n / 64 + 1);
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// One parsed observable request.
struct ObsRequest {
  enum class Kind { prob, lz, alignment, multipole, cartesian } kind;
  int K = 0;
  int M = 0;
};

inline ObsRequest parse_observable(const std::string& name, int l_f) {
  if (name == "prob") return {ObsRequest::Kind::prob, 0, 0};
  if (name == "lz") return {ObsRequest::Kind::lz, 0, 0};
  if (name == "cartesian") {
    if (l_f != 1)
      throw ConfigError("config: observable 'cartesian' requires l_f = 1");
    return {ObsRequest::Kind::cartesian, 0, 0};
  }
  auto all_digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  if (name.size() >= 2 && name[0] == 'B' && all_digits({name.data() + 1, name.size() - 1})) {
    const int k = std::stoi(name.substr(1));
    if (k < 1 || k > 2 * l_f)
      throw ConfigError("config: observable '" + name + "' needs K in [1, " +
                        std::to_string(2 * l_f) + "]");
    return {ObsRequest::Kind::alignment, k, 0};
  }
  if (name.size() == 3 && name[0] == 'T' && all_digits({name.data() + 1, 2})) {
    const int k = name[1] - '0';
    const int m = name[2] - '0';
    if (k > 2 * l_f || m > k)
      throw ConfigError("config: observable '" + name + "' out of range for l_f = " +
                        std::to_string(l_f));
    return {ObsRequest::Kind::multipole, k, m};
  }
  throw ConfigError("config: unknown observable '" + name + "'");
}

inline const char* const cartesian_column_names[8] = {"p_x",  "p_y",  "p_z",
                                                      "p_xy", "p_xz", "p_yz",
                                                      "p_xx_minus_yy", "p_zz"};

inline std::vector<std::string> expand_columns(const std::vector<ObsRequest>& requests,
                                               const std::vector<std::string>& names) {
  std::vector<std::string> cols;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    switch (requests[i].kind) {
      case ObsRequest::Kind::multipole:
        cols.push_back(names[i] + "_re");
        cols.push_back(names[i] + "_im");
        break;
      case ObsRequest::Kind::cartesian:
        for (const char* n : cartesian_column_names) cols.emplace_back(n);
        break;
      default:
        cols.push_back(names[i]);
    }
  }
  return cols;
}

inline void eval_observables(const std::vector<ObsRequest>& requests, const AmplitudeSet& amps,
                             std::vector<double>& out) {
  out.clear();
  const DensityMatrix rho = density_from_amplitudes(amps);
  for (const auto& req : requests) {
    switch (req.kind) {
      case ObsRequest::Kind::prob:
        out.push_back(amps.total_intensity());
        break;
      case ObsRequest::Kind::lz:
        out.push_back(mean_lz(rho));
        break;
      case ObsRequest::Kind::alignment:
        out.push_back(alignment(rho, req.K));
        break;
      case ObsRequest::Kind::multipole: {
        const std::complex<double> t = tensor_polarization(rho, req.K, req.M);
        out.push_back(t.real());
        out.push_back(t.imag());
        break;
      }
      case ObsRequest::Kind::cartesian: {
        const CartesianPolarization p = cartesian_polarizations(amps);
        out.push_back(p.p_x);
        out.push_back(p.p_y);
        out.push_back(p.p_z);
        out.push_back(p.p_xy);
        out.push_back(p.p_xz);
        out.push_back(p.p_yz);
        out.push_back(p.p_xx_minus_yy);
        out.push_back(p.p_zz);
        break;
      }
    }
  }
}

inline std::vector<std::string> observable_names(const ScanConfig& cfg) {
  if (!cfg.observables.empty()) return cfg.observables;
  std::vector<std::string> obs = {"prob", "lz"};
  for (int k = 1; k <= 2 * cfg.l_f; ++k) obs.push_back("B" + std::to_string(k));
  return obs;
}

// Shared cell loop: evaluate every (b, phi_b) cell, then apply the relative
// node threshold.
inline void fill_cells(ScanGrid& grid, const ScanConfig& cfg,
                       const std::vector<std::pair<double, double>>& positions) {
  const Beam beam = beam_from_config(cfg);
  const TransitionSpec transition = transition_from_config(cfg);
  const std::vector<std::string> names = observable_names(cfg);
  std::vector<ObsRequest> requests;
  requests.reserve(names.size());
  for (const auto& n : names) requests.push_back(parse_observable(n, cfg.l_f));
  grid.columns = expand_columns(requests, names);

  const std::size_t n = positions.size();
  grid.values.assign(n, {});
  grid.node_mask.assign(n, 0);
  std::vector<double> probs(n, 0.0);

  parallel_for(n, [&](std::size_t i) {
    const AtomPosition pos{positions[i].first, positions[i].second};
    const AmplitudeSet amps = amplitudes(beam, transition, pos);
    probs[i] = amps.total_intensity();
    if (probs[i] > 0.0) eval_observables(requests, amps, grid.values[i]);
  });

  double max_prob = 0.0;
  for (double p : probs) max_prob = std::max(max_prob, p);
  const double threshold = node_threshold_relative * max_prob;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < n; ++i) {
    if (probs[i] <= threshold || grid.values[i].empty()) {
      grid.node_mask[i] = 1;
      grid.values[i].assign(grid.columns.size(), nan);
    }
  }
}

inline std::string format_cell(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

}  // namespace detail

// <l_z>, B_K, ... at n_steps points b = 0 ... b_max along azimuth phi_b.
inline ScanGrid run_radial_scan(const ScanConfig& cfg) {
  validate_scan_config(cfg);
  if (cfg.kind != ScanKind::radial)
    throw ConfigError("run_radial_scan: config kind is not 'radial'");
  ScanGrid grid;
  grid.kind = ScanKind::radial;
  grid.coord_names = {"b"};
  grid.nx = cfg.n_steps;
  grid.ny = 1;
  std::vector<std::pair<double, double>> positions;
  positions.reserve(static_cast<std::size_t>(cfg.n_steps));
  for (int i = 0; i < cfg.n_steps; ++i) {
    const double b = cfg.b_max * i / (cfg.n_steps - 1);
    grid.coord_x.push_back(b);
    positions.emplace_back(b, cfg.phi_b);
  }
  detail::fill_cells(grid, cfg, positions);
  return grid;
}

// Observables over the square |b_x|, |b_y| <= half_width, grid_n x grid_n
// cells, row-major with b_y varying slowest.
inline ScanGrid run_grid_scan(const ScanConfig& cfg) {
  validate_scan_config(cfg);
  if (cfg.kind != ScanKind::grid)
    throw ConfigError("run_grid_scan: config kind is not 'grid'");
  ScanGrid grid;
  grid.kind = ScanKind::grid;
  grid.coord_names = {"b_x", "b_y"};
  grid.nx = cfg.grid_n;
  grid.ny = cfg.grid_n;
  std::vector<std::pair<double, double>> positions;
  positions.reserve(static_cast<std::size_t>(cfg.grid_n) * cfg.grid_n);
  for (int iy = 0; iy < cfg.grid_n; ++iy) {
    const double y = -cfg.half_width + 2.0 * cfg.half_width * iy / (cfg.grid_n - 1);
    for (int ix = 0; ix < cfg.grid_n; ++ix) {
      const double x = -cfg.half_width + 2.0 * cfg.half_width * ix / (cfg.grid_n - 1);
      grid.coord_x.push_back(x);
      grid.coord_y.push_back(y);
      positions.emplace_back(std::hypot(x, y), std::atan2(y, x));
    }
  }
  detail::fill_cells(grid, cfg, positions);
  return grid;
}

// Benchmark amplitude ratio with and without the longitudinal field at the
// configured theta_k and b, plus the paraxial limits for comparison.
struct RatioReport {
  double theta_k;
  double b;
  double with_longitudinal;
  double without_longitudinal;
  double paraxial_with;
  double paraxial_without;
};

inline RatioReport run_ratio(const ScanConfig& cfg) {
  return RatioReport{cfg.theta_k,
                     cfg.b,
                     sd_amplitude_ratio(cfg.theta_k, cfg.b, true),
                     sd_amplitude_ratio(cfg.theta_k, cfg.b, false),
                     sd_ratio_paraxial_full,
                     sd_ratio_paraxial_transverse};
}

// CSV: header row with axis and observable column names, one row per cell,
// numbers in full double precision scientific notation; masked cells carry
// the literal NODE marker in every observable column.
inline void emit_csv(const ScanGrid& grid, std::ostream& out) {
  for (std::size_t i = 0; i < grid.coord_names.size(); ++i) {
    if (i) out << ',';
    out << grid.coord_names[i];
  }
  for (const auto& col : grid.columns) out << ',' << col;
  out << '\n';
  for (std::size_t cell = 0; cell < grid.cells(); ++cell) {
    out << detail::format_cell(grid.coord_x[cell]);
    if (!grid.coord_y.empty()) out << ',' << detail::format_cell(grid.coord_y[cell]);
    if (grid.node_mask[cell]) {
      for (std::size_t c = 0; c < grid.columns.size(); ++c) out << ",NODE";
    } else {
      for (double v : grid.values[cell]) out << ',' << detail::format_cell(v);
    }
    out << '\n';
  }
}

inline void emit_csv(const ScanGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_csv: cannot open '" + path + "' for writing");
  emit_csv(grid, out);
  out.flush();
  if (!out) throw std::runtime_error("emit_csv: write failed for '" + path + "'");
}

// Self-contained gnuplot script next to the CSV: line plots for radial scans,
// heat maps plus a 3-D surface per observable for grid scans.
inline std::string plot_script_text(const ScanGrid& grid, const std::string& csv_filename) {
  std::string stem = csv_filename;
  if (const auto dot = stem.rfind(".csv"); dot != std::string::npos) stem.erase(dot);
  std::ostringstream s;
  s << "# gnuplot script generated alongside " << csv_filename << "\n"
    << "# run: gnuplot " << stem << ".gp\n"
    << "set datafile separator comma\n"
    << "set datafile missing 'NODE'\n"
    << "set terminal pngcairo size 1000,760\n";
  if (grid.kind == ScanKind::radial) {
    s << "set output '" << stem << ".png'\n"
      << "set xlabel 'b [wavelengths]'\n"
      << "set key outside\n"
      << "set grid\n"
      << "plot ";
    for (std::size_t c = 0; c < grid.columns.size(); ++c) {
      if (c) s << ", \\\n     ";
      s << "'" << csv_filename << "' every ::1 using 1:" << c + 2 << " with lines title '"
        << grid.columns[c] << "'";
    }
    s << "\n";
  } else {
    s << "set xlabel 'b_x [wavelengths]'\n"
      << "set ylabel 'b_y [wavelengths]'\n"
      << "set size ratio -1\n";
    for (std::size_t c = 0; c < grid.columns.size(); ++c) {
      const std::string col = grid.columns[c];
      s << "set output '" << stem << "_" << col << ".png'\n"
        << "plot '" << csv_filename << "' every ::1 using 1:2:" << c + 3
        << " with image notitle\n";
      s << "set output '" << stem << "_" << col << "_surface.png'\n"
        << "set dgrid3d " << grid.ny << "," << grid.nx << "\n"
        << "set hidden3d\n"
        << "splot '" << csv_filename << "' every ::1 using 1:2:" << c + 3
        << " with pm3d notitle\n"
        << "unset dgrid3d\n";
    }
  }
  return s.str();
}

inline void emit_plot_script(const ScanGrid& grid, const std::string& csv_filename,
                             const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_plot_script: cannot open '" + path + "'");
  out << plot_script_text(grid, csv_filename);
  out.flush();
  if (!out) throw std::runtime_error("emit_plot_script: write failed for '" + path + "'");
}

}  // namespace twistpol
