// twistpol command-line driver.
//
// Subcommands:
//   ratio    - S->D / S->P amplitude ratio with and without the longitudinal field
//   scan-lz  - radial scan of <l_z> (and any requested B_K) vs impact parameter
//   grid-bk  - Cartesian map of alignment parameters B_K over the focal plane
//   point    - full polarization report at a single atom position
//   check    - fast internal consistency suite (exit code = number of failures)
//
// Distances are in units of the photon wavelength; the vector potential is
// normalized to unit amplitude and the radial matrix element to one.

#include <CLI11.hpp>

#include <twistpol/twistpol.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace {

using namespace twistpol;

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string fmt(std::complex<double> z) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%+.6e %+.6e i", z.real(), z.imag());
    return buf;
}

// Path for the companion gnuplot script: CSV path with its extension replaced.
std::string plot_path_for(const std::string& csv_path) {
    const auto slash = csv_path.find_last_of('/');
    const auto dot = csv_path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return csv_path + ".gp";
    }
    return csv_path.substr(0, dot) + ".gp";
}

// Beam used by the mapping demos: two vortex modes of opposite helicity whose
// interference pattern repeats five times around the beam axis.
ScanConfig five_lobe_default() {
    ScanConfig cfg;
    cfg.theta_k = 0.1;
    cfg.modes = {
        TwistedMode{0.1, -2, +1, {1.0, 0.0}},
        TwistedMode{0.1, +3, -1, {1.0, 0.0}},
    };
    cfg.l_f = 1;
    return cfg;
}

struct CommonFlags {
    std::string config_path;
    std::string out_path;
    double theta_k = -1.0;     // <0 means "not given"
    bool no_longitudinal = false;
    int grid_n = 0;            // 0 means "not given"
    double half_width = 0.0;   // 0 means "not given"
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool with_grid_flags) {
    cmd->add_option("--config", flags.config_path, "Scan configuration file (key = value lines)");
    cmd->add_option("--out", flags.out_path, "Output CSV path (a gnuplot script is written alongside)");
    cmd->add_option("--theta-k", flags.theta_k, "Override the beam opening angle (radians)");
    cmd->add_flag("--no-longitudinal", flags.no_longitudinal,
                  "Drop the longitudinal field component (transverse fields only)");
    if (with_grid_flags) {
        cmd->add_option("--grid-n", flags.grid_n, "Override the number of grid points per axis");
        cmd->add_option("--half-width", flags.half_width, "Override the grid half-width (wavelengths)");
    }
}

// Merge CLI overrides into a config loaded from file (or a subcommand default).
void apply_overrides(ScanConfig& cfg, const CommonFlags& flags) {
    if (flags.theta_k > 0.0) {
        cfg.theta_k = flags.theta_k;
        for (auto& mode : cfg.modes) mode.theta_k = flags.theta_k;
    }
    if (flags.no_longitudinal) cfg.mask = FieldMask::transverse();
    if (flags.grid_n > 0) cfg.grid_n = flags.grid_n;
    if (flags.half_width > 0.0) cfg.half_width = flags.half_width;
}

ScanConfig load_or_default(const CommonFlags& flags, const ScanConfig& fallback) {
    ScanConfig cfg = flags.config_path.empty() ? fallback : load_scan_config(flags.config_path);
    apply_overrides(cfg, flags);
    validate_scan_config(cfg);
    return cfg;
}

void write_scan_outputs(const ScanGrid& grid, const std::string& out_path) {
    emit_csv(grid, out_path);
    const std::string gp = plot_path_for(out_path);
    emit_plot_script(grid, out_path, gp);
    std::cout << "wrote " << out_path << "\n";
    std::cout << "wrote " << gp << " (gnuplot script)\n";
}

int cmd_ratio(const CommonFlags& flags, double b) {
    ScanConfig base;
    base.theta_k = 0.1;
    base.modes = {TwistedMode{0.1, 1, +1, {1.0, 0.0}}};
    ScanConfig cfg = flags.config_path.empty() ? base : load_scan_config(flags.config_path);
    if (flags.theta_k > 0.0) cfg.theta_k = flags.theta_k;
    cfg.b = b >= 0.0 ? b : cfg.b;

    const RatioReport rep = run_ratio(cfg);
    std::cout << "S->D / S->P amplitude ratio at theta_k = " << fmt(rep.theta_k)
              << ", b = " << fmt(rep.b) << "\n";
    std::cout << "  with longitudinal field    : " << fmt(rep.with_longitudinal) << "\n";
    std::cout << "  transverse fields only     : " << fmt(rep.without_longitudinal) << "\n";
    std::cout << "  enhancement factor         : "
              << fmt(rep.with_longitudinal / rep.without_longitudinal) << "\n";
    std::cout << "  paraxial limit (with A_z)  : " << fmt(rep.paraxial_with) << "\n";
    std::cout << "  paraxial limit (without)   : " << fmt(rep.paraxial_without) << "\n";

    if (!flags.out_path.empty()) {
        std::ofstream out(flags.out_path);
        if (!out) {
            std::cerr << "error: cannot open " << flags.out_path << "\n";
            return 1;
        }
        out << "theta_k,b,ratio_with_longitudinal,ratio_transverse_only,"
               "paraxial_with,paraxial_without\n";
        char buf[256];
        std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e,%.16e,%.16e,%.16e\n", rep.theta_k,
                      rep.b, rep.with_longitudinal, rep.without_longitudinal, rep.paraxial_with,
                      rep.paraxial_without);
        out << buf;
        std::cout << "wrote " << flags.out_path << "\n";
    }
    return 0;
}

int cmd_scan_lz(const CommonFlags& flags) {
    ScanConfig fallback;
    fallback.theta_k = 0.1;
    fallback.modes = {TwistedMode{0.1, 1, +1, {1.0, 0.0}}};
    fallback.l_f = 1;
    fallback.kind = ScanKind::radial;

    ScanConfig cfg = load_or_default(flags, fallback);
    cfg.kind = ScanKind::radial;
    if (cfg.observables.empty()) cfg.observables = {"lz"};

    const ScanGrid grid = run_radial_scan(cfg);
    const std::string out = flags.out_path.empty() ? "scan_lz.csv" : flags.out_path;
    write_scan_outputs(grid, out);
    return 0;
}

int cmd_grid_bk(const CommonFlags& flags) {
    ScanConfig fallback = five_lobe_default();
    fallback.kind = ScanKind::grid;

    ScanConfig cfg = load_or_default(flags, fallback);
    cfg.kind = ScanKind::grid;
    if (cfg.observables.empty()) {
        cfg.observables = {"prob"};
        for (int k = 1; k <= 2 * cfg.l_f; ++k) cfg.observables.push_back("B" + std::to_string(k));
    }

    const ScanGrid grid = run_grid_scan(cfg);
    const std::string out = flags.out_path.empty() ? "grid_bk.csv" : flags.out_path;
    write_scan_outputs(grid, out);
    return 0;
}

void print_density_matrix(const DensityMatrix& rho, const std::string& label) {
    const int l = rho.ell();
    std::cout << label << " (rows/columns ordered m = " << l << " ... " << -l << "):\n";
    for (int mr = l; mr >= -l; --mr) {
        std::cout << "   ";
        for (int mc = l; mc >= -l; --mc) {
            std::cout << " [" << fmt(rho(mr, mc)) << "]";
        }
        std::cout << "\n";
    }
}

int cmd_point(const CommonFlags& flags, double b, double phi_b) {
    ScanConfig fallback = five_lobe_default();
    fallback.kind = ScanKind::point;
    fallback.b = 0.8;

    ScanConfig cfg = load_or_default(flags, fallback);
    if (b >= 0.0) cfg.b = b;
    cfg.phi_b = phi_b;

    const Beam beam = beam_from_config(cfg);
    const TransitionSpec transition = transition_from_config(cfg);
    const AtomPosition pos{cfg.b, cfg.phi_b};

    const AmplitudeSet amps = amplitudes(beam, transition, pos);
    std::optional<PolarizationReport> rep_opt;
    try {
        rep_opt = polarization_report(amps);
    } catch (const NodePointError&) {
        std::cout << "excitation probability vanishes at b = " << fmt(cfg.b)
                  << ", phi_b = " << fmt(cfg.phi_b) << " (node point); no polarization defined\n";
        return 0;
    }
    const PolarizationReport& rep = *rep_opt;

    std::cout << "atom position      : b = " << fmt(cfg.b) << ", phi_b = " << fmt(cfg.phi_b)
              << "  (wavelength units)\n";
    std::cout << "final orbital l_f  : " << rep.l_f << "\n";
    std::cout << "relative probability: " << fmt(rep.probability) << "\n";
    std::cout << "<l_z>              : " << fmt(rep.mean_lz) << "\n";
    for (std::size_t k = 0; k < rep.alignments.size(); ++k) {
        std::cout << "B_" << (k + 1) << "                : " << fmt(rep.alignments[k]) << "\n";
    }
    std::cout << "state multipoles T_KM (M >= 0):\n";
    for (std::size_t K = 0; K < rep.multipoles.size(); ++K) {
        for (std::size_t M = 0; M < rep.multipoles[K].size(); ++M) {
            std::cout << "   T_" << K << M << " = " << fmt(rep.multipoles[K][M]) << "\n";
        }
    }
    print_density_matrix(rep.rho, "atomic density matrix");

    if (rep.cartesian.has_value()) {
        const CartesianPolarization& p = *rep.cartesian;
        std::cout << "Cartesian polarization (vector / tensor):\n";
        std::cout << "   p_x = " << fmt(p.p_x) << "   p_y = " << fmt(p.p_y)
                  << "   p_z = " << fmt(p.p_z) << "\n";
        std::cout << "   p_xy = " << fmt(p.p_xy) << "   p_xz = " << fmt(p.p_xz)
                  << "   p_yz = " << fmt(p.p_yz) << "\n";
        std::cout << "   p_xx - p_yy = " << fmt(p.p_xx_minus_yy) << "   p_zz = " << fmt(p.p_zz)
                  << "\n";
    }

    // Photon spin density matrix and the photon -> atom transfer relations
    // (meaningful for dipole transitions, where both sides are spin 1).
    try {
        const DensityMatrix photon_rho = photon_density_matrix(beam, cfg.b, cfg.phi_b);
        print_density_matrix(photon_rho, "photon spin density matrix");
    } catch (const NodePointError&) {
        std::cout << "photon field vanishes at this point; no photon density matrix\n";
    }

    if (transition.l_f == 1 && transition.mask == FieldMask::full()) {
        try {
            const RelationReport rel = photon_atom_relations(beam, pos);
            std::cout << "photon -> atom polarization transfer (expected = sign * photon):\n";
            std::cout << "   component      photon        atom          transfer  |mismatch|\n";
            for (const auto& row : rel.rows) {
                char buf[160];
                std::snprintf(buf, sizeof buf, "   %-12s %+.6e %+.6e   %+d       %.2e\n",
                              row.name, row.photon, row.atom, row.sign, row.discrepancy());
                std::cout << buf;
            }
            std::cout << "   max |mismatch| = " << fmt(rel.max_discrepancy()) << "\n";
        } catch (const NodePointError&) {
            std::cout << "transfer relations skipped (field or excitation node)\n";
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// `check`: a fast self-test of the core invariants, for installed binaries.
// ---------------------------------------------------------------------------

int failures = 0;

void check(bool ok, const std::string& what) {
    std::cout << (ok ? "  [ok]   " : "  [FAIL] ") << what << "\n";
    if (!ok) ++failures;
}

// Independent field evaluation: expand the Bessel mode over plane waves and
// integrate the azimuthal angle of the wave vector numerically (trapezoid on a
// periodic integrand, so the error is far below the tolerance used here).
std::complex<double> field_quadrature(const TwistedMode& mode, int lambda, double rho,
                                      double phi) {
    constexpr int n = 4096;
    const double kappa = mode.kappa();
    std::complex<double> acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double phik = two_pi * i / n;
        acc += std::exp(std::complex<double>(
            0.0, (mode.m_gamma - lambda) * phik + kappa * rho * std::cos(phik - phi)));
    }
    acc /= static_cast<double>(n);
    std::complex<double> iphase;  // i^{-m_gamma}
    switch (((-mode.m_gamma) % 4 + 4) % 4) {
        case 0: iphase = {1.0, 0.0}; break;
        case 1: iphase = {0.0, 1.0}; break;
        case 2: iphase = {-1.0, 0.0}; break;
        default: iphase = {0.0, -1.0}; break;
    }
    return mode.weight * iphase *
           wigner_small_d(2, 2 * lambda, 2 * mode.helicity, mode.theta_k) * acc;
}

int cmd_check() {
    std::mt19937 rng(20260813u);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    // Paraxial amplitude ratio.
    {
        const double r_full = sd_amplitude_ratio(1e-3, 0.0, true);
        const double r_perp = sd_amplitude_ratio(1e-3, 0.0, false);
        check(std::abs(r_full - sd_ratio_paraxial_full) < 1e-3 &&
                  std::abs(r_perp - sd_ratio_paraxial_transverse) < 1e-3,
              "paraxial S->D / S->P ratio limits");
        check(std::abs(r_full / r_perp - 3.0) < 1e-12, "longitudinal enhancement factor 3");
    }

    // Angular-momentum contraction collapsing the helicity sum.
    {
        double worst = 0.0;
        for (int l_f = 1; l_f <= 3; ++l_f) {
            for (int m_f = -l_f; m_f <= l_f; ++m_f) {
                for (int lam_cap : {+1, -1}) {
                    const double theta = 0.3 + 2.0 * uni(rng);
                    std::complex<double> lhs = 0.0;
                    for (int lambda : {-1, 0, +1}) {
                        if (std::abs(m_f - lambda) > l_f - 1) continue;
                        lhs += wigner_small_d(2 * (l_f - 1), 2 * (m_f - lambda), 0, theta) *
                               wigner_small_d(2, 2 * lambda, 2 * lam_cap, theta) *
                               clebsch_gordan(2 * (l_f - 1), 2 * (m_f - lambda), 2, 2 * lambda,
                                              2 * l_f, 2 * m_f);
                    }
                    const double rhs =
                        clebsch_gordan(2 * (l_f - 1), 0, 2, 2 * lam_cap, 2 * l_f, 2 * lam_cap) *
                        wigner_small_d(2 * l_f, 2 * m_f, 2 * lam_cap, theta);
                    worst = std::max(worst, std::abs(lhs - rhs));
                }
            }
        }
        check(worst < 1e-12, "helicity sum collapses to a single rotation matrix");
    }

    // Photon -> atom polarization transfer at random points.
    {
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            const double theta = 0.05 + 0.4 * uni(rng);
            Beam beam({TwistedMode{theta, 1 + (trial % 3), (trial % 2) ? +1 : -1, {1.0, 0.0}}});
            const AtomPosition pos{0.3 + 2.0 * uni(rng), two_pi * uni(rng)};
            try {
                worst = std::max(worst, photon_atom_relations(beam, pos).max_discrepancy());
            } catch (const NodePointError&) {
                continue;
            }
        }
        check(worst < 1e-12, "photon -> atom polarization transfer relations");
    }

    // Alignment closed forms on a random diagonal density matrix.
    {
        DensityMatrix rho(1);
        double w[3];
        double norm = 0.0;
        for (auto& x : w) norm += (x = uni(rng));
        for (int m = -1; m <= 1; ++m) rho(m, m) = w[1 - m] / norm;
        const double b1 = alignment(rho, 1);
        const double b2 = alignment(rho, 2);
        const double b1_ref = std::sqrt(1.5) * (rho.w(1) - rho.w(-1));
        const double b2_ref = std::sqrt(0.5) * (rho.w(1) - 2.0 * rho.w(0) + rho.w(-1));
        check(std::abs(b1 - b1_ref) < 1e-12 && std::abs(b2 - b2_ref) < 1e-12,
              "alignment parameters match population closed forms");
    }

    // Field components against the plane-wave-expansion quadrature.
    {
        double worst = 0.0;
        for (int trial = 0; trial < 3; ++trial) {
            TwistedMode mode{0.1 + 0.5 * uni(rng), trial, +1, {1.0, 0.0}};
            const double rho_r = 0.5 + 2.0 * uni(rng);
            const double phi = two_pi * uni(rng);
            const FieldComponents f = field_components(mode, rho_r, phi);
            double scale = 0.0;
            double err = 0.0;
            for (int lam : {-1, 0, +1}) {
                const std::complex<double> ref = field_quadrature(mode, lam, rho_r, phi);
                scale = std::max(scale, std::abs(ref));
                err = std::max(err, std::abs(f.component(lam) - ref));
            }
            worst = std::max(worst, err / std::max(scale, 1e-12));
        }
        check(worst < 1e-8, "field components match plane-wave quadrature");
    }

    std::cout << (failures == 0 ? "all checks passed\n" : "SELF-TEST FAILURES PRESENT\n");
    return failures;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Photoexcitation of a single atom by twisted (vortex) light:\n"
                 "transition amplitudes, selection rules, and polarization transfer."};
    app.require_subcommand(1);

    CommonFlags ratio_flags, scan_flags, grid_flags, point_flags;
    double ratio_b = -1.0, point_b = -1.0, point_phi = 0.0;

    CLI::App* ratio_cmd =
        app.add_subcommand("ratio", "S->D / S->P amplitude ratio with and without A_z");
    add_common_flags(ratio_cmd, ratio_flags, false);
    ratio_cmd->add_option("--b", ratio_b, "Impact parameter (wavelengths)");

    CLI::App* scan_cmd = app.add_subcommand("scan-lz", "Radial scan of <l_z> vs impact parameter");
    add_common_flags(scan_cmd, scan_flags, false);

    CLI::App* grid_cmd =
        app.add_subcommand("grid-bk", "Map alignment parameters B_K over the focal plane");
    add_common_flags(grid_cmd, grid_flags, true);

    CLI::App* point_cmd =
        app.add_subcommand("point", "Full polarization report at one atom position");
    add_common_flags(point_cmd, point_flags, false);
    point_cmd->add_option("--b", point_b, "Impact parameter (wavelengths)");
    point_cmd->add_option("--phi-b", point_phi, "Azimuth of the atom position (radians)");

    CLI::App* check_cmd = app.add_subcommand("check", "Run the fast internal consistency suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ratio_cmd->parsed()) return cmd_ratio(ratio_flags, ratio_b);
        if (scan_cmd->parsed()) return cmd_scan_lz(scan_flags);
        if (grid_cmd->parsed()) return cmd_grid_bk(grid_flags);
        if (point_cmd->parsed()) return cmd_point(point_flags, point_b, point_phi);
        if (check_cmd->parsed()) return cmd_check();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NodePointError& e) {
        std::cerr << "node point: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
