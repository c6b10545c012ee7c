#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "qlheat/analysis.hpp"
#include "qlheat/config.hpp"
#include "qlheat/csv.hpp"
#include "qlheat/errors.hpp"
#include "qlheat/flux.hpp"
#include "qlheat/pde.hpp"
#include "qlheat/similarity.hpp"

namespace qlheat {

namespace detail {

inline std::string out_path(const ScenarioConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_prefix);
    return (std::filesystem::path(cfg.out_prefix) / name).string();
}

/// snapshot_<t>.csv files plus front_trajectory.csv with a finite-difference
/// velocity estimate along the discrete front.
inline void emit_report(const ScenarioConfig& cfg, const SolveReport& report,
                        const std::string& value_column, std::vector<std::string>& files) {
    const std::string comment = cfg.comment_line();
    for (const Field& snap : report.snapshots) {
        const std::string path = out_path(cfg, "snapshot_" + format_double(snap.t) + ".csv");
        CsvWriter csv(path, comment, "x," + value_column);
        for (std::size_t i = 0; i < snap.grid.n; ++i) csv.row({snap.grid.x(i), snap.values[i]});
        files.push_back(path);
    }
    const auto& traj = report.front_trajectory;
    const std::string path = out_path(cfg, "front_trajectory.csv");
    CsvWriter csv(path, comment, "t,x_front,V_estimate");
    for (std::size_t k = 0; k < traj.size(); ++k) {
        double v = std::numeric_limits<double>::quiet_NaN();
        if (traj.size() >= 2) {
            const std::size_t lo = (k == 0) ? 0 : k - 1;
            const std::size_t hi = (k + 1 == traj.size()) ? k : k + 1;
            v = (traj[hi].second - traj[lo].second) / (traj[hi].first - traj[lo].first);
        }
        csv.row({traj[k].first, traj[k].second, v});
    }
    files.push_back(path);
}

inline Field initial_field(const ScenarioConfig& cfg) {
    return Field(make_grid(cfg.x_max, cfg.dx), 0.0);
}

inline BoundarySpec sqrt_boundary(double B) {
    return BoundarySpec{[B](double t) { return B * std::sqrt(t); }, 0.0};
}

} // namespace detail

/// Execute a validated scenario; emits the mode's CSV artifacts under
/// cfg.out_prefix and returns their paths. Progress notes (solver warnings,
/// snapshot substitutions) go to `log`.
inline std::vector<std::string> run(const ScenarioConfig& cfg, std::ostream& log) {
    std::vector<std::string> files;
    const PhysParams p = cfg.params();
    const std::string comment = cfg.comment_line();
    const std::vector<double> times = cfg.resolved_out_times();

    switch (cfg.mode.value()) {
        case Mode::Similarity: {
            SimilarityOptions opts;
            opts.atol = cfg.atol;
            opts.rtol = cfg.rtol;
            const SimilarityProfile prof =
                integrate_profile(cfg.B.value(), cfg.C.value(), p, cfg.z_max, opts);
            const FrontInfo front = locate_front(prof);

            const std::string ppath = detail::out_path(cfg, "profile.csv");
            CsvWriter pcsv(ppath, comment, "z,f,fp");
            for (std::size_t i = 0; i < prof.z.size(); ++i)
                pcsv.row({prof.z[i], prof.f[i], prof.fp[i]});
            files.push_back(ppath);

            const std::string fpath = detail::out_path(cfg, "front.csv");
            CsvWriter fcsv(fpath, comment, "z0,t,x0,V0");
            for (double t : times)
                fcsv.row({front.z0, t, front_position(front, t), front_velocity(front, t)});
            files.push_back(fpath);
            break;
        }

        case Mode::Pde:
        case Mode::Linear: {
            const Field init = detail::initial_field(cfg);
            const BoundarySpec bc = detail::sqrt_boundary(cfg.B.value());
            const SolveReport report =
                (cfg.mode == Mode::Pde)
                    ? solve_quasilinear(init, bc, p, cfg.t_end, times, cfg.cfl_safety)
                    : solve_linear(init, bc, p, cfg.t_end, times, cfg.cfl_safety);
            for (const auto& w : report.warnings) log << "warning: " << w << "\n";
            detail::emit_report(cfg, report, "T", files);
            break;
        }

        case Mode::GradientForm: {
            const Field init = detail::initial_field(cfg);
            const BoundarySpec bc = detail::sqrt_boundary(cfg.B.value());
            const SolveReport develop =
                solve_quasilinear(init, bc, p, cfg.t_start, {cfg.t_start}, cfg.cfl_safety);
            const Field h0 = gradient_of(develop.final);
            const SolveReport report =
                solve_gradient_form(h0, p, cfg.t_end, times, cfg.gradient_bc, cfg.cfl_safety);
            for (const auto& w : report.warnings) log << "warning: " << w << "\n";
            detail::emit_report(cfg, report, "H", files);
            break;
        }

        case Mode::Compare: {
            const Field init = detail::initial_field(cfg);
            const BoundarySpec bc = detail::sqrt_boundary(cfg.B.value());
            const SolveReport report =
                solve_quasilinear(init, bc, p, cfg.t_end, times, cfg.cfl_safety);
            SimilarityOptions opts;
            opts.atol = cfg.atol;
            opts.rtol = cfg.rtol;
            const SimilarityProfile prof =
                integrate_profile(cfg.B.value(), cfg.C.value(), p, cfg.z_max, opts);
            const std::string path = detail::out_path(cfg, "crossval.csv");
            CsvWriter csv(path, comment, "t,error");
            for (double t : times) csv.row({t, cross_validate(report, prof, t)});
            files.push_back(path);
            break;
        }

        case Mode::Symmetry: {
            std::vector<double> snap_times = times;
            if (snap_times.size() < 50) {
                // residual stencils need a dense time lattice
                snap_times.clear();
                const std::size_t m = 57;
                const double t_a = 0.3 * cfg.t_end;
                for (std::size_t k = 0; k < m; ++k)
                    snap_times.push_back(t_a + (cfg.t_end - t_a) * static_cast<double>(k) /
                                                   static_cast<double>(m - 1));
                log << "note: symmetry mode uses " << m << " snapshots on ["
                    << format_double(t_a) << ", " << format_double(cfg.t_end) << "]\n";
            }
            const Field init = detail::initial_field(cfg);
            const BoundarySpec bc = detail::sqrt_boundary(cfg.B.value());
            const SolveReport report =
                solve_quasilinear(init, bc, p, cfg.t_end, snap_times, cfg.cfl_safety);
            for (const auto& w : report.warnings) log << "warning: " << w << "\n";

            const double r_id = symmetry_residual(GroupElement{}, report, p);
            const std::string path = detail::out_path(cfg, "symmetry.csv");
            CsvWriter csv(path, comment, "element,eps,tau,xi,theta,residual,ratio");
            csv.row("identity", {0.0, 0.0, 0.0, 0.0, r_id, 1.0});
            auto emit = [&](const char* label, const GroupElement& g) {
                const double r = symmetry_residual(g, report, p);
                csv.row(label, {g.eps, g.tau, g.xi, g.theta, r, r / r_id});
            };
            if (cfg.eps != 0.0) emit("dilatation", GroupElement{0.0, 0.0, 0.0, cfg.eps});
            if (cfg.tau != 0.0 || cfg.xi != 0.0)
                emit("translation", GroupElement{cfg.tau, cfg.xi, 0.0, 0.0});
            if (cfg.theta != 0.0) emit("shift", GroupElement{0.0, 0.0, cfg.theta, 0.0});
            files.push_back(path);
            break;
        }

        case Mode::FluxTable: {
            const std::string path = detail::out_path(cfg, "flux_table.csv");
            CsvWriter csv(path, comment, "g,J_linear,J_modified,gap,D_eff");
            const std::size_t m = cfg.g_count;
            for (std::size_t k = 0; k < m; ++k) {
                const double g =
                    (m == 1) ? cfg.g_min
                             : cfg.g_min + (cfg.g_max - cfg.g_min) * static_cast<double>(k) /
                                               static_cast<double>(m - 1);
                csv.row({g, linear_flux(g, p), modified_flux(g, p), flux_gap(g, p),
                         effective_diffusivity(g, p)});
            }
            files.push_back(path);
            break;
        }
    }
    return files;
}

} // namespace qlheat
