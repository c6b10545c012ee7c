#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qlheat/errors.hpp"
#include "qlheat/flux.hpp"
#include "qlheat/grid.hpp"
#include "qlheat/params.hpp"

namespace qlheat {

/// Regime of the quasilinear law at a given gradient: essentially linear
/// diffusion when g^2 dominates a^2, frozen when a^2 dominates.
enum class Regime { Diffusive, Frozen, Transitional };

inline Regime classify_regime(double g, const PhysParams& p, double ratio) {
    if (!(ratio > 1.0))
        throw ValidationError("classify_regime: ratio must exceed 1");
    const double g2 = g * g, a2 = p.a * p.a;
    if (g2 >= ratio * a2) return Regime::Diffusive;
    if (g2 <= a2 / ratio) return Regime::Frozen;
    return Regime::Transitional;
}

/// Discrete spatial derivative: central differences inside, second-order
/// one-sided stencils at the edges (exact on quadratics everywhere).
inline Field gradient_of(const Field& field) {
    const Grid1D& g = field.grid;
    Field out(g, field.t);
    const double inv2dx = 1.0 / (2.0 * g.dx);
    for (std::size_t i = 1; i + 1 < g.n; ++i)
        out.values[i] = (field.values[i + 1] - field.values[i - 1]) * inv2dx;
    out.values[0] = (-3.0 * field.values[0] + 4.0 * field.values[1] - field.values[2]) * inv2dx;
    out.values[g.n - 1] =
        (3.0 * field.values[g.n - 1] - 4.0 * field.values[g.n - 2] + field.values[g.n - 3]) * inv2dx;
    return out;
}

/// Largest stable explicit step. The gradient-dependent diffusivity never
/// exceeds D_T, so the bound is uniform in the solution.
inline double max_stable_dt(const Grid1D& grid, const PhysParams& p, double cfl_safety = 0.5) {
    return cfl_safety * grid.dx * grid.dx / (2.0 * p.D_T);
}

namespace detail {

inline void quasilinear_interior(const std::vector<double>& src, std::vector<double>& dst,
                                 double dx, double dt, const PhysParams& p) {
    const std::size_t n = src.size();
    const double inv2dx = 1.0 / (2.0 * dx);
    const double invdx2 = 1.0 / (dx * dx);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double g = (src[i + 1] - src[i - 1]) * inv2dx;
        const double lap = (src[i + 1] - 2.0 * src[i] + src[i - 1]) * invdx2;
        dst[i] = src[i] + dt * effective_diffusivity(g, p) * lap;
    }
}

inline void linear_interior(const std::vector<double>& src, std::vector<double>& dst,
                            double dx, double dt, const PhysParams& p) {
    const std::size_t n = src.size();
    const double nu = dt * p.D_T / (dx * dx);
    for (std::size_t i = 1; i + 1 < n; ++i)
        dst[i] = src[i] + nu * (src[i + 1] - 2.0 * src[i] + src[i - 1]);
}

inline void check_cfl(const Grid1D& grid, const PhysParams& p, double dt, double cfl_safety) {
    if (!(dt > 0.0) || dt > max_stable_dt(grid, p, cfl_safety) * (1.0 + 4e-16))
        throw CflViolation("time step exceeds cfl_safety*dx^2/(2*D_T)");
}

} // namespace detail

/// One explicit step of the quasilinear law: forward Euler in time, central
/// second-order in space, diffusivity evaluated from the lagged gradient.
/// Boundary nodes take their Dirichlet values at the end-of-step time.
inline Field step_quasilinear(const Field& field, double dt, const BoundarySpec& bc,
                              const PhysParams& p, double cfl_safety = 0.5) {
    detail::check_cfl(field.grid, p, dt, cfl_safety);
    Field out(field.grid, field.t + dt);
    detail::quasilinear_interior(field.values, out.values, field.grid.dx, dt, p);
    out.values[0] = bc.left(out.t);
    out.values[field.grid.n - 1] = bc.right;
    return out;
}

/// Same scheme with the diffusivity pinned at D_T (the linear baseline).
inline Field step_linear(const Field& field, double dt, const BoundarySpec& bc,
                         const PhysParams& p, double cfl_safety = 0.5) {
    detail::check_cfl(field.grid, p, dt, cfl_safety);
    Field out(field.grid, field.t + dt);
    detail::linear_interior(field.values, out.values, field.grid.dx, dt, p);
    out.values[0] = bc.left(out.t);
    out.values[field.grid.n - 1] = bc.right;
    return out;
}

/// Boundary handling for the conservation-form solver.
enum class GradientBc { ZeroFlux, Dirichlet };

namespace detail {

inline void gradient_form_update(const std::vector<double>& h, std::vector<double>& out,
                                 double dx, double dt, const PhysParams& p, GradientBc bc) {
    const std::size_t n = h.size();
    const double invdx = 1.0 / dx;
    const double dtdx = dt / dx;
    // face flux between nodes i and i+1, diffusivity from the face average
    auto face_flux = [&](std::size_t i) {
        const double hf = 0.5 * (h[i] + h[i + 1]);
        return effective_diffusivity(hf, p) * (h[i + 1] - h[i]) * invdx;
    };
    double f_prev = face_flux(0);
    out[0] = (bc == GradientBc::ZeroFlux) ? h[0] + dtdx * f_prev : h[0];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double f_next = face_flux(i);
        out[i] = h[i] + dtdx * (f_next - f_prev);
        f_prev = f_next;
    }
    out[n - 1] = (bc == GradientBc::ZeroFlux) ? h[n - 1] - dtdx * f_prev : h[n - 1];
}

} // namespace detail

/// One conservative step of the gradient-form equation for H = dT/dx:
///   dH/dt = d/dx ( D_eff(H) dH/dx ),
/// with face fluxes built from arithmetic face averages of H. Zero-flux
/// boundaries telescope, so the discrete integral of H is conserved;
/// Dirichlet pins the end values.
inline Field step_gradient_form(const Field& hfield, double dt, const PhysParams& p,
                                GradientBc bc = GradientBc::ZeroFlux, double cfl_safety = 0.5) {
    detail::check_cfl(hfield.grid, p, dt, cfl_safety);
    Field out(hfield.grid, hfield.t + dt);
    detail::gradient_form_update(hfield.values, out.values, hfield.grid.dx, dt, p, bc);
    return out;
}

/// Space-time solve artifacts: the final field, requested snapshots, the
/// discrete front trajectory, and step accounting.
struct SolveReport {
    Field final;
    std::vector<Field> snapshots;
    std::vector<std::pair<double, double>> front_trajectory;  ///< (t, x_front)
    std::size_t steps_taken = 0;
    double dt_used = 0.0;
    std::vector<std::string> warnings;
};

namespace detail {

inline void require_finite(const std::vector<double>& v, double t) {
    for (double x : v)
        if (!std::isfinite(x))
            throw NonFiniteState("solver state became non-finite at t = " + std::to_string(t));
}

/// Largest node coordinate whose value exceeds the threshold (grid origin
/// when none does).
inline double discrete_front(const Grid1D& g, const std::vector<double>& v, double threshold,
                             bool absolute) {
    for (std::size_t i = g.n; i-- > 0;) {
        const double val = absolute ? std::abs(v[i]) : v[i];
        if (val > threshold) return g.x(i);
    }
    return g.x0;
}

/// Shared march for the temperature solvers. Snapshots land exactly on the
/// requested times; dt is chosen per segment as the largest stable step that
/// divides it evenly.
template <typename InteriorFn>
SolveReport solve_driver(const Field& init, const BoundarySpec& bc, const PhysParams& p,
                         double t_end, std::vector<double> out_times, double cfl_safety,
                         InteriorFn&& interior) {
    if (!(t_end > init.t))
        throw ValidationError("solve: t_end must exceed the initial time");
    std::sort(out_times.begin(), out_times.end());
    out_times.erase(std::unique(out_times.begin(), out_times.end()), out_times.end());
    if (!out_times.empty() && (out_times.front() <= init.t || out_times.back() > t_end))
        throw ValidationError("solve: output times must lie in (t_init, t_end]");

    std::vector<double> targets = out_times;
    if (targets.empty() || targets.back() < t_end) targets.push_back(t_end);

    const Grid1D& grid = init.grid;
    const double dt_max = max_stable_dt(grid, p, cfl_safety);
    const double x_warn = grid.x0 + 0.9 * (grid.x_back() - grid.x0);

    SolveReport report{Field(grid, init.t), {}, {}, 0, 0.0, {}};
    std::vector<double> cur = init.values, nxt = init.values;
    double t = init.t;
    double bscale = std::max(std::abs(bc.left(init.t)), std::abs(bc.right));
    bool warned = false;
    std::size_t next_out = 0;

    for (double target : targets) {
        const double span = target - t;
        auto steps = static_cast<std::size_t>(std::ceil(span / dt_max));
        if (steps == 0) steps = 1;
        double dt = span / static_cast<double>(steps);
        if (dt > dt_max) {  // guard the ceil against roundoff
            ++steps;
            dt = span / static_cast<double>(steps);
        }
        for (std::size_t s = 0; s < steps; ++s) {
            const double t_new = (s + 1 == steps) ? target : t + dt;
            interior(cur, nxt, grid.dx, dt, p);
            const double left = bc.left(t_new);
            nxt[0] = left;
            nxt[grid.n - 1] = bc.right;
            bscale = std::max({bscale, std::abs(left)});
            cur.swap(nxt);
            t = t_new;
        }
        report.steps_taken += steps;
        report.dt_used = dt;

        detail::require_finite(cur, t);
        const double threshold = 1e-8 * bscale;
        if (next_out < out_times.size() && out_times[next_out] == target) {
            Field snap(grid, t);
            snap.values = cur;
            report.snapshots.push_back(std::move(snap));
            const double xf = discrete_front(grid, cur, threshold, false);
            report.front_trajectory.emplace_back(t, xf);
            if (!warned && xf >= x_warn) {
                report.warnings.push_back("front trajectory within 10% of the right boundary");
                warned = true;
            }
            ++next_out;
        }
    }

    report.final.t = t;
    report.final.values = std::move(cur);
    return report;
}

} // namespace detail

/// March the quasilinear law from `init` to t_end, landing exactly on each
/// output time. The step is chosen automatically from the stability bound,
/// so CflViolation cannot occur; NonFiniteState is raised if the state
/// degrades. The report's front trajectory records, per snapshot, the
/// largest x whose value exceeds 1e-8 times the boundary scale.
inline SolveReport solve_quasilinear(const Field& init, const BoundarySpec& bc, const PhysParams& p,
                                     double t_end, const std::vector<double>& out_times,
                                     double cfl_safety = 0.5) {
    return detail::solve_driver(init, bc, p, t_end, out_times, cfl_safety,
                                [](const std::vector<double>& s, std::vector<double>& d, double dx,
                                   double dt, const PhysParams& pp) {
                                    detail::quasilinear_interior(s, d, dx, dt, pp);
                                });
}

/// Linear-baseline analogue of solve_quasilinear.
inline SolveReport solve_linear(const Field& init, const BoundarySpec& bc, const PhysParams& p,
                                double t_end, const std::vector<double>& out_times,
                                double cfl_safety = 0.5) {
    return detail::solve_driver(init, bc, p, t_end, out_times, cfl_safety,
                                [](const std::vector<double>& s, std::vector<double>& d, double dx,
                                   double dt, const PhysParams& pp) {
                                    detail::linear_interior(s, d, dx, dt, pp);
                                });
}

/// March the conservation-form equation for H = dT/dx. Front locations are
/// taken on |H| (the gradient is negative behind a cooling front).
inline SolveReport solve_gradient_form(const Field& init, const PhysParams& p, double t_end,
                                       std::vector<double> out_times,
                                       GradientBc bc = GradientBc::Dirichlet,
                                       double cfl_safety = 0.5) {
    if (!(t_end > init.t))
        throw ValidationError("solve_gradient_form: t_end must exceed the initial time");
    std::sort(out_times.begin(), out_times.end());
    out_times.erase(std::unique(out_times.begin(), out_times.end()), out_times.end());
    if (!out_times.empty() && (out_times.front() <= init.t || out_times.back() > t_end))
        throw ValidationError("solve_gradient_form: output times must lie in (t_init, t_end]");

    std::vector<double> targets = out_times;
    if (targets.empty() || targets.back() < t_end) targets.push_back(t_end);

    const Grid1D& grid = init.grid;
    const double dt_max = max_stable_dt(grid, p, cfl_safety);
    double hscale = 0.0;
    for (double v : init.values) hscale = std::max(hscale, std::abs(v));

    SolveReport report{Field(grid, init.t), {}, {}, 0, 0.0, {}};
    std::vector<double> cur = init.values, nxt = init.values;
    double t = init.t;
    std::size_t next_out = 0;

    for (double target : targets) {
        const double span = target - t;
        auto steps = static_cast<std::size_t>(std::ceil(span / dt_max));
        if (steps == 0) steps = 1;
        double dt = span / static_cast<double>(steps);
        if (dt > dt_max) {
            ++steps;
            dt = span / static_cast<double>(steps);
        }
        for (std::size_t s = 0; s < steps; ++s) {
            detail::gradient_form_update(cur, nxt, grid.dx, dt, p, bc);
            cur.swap(nxt);
            t = (s + 1 == steps) ? target : t + dt;
        }
        report.steps_taken += steps;
        report.dt_used = dt;

        detail::require_finite(cur, t);
        if (next_out < out_times.size() && out_times[next_out] == target) {
            Field snap(grid, t);
            snap.values = cur;
            report.snapshots.push_back(std::move(snap));
            report.front_trajectory.emplace_back(t, detail::discrete_front(grid, cur, 1e-8 * hscale, true));
            ++next_out;
        }
    }

    report.final.t = t;
    report.final.values = std::move(cur);
    return report;
}

} // namespace qlheat
