#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>

#include "qlheat/errors.hpp"
#include "qlheat/flux.hpp"
#include "qlheat/grid.hpp"
#include "qlheat/params.hpp"
#include "qlheat/pde.hpp"
#include "qlheat/similarity.hpp"

namespace qlheat {

/// Element of the four-parameter symmetry group of the quasilinear law:
/// time translation tau, space translation xi, temperature shift theta, and
/// the dilatation parameter eps scaling (t, x, T) by (e^{2eps}, e^eps, e^eps).
struct GroupElement {
    double tau = 0.0;
    double xi = 0.0;
    double theta = 0.0;
    double eps = 0.0;
};

struct SpaceTimeTemp {
    double t;
    double x;
    double T;
};

/// Apply the element: dilatation first, then the translations.
inline SpaceTimeTemp transform_point(const GroupElement& g, double t, double x, double T) {
    const double s = std::exp(g.eps);
    const double s2 = std::exp(2.0 * g.eps);
    return {s2 * t + g.tau, s * x + g.xi, s * T + g.theta};
}

/// Element whose action equals applying `second` and then `first`.
inline GroupElement compose(const GroupElement& first, const GroupElement& second) {
    const double s = std::exp(first.eps);
    const double s2 = std::exp(2.0 * first.eps);
    return {s2 * second.tau + first.tau, s * second.xi + first.xi, s * second.theta + first.theta,
            first.eps + second.eps};
}

inline GroupElement inverse(const GroupElement& g) {
    const double s = std::exp(-g.eps);
    const double s2 = std::exp(-2.0 * g.eps);
    return {-s2 * g.tau, -s * g.xi, -s * g.theta, -g.eps};
}

/// Sup norm of the discrete residual of the quasilinear law evaluated on the
/// transformed solution.
///
/// The transformed field is sampled on the image of the report's
/// (snapshot-time x grid-node) lattice, restricted to image points whose
/// residual stencil stays inside the originally solved window (the
/// transformed lattice must remain in the solved window; WindowExceeded
/// otherwise). Pulled back, those points are exact lattice nodes, so the
/// bilinear snapshot interpolation reduces to nodal reads. The residual
/// combines a three-point (nonuniform-capable) time derivative with central
/// space stencils; all derivative terms are built from value differences,
/// which cancels the temperature shift theta identically. A two-node margin
/// at each spatial edge is excluded. For a symmetry element the result stays
/// at the discretization-error level of the original solution.
inline double symmetry_residual(const GroupElement& g, const SolveReport& report,
                                const PhysParams& p) {
    const auto& snaps = report.snapshots;
    if (snaps.size() < 3)
        throw ValidationError("symmetry_residual: need at least 3 snapshots");
    const Grid1D& grid = snaps.front().grid;
    if (grid.n < 7)
        throw ValidationError("symmetry_residual: need at least 7 grid nodes");

    const double s = std::exp(g.eps);
    const double s2 = std::exp(2.0 * g.eps);
    const double dx_img = s * grid.dx;
    const double t_lo = snaps.front().t, t_hi = snaps.back().t;
    const double x_lo = grid.x0, x_hi = grid.x_back();

    double worst = -1.0;
    for (std::size_t j = 1; j + 1 < snaps.size(); ++j) {
        const double t_m = s2 * snaps[j - 1].t + g.tau;
        const double t_p = s2 * snaps[j + 1].t + g.tau;
        if (t_m < t_lo || t_p > t_hi) continue;
        const double h_m = s2 * (snaps[j].t - snaps[j - 1].t);
        const double h_p = s2 * (snaps[j + 1].t - snaps[j].t);
        const double w_p = h_m / (h_p * (h_m + h_p));
        const double w_m = h_p / (h_m * (h_m + h_p));
        const auto& vm = snaps[j - 1].values;
        const auto& v0 = snaps[j].values;
        const auto& vp = snaps[j + 1].values;
        for (std::size_t i = 2; i + 2 < grid.n; ++i) {
            const double xi_m = s * grid.x(i - 1) + g.xi;
            const double xi_p = s * grid.x(i + 1) + g.xi;
            if (xi_m < x_lo || xi_p > x_hi) continue;
            const double du_t = w_p * (s * (vp[i] - v0[i])) + w_m * (s * (v0[i] - vm[i]));
            const double grad = s * (v0[i + 1] - v0[i - 1]) / (2.0 * dx_img);
            const double lap = s * (v0[i + 1] - 2.0 * v0[i] + v0[i - 1]) / (dx_img * dx_img);
            const double r = du_t - effective_diffusivity(grad, p) * lap;
            worst = std::max(worst, std::abs(r));
        }
    }
    if (worst < 0.0)
        throw WindowExceeded("symmetry_residual: transformed lattice leaves the solved window");
    return worst;
}

/// Exact solution of the linear baseline with zero initial data and
/// B*sqrt(t) boundary data:
///   T(t, x) = B sqrt(t) i1erfc(eta) / i1erfc(0),   eta = x / (2 sqrt(D_T t)),
/// with i1erfc(e) = exp(-e^2)/sqrt(pi) - e*erfc(e) and i1erfc(0) = 1/sqrt(pi).
inline double linear_oracle(double t, double x, double B, const PhysParams& p) {
    if (!(t > 0.0)) throw ValidationError("linear_oracle: t must be positive");
    if (!(x >= 0.0)) throw ValidationError("linear_oracle: x must be nonnegative");
    static const double sqrt_pi = std::sqrt(std::numbers::pi);
    const double eta = x / (2.0 * std::sqrt(p.D_T * t));
    return B * std::sqrt(t) * (std::exp(-eta * eta) - sqrt_pi * eta * std::erfc(eta));
}

/// Sup-norm relative mismatch between a solved snapshot and the self-similar
/// form sqrt(t)*f(x/sqrt(t)), measured over nodes with x <= 0.9*z0*sqrt(t)
/// (strictly behind the profile's front) and scaled by B*sqrt(t).
inline double cross_validate(const SolveReport& report, const SimilarityProfile& profile,
                             double t_check) {
    const Field* snap = nullptr;
    for (const Field& f : report.snapshots)
        if (std::abs(f.t - t_check) <= 1e-12 * std::max(1.0, std::abs(t_check))) {
            snap = &f;
            break;
        }
    if (!snap)
        throw MissingSnapshot("cross_validate: t_check is not a snapshot time");
    if (profile.B == 0.0)
        throw ValidationError("cross_validate: profile boundary value B must be nonzero");

    const double rt = std::sqrt(t_check);
    const FrontInfo front = locate_front(profile);
    const double x_limit = 0.9 * front.z0 * rt;
    const double scale = std::abs(profile.B) * rt;

    double worst = 0.0;
    for (std::size_t i = 0; i < snap->grid.n; ++i) {
        const double x = snap->grid.x(i);
        if (x > x_limit) break;
        const double f_here = profile.eval_f(x / rt);
        worst = std::max(worst, std::abs(snap->values[i] - rt * f_here) / scale);
    }
    return worst;
}

} // namespace qlheat
