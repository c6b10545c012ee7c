#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "qlheat/dopri5.hpp"
#include "qlheat/errors.hpp"
#include "qlheat/params.hpp"

namespace qlheat {

/// Right side of the similarity ODE
///   f'' = (f - z f') (f'^2 + a^2) / (2 D_T f'^2),
/// obtained by substituting z = x/sqrt(t), T = sqrt(t) f(z) into the
/// quasilinear conduction law. The equation divides by f'^2; below the
/// regularization floor fp_min it is treated as singular.
inline double ode_rhs(double z, double f, double fp, const PhysParams& p, double fp_min) {
    if (std::abs(fp) <= fp_min)
        throw DegenerateSlope("ode_rhs: |f'| at or below the regularization floor");
    return (f - z * fp) * (fp * fp + p.a * p.a) / (2.0 * p.D_T * fp * fp);
}

inline double ode_rhs(double z, double f, double fp, const PhysParams& p) {
    return ode_rhs(z, f, fp, p, 1e-12 * p.a);
}

/// Why profile integration ended.
enum class ProfileStop {
    ReachedEnd,       ///< advanced to z_max
    NegativeFloor,    ///< f dropped to the floor below zero (front passed)
    DegenerateSlope,  ///< |f'| fell to the regularization floor
};

struct SimilarityOptions {
    double atol = 1e-10;
    double rtol = 1e-10;
    std::size_t output_points = 1001;  ///< uniform samples over the reached interval
    std::size_t max_steps = 1000000;
};

/// Sampled self-similar profile f(z) with derivatives and the integrator's
/// continuous extension. Samples are the uniform output grid merged with
/// the integrator's accepted steps (points closer than a quarter of the
/// uniform spacing to a retained sample are dropped). The tail past the
/// zero crossing, down to the stop floor, is retained; `stop` flags why
/// integration ended.
struct SimilarityProfile {
    std::vector<double> z;
    std::vector<double> f;
    std::vector<double> fp;
    PhysParams params;
    double B = 0.0;
    double C = 0.0;
    ProfileStop stop = ProfileStop::ReachedEnd;
    DenseOutput<2> dense;

    double z_reach() const { return z.back(); }
    double eval_f(double zq) const { return dense.eval(zq)[0]; }
    double eval_fp(double zq) const { return dense.eval(zq)[1]; }
};

/// Front coordinate z0 in similarity variables with the certifying bracket:
/// f(bracket.first) > 0 >= f(bracket.second). When the profile starts at or
/// below zero the front sits on the boundary and the bracket degenerates to
/// (0, 0).
struct FrontInfo {
    double z0 = 0.0;
    std::pair<double, double> bracket{0.0, 0.0};
};

namespace detail {

/// p''(x1) of the quintic polynomial matching (value, slope) at the three
/// nodes x0 < x1 < x2. Weights are solved per call (nodes need not be
/// uniform); work is scaled by the larger gap so the system stays
/// well-conditioned.
inline double hermite_second_derivative(double x0, double f0, double d0,
                                        double x1, double f1, double d1,
                                        double x2, double f2, double d2) {
    const double u = x1 - x0, v = x2 - x1;
    const double s = std::max(u, v);
    const double nodes[3] = {-u / s, 0.0, v / s};
    // exactness on xi^k, k = 0..5: columns are value weights then slope weights
    double m[6][7];
    for (int k = 0; k < 6; ++k) {
        for (int j = 0; j < 3; ++j) {
            m[k][j] = (k == 0) ? 1.0 : std::pow(nodes[j], k);
            m[k][3 + j] = (k == 0) ? 0.0 : static_cast<double>(k) * std::pow(nodes[j], k - 1);
        }
        m[k][6] = (k == 2) ? 2.0 : 0.0;
    }
    for (int col = 0; col < 6; ++col) {  // gaussian elimination, partial pivoting
        int piv = col;
        for (int r = col + 1; r < 6; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (piv != col)
            for (int cc = 0; cc < 7; ++cc) std::swap(m[col][cc], m[piv][cc]);
        for (int r = 0; r < 6; ++r) {
            if (r == col || m[r][col] == 0.0) continue;
            const double fac = m[r][col] / m[col][col];
            for (int cc = col; cc < 7; ++cc) m[r][cc] -= fac * m[col][cc];
        }
    }
    double w[6];
    for (int j = 0; j < 6; ++j) w[j] = m[j][6] / m[j][j];
    const double acc = w[0] * f0 + w[1] * f1 + w[2] * f2 + s * (w[3] * d0 + w[4] * d1 + w[5] * d2);
    return acc / (s * s);
}

} // namespace detail

/// Integrate the similarity ODE from z = 0 with f(0) = B, f'(0) = C until
/// z_max or a stopping event: f falling to -0.1*|B| (kept slightly past the
/// zero crossing so the front can be bracketed) or |f'| reaching the floor
/// 1e-12*max(|C|, a).
inline SimilarityProfile integrate_profile(double B, double C, const PhysParams& p,
                                           double z_max, SimilarityOptions opts = {}) {
    if (C == 0.0)
        throw InvalidBoundary("integrate_profile: boundary slope C must be nonzero");
    if (!(z_max > 0.0))
        throw ValidationError("integrate_profile: z_max must be positive");

    const double fp_min = 1e-12 * std::max(std::abs(C), p.a);
    const double f_floor = -0.1 * std::abs(B);

    auto rhs = [&p, fp_min](double z, const std::array<double, 2>& y) {
        return std::array<double, 2>{y[1], ode_rhs(z, y[0], y[1], p, fp_min)};
    };
    Dopri5<2, decltype(rhs)> stepper(rhs, OdeOptions{opts.atol, opts.rtol, opts.max_steps});

    std::array<double, 2> y{B, C};
    double zcur = 0.0;
    std::vector<double> knot_z{0.0};
    std::vector<std::array<double, 2>> knot_y{y};
    DenseOutput<2> dense;
    ProfileStop stop = ProfileStop::ReachedEnd;

    auto h_floor = [](double z) { return 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(z)); };

    double h;
    try {
        h = std::min(stepper.initial_step(0.0, y), z_max);
    } catch (const DegenerateSlope&) {
        if (std::abs(C) <= fp_min) throw;  // degenerate from the start
        h = std::min(1e-6, 0.01 * z_max);  // the Euler probe overshot; start small
        stepper.reset();
    }
    std::size_t steps = 0;
    while (zcur < z_max) {
        if (++steps > opts.max_steps)
            throw StepSizeCollapse("integrate_profile: step budget exhausted");
        bool landing = false;
        if (zcur + h >= z_max) {
            h = z_max - zcur;
            landing = true;
        }

        double err = 0.0;
        std::array<double, 2> ynew;
        try {
            ynew = stepper.attempt(zcur, y, h, err);
        } catch (const DegenerateSlope&) {
            // a trial stage crossed the singular slope; shrink toward it
            h *= 0.5;
            if (h <= h_floor(zcur)) {
                stop = ProfileStop::DegenerateSlope;
                break;
            }
            continue;
        }
        if (err > 1.0) {
            h *= Dopri5<2, decltype(rhs)>::step_factor(err);
            if (h <= h_floor(zcur))
                throw StepSizeCollapse("integrate_profile: adaptive step underflowed");
            continue;
        }

        auto seg = stepper.dense_segment(zcur, y, ynew, h);
        dense.push(seg);

        if (ynew[0] <= f_floor) {
            double z_end = zcur + h;
            std::array<double, 2> y_end = ynew;
            if (y[0] > f_floor) {
                // localize f = f_floor inside the step with the dense output
                double lo = zcur, hi = z_end;
                for (int it = 0; it < 90 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (seg.eval(mid)[0] > f_floor ? lo : hi) = mid;
                }
                z_end = hi;
                y_end = seg.eval(z_end);
            }
            knot_z.push_back(z_end);
            knot_y.push_back(y_end);
            stop = ProfileStop::NegativeFloor;
            break;
        }

        zcur = landing ? z_max : zcur + h;
        y = ynew;
        stepper.advance();
        knot_z.push_back(zcur);
        knot_y.push_back(y);

        if (std::abs(y[1]) <= fp_min) {
            stop = ProfileStop::DegenerateSlope;
            break;
        }
        if (!landing) h = std::min(h * Dopri5<2, decltype(rhs)>::step_factor(err), z_max);
    }

    if (knot_z.size() < 2)
        throw StepSizeCollapse("integrate_profile: no step could be taken");

    // sample set: uniform grid over the reached interval merged with knots
    const double z_reach = knot_z.back();
    const std::size_t m = std::max<std::size_t>(opts.output_points, 2);
    const double du = z_reach / static_cast<double>(m - 1);

    SimilarityProfile prof{{}, {}, {}, p, B, C, stop, std::move(dense)};
    prof.z.reserve(m + knot_z.size());
    prof.f.reserve(m + knot_z.size());
    prof.fp.reserve(m + knot_z.size());

    auto push_sample = [&prof](double zq, double fq, double fpq) {
        prof.z.push_back(zq);
        prof.f.push_back(fq);
        prof.fp.push_back(fpq);
    };

    std::size_t ki = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const double zu = (k + 1 == m) ? z_reach : static_cast<double>(k) * du;
        // knots well left of this uniform point, kept if separated enough
        while (ki < knot_z.size() && knot_z[ki] < zu - 0.25 * du) {
            if (prof.z.empty() || knot_z[ki] - prof.z.back() > 0.25 * du)
                push_sample(knot_z[ki], knot_y[ki][0], knot_y[ki][1]);
            ++ki;
        }
        // knots colliding with the uniform point are absorbed by it
        while (ki < knot_z.size() && knot_z[ki] <= zu + 0.25 * du) ++ki;
        if (k == 0) {
            push_sample(0.0, B, C);  // exact boundary data
        } else if (k + 1 == m) {
            push_sample(z_reach, knot_y.back()[0], knot_y.back()[1]);
        } else {
            const auto v = prof.dense.eval(zu);
            push_sample(zu, v[0], v[1]);
        }
    }
    return prof;
}

/// Largest scaled defect of the similarity ODE over interior samples:
///   |2 D_T f'' f'^2 - (f - z f') (f'^2 + a^2)| / (1 + |f|)
/// with f'' reconstructed from neighbouring (f, f') samples alone, so the
/// check is independent of the right-side evaluation used while integrating.
inline double max_scaled_residual(const SimilarityProfile& prof) {
    const double a2 = prof.params.a * prof.params.a;
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < prof.z.size(); ++i) {
        const double fpp = detail::hermite_second_derivative(
            prof.z[i - 1], prof.f[i - 1], prof.fp[i - 1],
            prof.z[i], prof.f[i], prof.fp[i],
            prof.z[i + 1], prof.f[i + 1], prof.fp[i + 1]);
        const double lhs = 2.0 * prof.params.D_T * fpp * prof.fp[i] * prof.fp[i];
        const double rhs = (prof.f[i] - prof.z[i] * prof.fp[i]) * (prof.fp[i] * prof.fp[i] + a2);
        worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(prof.f[i])));
    }
    return worst;
}

/// Locate the heat front f(z0) = 0 by bisection on the profile's continuous
/// extension, starting from the first sign change among the samples.
inline FrontInfo locate_front(const SimilarityProfile& prof, double tol = 1e-8) {
    if (prof.f.front() <= 0.0)
        return FrontInfo{0.0, {0.0, 0.0}};
    for (std::size_t i = 0; i + 1 < prof.z.size(); ++i) {
        if (!(prof.f[i] > 0.0 && prof.f[i + 1] <= 0.0)) continue;
        double lo = prof.z[i], hi = prof.z[i + 1];
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            (prof.eval_f(mid) > 0.0 ? lo : hi) = mid;
        }
        return FrontInfo{0.5 * (lo + hi), {lo, hi}};
    }
    throw NoFront("locate_front: profile has no sign change");
}

/// Physical front position x0(t) = z0 * sqrt(t).
inline double front_position(const FrontInfo& front, double t) {
    if (t < 0.0) throw NegativeTime("front_position: t must be nonnegative");
    return front.z0 * std::sqrt(t);
}

/// Front velocity V0(t) = z0 / (2 sqrt(t)); finite for every t > 0.
inline double front_velocity(const FrontInfo& front, double t) {
    if (!(t > 0.0)) throw NonpositiveTime("front_velocity: t must be positive");
    return front.z0 / (2.0 * std::sqrt(t));
}

} // namespace qlheat
