#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "qlheat/errors.hpp"

namespace qlheat {

/// Tolerances and limits for the adaptive embedded Runge-Kutta driver.
struct OdeOptions {
    double atol = 1e-10;
    double rtol = 1e-10;
    std::size_t max_steps = 1000000;
};

/// One piece of the order-4 continuous extension over an accepted step.
/// Value at t = t0 + theta*h (theta in [0,1]):
///   c1 + theta*(c2 + (1-theta)*(c3 + theta*(c4 + (1-theta)*c5)))
template <std::size_t N>
struct DenseSegment {
    double t0 = 0.0;
    double h = 0.0;
    std::array<double, N> c1{}, c2{}, c3{}, c4{}, c5{};

    std::array<double, N> eval(double t) const {
        const double th = (t - t0) / h;
        const double th1 = 1.0 - th;
        std::array<double, N> y{};
        for (std::size_t i = 0; i < N; ++i)
            y[i] = c1[i] + th * (c2[i] + th1 * (c3[i] + th * (c4[i] + th1 * c5[i])));
        return y;
    }
};

/// Piecewise-polynomial continuous solution collected over accepted steps.
template <std::size_t N>
class DenseOutput {
public:
    void push(const DenseSegment<N>& seg) { segs_.push_back(seg); }

    bool empty() const { return segs_.empty(); }
    double t_front() const { return segs_.front().t0; }
    double t_back() const { return segs_.back().t0 + segs_.back().h; }

    /// Evaluate at t; t must lie within [t_front, t_back].
    std::array<double, N> eval(double t) const {
        if (segs_.empty() || t < t_front() || t > t_back())
            throw ValidationError("DenseOutput: evaluation point outside the integrated range");
        // last segment whose t0 <= t
        std::size_t lo = 0, hi = segs_.size();
        while (hi - lo > 1) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (segs_[mid].t0 <= t) lo = mid; else hi = mid;
        }
        return segs_[lo].eval(t);
    }

private:
    std::vector<DenseSegment<N>> segs_;
};

/// Dormand-Prince 5(4) embedded pair.
///
/// Holds the last step's stages so a caller can build the dense segment or
/// an error estimate after a trial step. The right side is any callable
/// rhs(t, y) -> std::array<double, N>; it may throw to veto a trial step
/// (the caller decides how to shrink).
template <std::size_t N, typename Rhs>
class Dopri5 {
public:
    using State = std::array<double, N>;

    explicit Dopri5(Rhs rhs, OdeOptions opts = {}) : rhs_(std::move(rhs)), opts_(opts) {}

    const OdeOptions& options() const { return opts_; }

    /// One trial step from (t, y) with size h. Returns the 5th-order result
    /// and the scaled error norm (accept when <= 1). k1 is reused from the
    /// previous accepted step when `k1_valid` (FSAL).
    State attempt(double t, const State& y, double h, double& err_norm) {
        if (!k1_valid_) {
            k_[0] = rhs_(t, y);
            k1_valid_ = true;
        }
        State ytmp;
        for (std::size_t s = 1; s < 7; ++s) {
            for (std::size_t i = 0; i < N; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < s; ++j) acc += A[s][j] * k_[j][i];
                ytmp[i] = y[i] + h * acc;
            }
            k_[s] = rhs_(t + C[s] * h, ytmp);
        }
        // stage 7 used y + h*sum(A[6][j] k_j) which equals the 5th-order result
        State ynew = ytmp;
        err_norm = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            double e = 0.0;
            for (std::size_t j = 0; j < 7; ++j) e += E[j] * k_[j][i];
            e *= h;
            const double sc = opts_.atol + opts_.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err_norm += (e / sc) * (e / sc);
        }
        err_norm = std::sqrt(err_norm / static_cast<double>(N));
        return ynew;
    }

    /// Call after an accepted step to build its continuous extension.
    DenseSegment<N> dense_segment(double t, const State& y, const State& ynew, double h) const {
        DenseSegment<N> seg;
        seg.t0 = t;
        seg.h = h;
        for (std::size_t i = 0; i < N; ++i) {
            const double ydiff = ynew[i] - y[i];
            const double bspl = h * k_[0][i] - ydiff;
            seg.c1[i] = y[i];
            seg.c2[i] = ydiff;
            seg.c3[i] = bspl;
            seg.c4[i] = ydiff - h * k_[6][i] - bspl;
            seg.c5[i] = h * (D1 * k_[0][i] + D3 * k_[2][i] + D4 * k_[3][i] +
                             D5 * k_[4][i] + D6 * k_[5][i] + D7 * k_[6][i]);
        }
        return seg;
    }

    /// Commit the FSAL stage (k7 of the accepted step becomes the next k1).
    void advance() {
        k_[0] = k_[6];
        k1_valid_ = true;
    }

    /// Forget cached stages (after a rejected step the cached k1 is still
    /// valid; call this only when restarting from a different state).
    void reset() { k1_valid_ = false; }

    /// Standard starting-step heuristic from the initial point.
    double initial_step(double t0, const State& y0, double direction = 1.0) {
        const State f0 = rhs_(t0, y0);
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = opts_.atol + opts_.rtol * std::abs(y0[i]);
            d0 += (y0[i] / sc) * (y0[i] / sc);
            d1 += (f0[i] / sc) * (f0[i] / sc);
        }
        d0 = std::sqrt(d0 / N);
        d1 = std::sqrt(d1 / N);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 *= direction;
        // one explicit Euler probe to estimate the second derivative scale
        State y1;
        for (std::size_t i = 0; i < N; ++i) y1[i] = y0[i] + h0 * f0[i];
        const State f1 = rhs_(t0 + h0, y1);
        double d2 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = opts_.atol + opts_.rtol * std::abs(y0[i]);
            d2 += ((f1[i] - f0[i]) / sc) * ((f1[i] - f0[i]) / sc);
        }
        d2 = std::sqrt(d2 / N) / std::abs(h0);
        const double dm = std::max(d1, d2);
        const double h1 = (dm <= 1e-15) ? std::max(1e-6, std::abs(h0) * 1e-3)
                                        : std::pow(0.01 / dm, 0.2);
        return direction * std::min(100.0 * std::abs(h0), h1);
    }

    /// Step-size update factor for a scaled error norm.
    static double step_factor(double err_norm) {
        if (err_norm <= 0.0) return 10.0;
        return std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 10.0);
    }

private:
    static constexpr double C[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    static constexpr double A[7][6] = {
        {0, 0, 0, 0, 0, 0},
        {1.0 / 5, 0, 0, 0, 0, 0},
        {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
        {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
    };
    // difference of the 5th- and 4th-order weights
    static constexpr double E[7] = {71.0 / 57600,   0.0,          -71.0 / 16695, 71.0 / 1920,
                                    -17253.0 / 339200, 22.0 / 525, -1.0 / 40};
    static constexpr double D1 = -12715105075.0 / 11282082432.0;
    static constexpr double D3 = 87487479700.0 / 32700410799.0;
    static constexpr double D4 = -10690763975.0 / 1880347072.0;
    static constexpr double D5 = 701980252875.0 / 199316789632.0;
    static constexpr double D6 = -1453857185.0 / 822651844.0;
    static constexpr double D7 = 69997945.0 / 29380423.0;

    Rhs rhs_;
    OdeOptions opts_;
    std::array<State, 7> k_{};
    bool k1_valid_ = false;
};

} // namespace qlheat
