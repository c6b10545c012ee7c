#pragma once

#include <cmath>

#include "qlheat/errors.hpp"

namespace qlheat {

/// Physical constants of the heat-conduction model.
///
/// D_T is the temperature-conduction coefficient [length^2/time], a the
/// gradient scale of the bounded-flux law [temperature/length], lambda the
/// heat-conduction coefficient, c the thermal capacity and rho the density.
/// The five are tied together by D_T = lambda/(c*rho); construction rejects
/// parameter sets that break the identity or are not strictly positive.
struct PhysParams {
    double D_T;
    double a;
    double lambda;
    double c;
    double rho;

    PhysParams(double D_T_, double a_, double lambda_, double c_, double rho_)
        : D_T(D_T_), a(a_), lambda(lambda_), c(c_), rho(rho_) {
        if (!(D_T > 0.0) || !(a > 0.0) || !(lambda > 0.0) || !(c > 0.0) || !(rho > 0.0))
            throw ValidationError("PhysParams: D_T, a, lambda, c, rho must all be positive and finite");
        if (std::abs(D_T - lambda / (c * rho)) > 1e-12 * D_T)
            throw ValidationError("PhysParams: D_T must equal lambda/(c*rho)");
    }

    /// Backfills lambda = D_T, c = rho = 1.
    PhysParams(double D_T_, double a_) : PhysParams(D_T_, a_, D_T_, 1.0, 1.0) {}

    /// Solutions keep physical sense only for a <= 0.1; larger values are
    /// flagged (a warning condition, not an error).
    bool physical_range() const { return a <= 0.1; }
};

} // namespace qlheat
