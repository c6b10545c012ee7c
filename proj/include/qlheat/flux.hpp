#pragma once

#include <cmath>

#include "qlheat/params.hpp"

namespace qlheat {

/// Linear conduction law: flux = -lambda * g for a temperature gradient g.
/// The sign carries the 1-D direction.
inline double linear_flux(double g, const PhysParams& p) {
    return -p.lambda * g;
}

/// Bounded-correction conduction law: flux = -lambda*(g - a*atan(g/a)).
///
/// Odd in g, same sign as linear_flux, never larger in magnitude, and within
/// lambda*a*pi/2 of it for any gradient. For |g/a| beyond ~1e15 the atan
/// saturates at +-pi/2, which is the correct limiting value.
inline double modified_flux(double g, const PhysParams& p) {
    return -p.lambda * (g - p.a * std::atan(g / p.a));
}

/// |linear_flux - modified_flux| = lambda*a*|atan(g/a)|.
///
/// Closed form; subtracting the two fluxes would cancel catastrophically at
/// large |g|. Strictly below lambda*a*pi/2 for finite g and monotone
/// nondecreasing in |g|.
inline double flux_gap(double g, const PhysParams& p) {
    return p.lambda * p.a * std::abs(std::atan(g / p.a));
}

/// Gradient-dependent diffusivity D_T * g^2/(g^2 + a^2).
///
/// Even in g, zero exactly at g = 0, strictly below D_T for finite g, and
/// monotone nondecreasing in |g|. Equals the derivative of -modified_flux
/// with respect to g divided by c*rho. The |g| > a branch avoids squaring
/// a huge gradient; for |g| below ~1e-154*a the square underflows and the
/// result flushes to zero.
inline double effective_diffusivity(double g, const PhysParams& p) {
    const double ag = std::abs(g);
    if (ag <= p.a) {
        const double g2 = g * g;
        return p.D_T * g2 / (g2 + p.a * p.a);
    }
    const double r = p.a / g;
    return p.D_T / (1.0 + r * r);
}

} // namespace qlheat
