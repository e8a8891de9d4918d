#pragma once

#include <vector>

#include "feynpath/types.hpp"

namespace feynpath {

// sqrt(m / (2 pi i hbar T)) exp(i m (xb - xa)^2 / (2 hbar T)), principal branch.
Complex free_kernel(const SpacetimeEndpoints& ends, const ParticleParams& p = {});

// Classical action of the harmonic oscillator,
// m w / (2 sin wT) [ (xa^2 + xb^2) cos wT - 2 xa xb ].
// Throws CausticError when wT is a positive multiple of pi.
double ho_action(const SpacetimeEndpoints& ends, const OscillatorParams& osc);

// sqrt(m / (2 pi i hbar T sinc(wT))) exp(i S_cl / hbar); delegates to
// free_kernel at omega == 0.
Complex ho_kernel(const SpacetimeEndpoints& ends, const OscillatorParams& osc);

// Refraction angle from the stationary two-segment optical path.
// Angles in radians. Throws TotalInternalReflection.
double snell_refract(double n_a, double n_b, double theta_a);

struct KernelSample {
    double xa = 0.0;
    double xb = 0.0;
    Complex kernel;
    double classical_action = 0.0;
};

struct FactorizationCheck {
    Complex prefactor;           // mean of K exp(-i S_cl / hbar)
    double max_deviation = 0.0;  // max relative deviation from the mean
    bool constant = false;       // max_deviation < tolerance
};

// For quadratic Lagrangians K = F(T) exp(i S_cl / hbar); checks that
// K exp(-i S_cl / hbar) does not depend on the endpoints.
FactorizationCheck quadratic_prefactor_check(const std::vector<KernelSample>& samples,
                                             double hbar = 1.0, double tolerance = 1e-3);

}  // namespace feynpath
