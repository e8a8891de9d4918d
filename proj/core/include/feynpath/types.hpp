#pragma once

#include <complex>

namespace feynpath {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr Complex kI{0.0, 1.0};

// Mass and reduced Planck constant; natural units by default.
struct ParticleParams {
    double mass = 1.0;
    double hbar = 1.0;

    void validate() const;
};

struct SpacetimeEndpoints {
    double xa = 0.0;
    double xb = 0.0;
    double ta = 0.0;
    double tb = 1.0;

    double duration() const { return tb - ta; }
};

struct OscillatorParams {
    ParticleParams particle;
    double omega = 0.0;  // rad per unit time

    void validate() const;
};

}  // namespace feynpath
