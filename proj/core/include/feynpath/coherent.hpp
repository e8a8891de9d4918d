#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "feynpath/grin.hpp"
#include "feynpath/types.hpp"

namespace feynpath {

// H(t) = omega(t) a^dag a + f(t) a^2 + f*(t) a^dag^2 + g(t) a + g*(t) a^dag
class QuadraticHamiltonian {
public:
    using Real = std::function<double(double)>;
    using Cplx = std::function<Complex(double)>;

    QuadraticHamiltonian(Real omega, Cplx f, Cplx g);

    static QuadraticHamiltonian constant(double omega, Complex f, Complex g);
    // omega a^dag a + kappa (e^{2i omega t} a^2 + e^{-2i omega t} a^dag^2)
    static QuadraticHamiltonian dpa(double omega, double kappa);
    // Piecewise-linear interpolation of (Re, Im) per coefficient; held constant outside.
    static QuadraticHamiltonian tabulated(std::vector<double> ts, std::vector<double> omega,
                                          std::vector<Complex> f, std::vector<Complex> g);

    double omega(double t) const { return omega_(t); }
    Complex f(double t) const { return f_(t); }
    Complex g(double t) const { return g_(t); }

private:
    Real omega_;
    Cplx f_;
    Cplx g_;
};

// X, Y, Z on a uniform mesh over [ta, tb], plus the alpha_a-independent
// pieces of Sigma(alpha_a) = sigma0 + alpha_a sigma1 + alpha_a^2 sigma2.
struct XYZSolution {
    std::vector<double> t;
    std::vector<Complex> X;
    std::vector<Complex> Y;
    std::vector<Complex> Z;
    Complex sigma0;
    Complex sigma1;
    Complex sigma2;
    double sigma_error = 0.0;  // Simpson h vs 2h estimate

    double ta() const { return t.front(); }
    double tb() const { return t.back(); }
};

struct XYZOptions {
    int mesh_intervals = 2000;  // multiple of 4
    OdeTolerance tol{1e-12, 1e-12};
    double sigma_tolerance = 1e-9;
    double blow_up = 1e12;  // |X| treated as divergent beyond this
};

// dX/dt = -2i omega X - 4i f X^2 - i f*,  X(ta) = 0
// Y = exp(-i int (omega + 4 f X)),  Z' = -i (omega + 4 f X) Z - i (g* + 2 g X)
// Throws BlowUpError when the Riccati solution diverges.
XYZSolution solve_xyz(const QuadraticHamiltonian& H, double ta, double tb,
                      const XYZOptions& options = {});

// K(alpha_b, tb; alpha_a, ta) = F exp(-i Sigma) with
// F = exp[-(|a_b|^2 + |a_a|^2)/2 + Y a_b* a_a + X a_b*^2 + Z a_b*].
Complex quadratic_propagator(Complex alpha_a, Complex alpha_b, const XYZSolution& xyz);

// Closed form for the degenerate parametric amplifier.
Complex dpa_propagator(Complex alpha_a, Complex alpha_b, double ta, double tb, double omega,
                       double kappa);

struct PointMass {
    Complex alpha;
    double weight = 1.0;
};

using CoherentPropagator = std::function<Complex(Complex alpha_b, Complex alpha_a)>;

struct ExpectationOptions {
    double scale = 1.0;  // phase-space stretch, cosh(2 kappa dt) for the amplifier
    int initial_order = 16;
    int max_order = 256;
    double tolerance = 1e-10;
};

// <a(t)> = (1/pi) sum_i w_i int d^2 beta beta |K(beta; alpha_i)|^2 by
// Gauss-Hermite product quadrature; order doubles until converged.
Complex expectation_annihilation(const std::vector<PointMass>& P, const CoherentPropagator& K,
                                 const ExpectationOptions& options = {});

struct CompositionEstimate {
    Complex estimate;
    Complex direct;
    double standard_error = 0.0;  // of |estimate|
    double relative_error = 0.0;  // |estimate - direct| / |direct|
    std::uint64_t samples = 0;
};

// Monte Carlo check of (1/pi) int d^2 a_c K(b; c) K(c; a) = K(b; a), sampling
// a_c from exp(-|a_c|^2)/pi. Shards use independent streams derived from seed
// and are reduced in shard order.
CompositionEstimate dpa_composition_mc(Complex alpha_a, Complex alpha_b, double ta, double tc,
                                       double tb, double omega, double kappa,
                                       std::uint64_t samples, std::uint64_t seed,
                                       unsigned threads = 0, unsigned shards = 64);

}  // namespace feynpath
