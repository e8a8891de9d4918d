#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "feynpath/lattice.hpp"
#include "feynpath/types.hpp"

namespace feynpath {

// Graded-index slab n(x,z) = n0 (1 - g(z)^2 x^2 / 2) in the paraxial regime.
// Lengths in one unit throughout; k = 2 pi / wavelength, lambda_bar = 1/k.
class GrinMedium {
public:
    enum class Profile { constant, tabulated, expression };

    static GrinMedium constant(double n0, double g0, double wavelength);
    // Monotone cubic through (z_i, g_i); clamped to the end values outside.
    static GrinMedium tabulated(double n0, double wavelength, std::vector<double> zs,
                                std::vector<double> gs);
    static GrinMedium expression(double n0, double wavelength, std::function<double(double)> g);
    // Two columns z,g; '#' lines and a non-numeric header line are skipped.
    static GrinMedium from_csv(double n0, double wavelength, const std::string& path);

    double g(double z) const { return g_(z); }
    double n0() const { return n0_; }
    double wavelength() const { return wavelength_; }
    double k() const { return 2.0 * kPi / wavelength_; }
    double lambda_bar() const { return wavelength_ / (2.0 * kPi); }
    Profile profile() const { return profile_; }

private:
    double n0_ = 1.0;
    double wavelength_ = 1.0;
    Profile profile_ = Profile::constant;
    std::function<double(double)> g_;
};

// max over z in [0, z_max] of g(z) * x_max; the paraxial model wants this << 1.
double inhomogeneity_parameter(const GrinMedium& medium, double x_max, double z_max);

struct OdeTolerance {
    double abs = 1e-10;
    double rel = 1e-10;
};

struct RayInit {
    double h1 = 0.0, dh1 = 1.0;
    double h2 = 1.0, dh2 = 0.0;
};

struct RayValues {
    double z = 0.0;
    double h1 = 0.0, dh1 = 1.0;
    double h2 = 1.0, dh2 = 0.0;

    double wronskian() const { return h1 * dh2 - h2 * dh1; }
};

struct RayPair {
    std::vector<RayValues> samples;

    // max |W(z) - W(0)|
    double wronskian_drift() const;
};

// H'' + g(z)^2 H = 0 from z = 0 to each requested plane (non-decreasing, >= 0).
RayPair solve_rays(const GrinMedium& medium, const std::vector<double>& z_planes,
                   const RayInit& init = {}, const OdeTolerance& tol = {});

// sqrt(k n0 / (2 pi i H1)) e^{i k n0 z} exp[i k n0 (H1' xb^2 + H2 xa^2 - 2 xa xb) / (2 H1)]
// Throws CausticError at focal planes (H1 = 0).
Complex grin_kernel(double xa, double xb, double z, const GrinMedium& medium);
Complex grin_kernel(double xa, double xb, const RayValues& rays, const GrinMedium& medium);

struct EnvelopeInit {
    Complex xi;
    Complex dxi;
};

struct EnvelopePoint {
    double z = 0.0;
    double s = 1.0;
    double gamma = 0.0;        // unwrapped phase of xi
    double gamma_dot = 0.0;    // d gamma / dz = Im(xi'/xi)
    double sdot_over_s = 0.0;  // Re(xi'/xi)
};

struct EnvelopeSolution {
    std::vector<EnvelopePoint> samples;
    double invariant = 0.0;  // s^2 gamma' at z = 0

    // max |s^2 gamma' - invariant|
    double invariant_drift() const;
};

// xi'' + g(z)^2 xi = 0, xi = s e^{i gamma}. Without an explicit init,
// xi(0) = sqrt(n0/g(0)) and xi'(0) = i g(0) xi(0), which needs g(0) > 0.
EnvelopeSolution solve_envelope(const GrinMedium& medium, const std::vector<double>& z_planes,
                                const std::optional<EnvelopeInit>& init = std::nullopt,
                                const OdeTolerance& tol = {});

// psi_0 .. psi_{n_max} at x for the envelope state at one plane.
std::vector<Complex> mode_functions(int n_max, double x, const EnvelopePoint& env,
                                    const GrinMedium& medium);

enum class ModeSummation { partial, accelerated };

struct ModeSumResult {
    Complex value;
    // partial: |last term| / |sum|. accelerated: change between the last two
    // extrapolants relative to |sum|.
    double tail_ratio = 0.0;
    bool converged = false;  // tail_ratio <= 1e-8
};

// e^{i k n0 (zb - za)} sum_{n <= n_max} conj(psi_n(xa, za)) psi_n(xb, zb)
ModeSumResult mode_kernel(double xa, double xb, const EnvelopePoint& env_a,
                          const EnvelopePoint& env_b, const GrinMedium& medium, int n_max,
                          ModeSummation summation = ModeSummation::accelerated);
ModeSumResult mode_kernel(double xa, double xb, double za, double zb, const GrinMedium& medium,
                          int n_max, ModeSummation summation = ModeSummation::accelerated);

enum class BeamBackend { kernel, modes, both };

struct BeamOptions {
    BeamBackend backend = BeamBackend::kernel;
    int n_modes = 60;
    double consistency_tolerance = 1e-4;
    std::optional<EnvelopeInit> envelope_init;
    unsigned threads = 0;
};

struct BeamResult {
    std::vector<Complex> field;
    double power_in = 0.0;
    double power_out = 0.0;
    double mode_power_fraction = 1.0;  // modes backends: captured fraction of input power
    double backend_difference = 0.0;   // both: max |E_kernel - E_modes| / max |E|
};

// Diffraction integral from z = 0 to z on the grid. The kernel backend
// checks dx < pi lambda_bar z / (n0 range); 'both' throws InconsistencyError
// when the backends differ by more than the tolerance.
BeamResult propagate_beam(const SpatialGrid& grid, const std::vector<Complex>& field, double z,
                          const GrinMedium& medium, const BeamOptions& options = {});

}  // namespace feynpath
