#include "feynpath/lattice.hpp"

#include <cmath>
#include <string>

#include "feynpath/errors.hpp"
#include "feynpath/kernels_exact.hpp"
#include "feynpath/parallel.hpp"

namespace feynpath {

Complex TimeSlicing::normalization(const ParticleParams& p) const {
    return std::sqrt(2.0 * kPi * kI * p.hbar * epsilon() / p.mass);
}

void TimeSlicing::validate() const {
    if (n < 1) throw DomainError("time slicing needs N >= 1");
    if (!(duration > 0.0) || !std::isfinite(duration))
        throw DomainError("time slicing needs a positive duration");
}

std::vector<double> SpatialGrid::points() const {
    std::vector<double> xs(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) xs[static_cast<std::size_t>(i)] = x(i);
    return xs;
}

void SpatialGrid::validate() const {
    if (n_points < 3) throw DomainError("spatial grid needs at least 3 points");
    if (!(x_max > x_min)) throw DomainError("spatial grid needs x_max > x_min");
}

double lattice_action(const std::vector<double>& path, const PotentialModel& V,
                      const TimeSlicing& slicing, const ParticleParams& p, SliceRule rule,
                      double ta) {
    slicing.validate();
    p.validate();
    if (path.size() != static_cast<std::size_t>(slicing.n) + 1)
        throw DomainError("path has " + std::to_string(path.size()) + " points, expected N+1 = " +
                          std::to_string(slicing.n + 1));
    const double eps = slicing.epsilon();
    double s = 0.0;
    for (int i = 1; i <= slicing.n; ++i) {
        const double x0 = path[static_cast<std::size_t>(i - 1)];
        const double x1 = path[static_cast<std::size_t>(i)];
        const double t0 = ta + (i - 1) * eps;
        const double t1 = ta + i * eps;
        const double kinetic = p.mass * (x1 - x0) * (x1 - x0) / (2.0 * eps);
        const double pot = rule == SliceRule::midpoint ? V(0.5 * (x0 + x1), t1)
                                                       : 0.5 * (V(x0, t0) + V(x1, t1));
        s += kinetic - eps * pot;
    }
    return s;
}

namespace {

// One slice action s_xx x^2 + s_yy y^2 + s_xy x y + s_x x + s_y y + s_c.
struct SliceQuadratic {
    double xx, yy, xy, x, y, c;
};

SliceQuadratic slice_quadratic(const PotentialModel& V, const ParticleParams& p, double eps,
                               double t0, double t1, SliceRule rule) {
    const double kin = p.mass / (2.0 * eps);
    if (rule == SliceRule::midpoint) {
        const QuadraticCoefficients q = V.coefficients(t1);
        return {kin - eps * q.a / 4.0, kin - eps * q.a / 4.0, -2.0 * kin - eps * q.a / 2.0,
                -eps * q.b / 2.0,      -eps * q.b / 2.0,      -eps * q.c};
    }
    const QuadraticCoefficients q0 = V.coefficients(t0);
    const QuadraticCoefficients q1 = V.coefficients(t1);
    return {kin - eps * q0.a / 2.0, kin - eps * q1.a / 2.0, -2.0 * kin,
            -eps * q0.b / 2.0,      -eps * q1.b / 2.0,      -eps * (q0.c + q1.c) / 2.0};
}

Complex gaussian_recursion(const SpacetimeEndpoints& ends, const ParticleParams& p,
                           const PotentialModel& V, const TimeSlicing& slicing, SliceRule rule) {
    if (!V.is_quadratic())
        throw DomainError("gaussian_recursion needs a potential quadratic in x, got '" +
                          to_string(V.kind()) + "'");
    const double eps = slicing.epsilon();
    const double hbar = p.hbar;
    const Complex inv_a = 1.0 / slicing.normalization(p);
    auto slice = [&](int i) {
        return slice_quadratic(V, p, eps, ends.ta + (i - 1) * eps, ends.ta + i * eps, rule);
    };

    // Exponent carried as (i/hbar)(alpha x^2 + beta x + gamma) in the newest variable.
    SliceQuadratic s = slice(1);
    double alpha = s.yy;
    double beta = s.y + s.xy * ends.xa;
    double gamma = (s.xx * ends.xa + s.x) * ends.xa + s.c;
    Complex prefactor = inv_a;
    for (int i = 2; i <= slicing.n; ++i) {
        s = slice(i);
        const double q = alpha + s.xx;
        if (q == 0.0)
            throw CausticError("Gaussian slice integral is singular at slice " + std::to_string(i));
        const double lin = beta + s.x;
        prefactor *= inv_a * std::sqrt(kI * kPi * hbar / q);
        const double alpha_next = s.yy - s.xy * s.xy / (4.0 * q);
        const double beta_next = s.y - lin * s.xy / (2.0 * q);
        gamma = gamma + s.c - lin * lin / (4.0 * q);
        alpha = alpha_next;
        beta = beta_next;
    }
    const double phase = (alpha * ends.xb + beta) * ends.xb + gamma;
    return prefactor * std::exp(kI * (phase / hbar));
}

}  // namespace

Complex lattice_kernel(const SpacetimeEndpoints& ends, const ParticleParams& p,
                       const PotentialModel& V, const TimeSlicing& slicing, LatticeMethod method,
                       const LatticeOptions& options) {
    p.validate();
    slicing.validate();
    const double T = ends.duration();
    if (!(T > 0.0)) throw DomainError("lattice kernel needs tb > ta");
    if (std::abs(T - slicing.duration) > 1e-12 * T)
        throw DomainError("time slicing duration does not match tb - ta");
    if (method == LatticeMethod::gaussian_recursion)
        return gaussian_recursion(ends, p, V, slicing, options.rule);
    return grid_transfer_kernels({{ends.xa, ends.xb}}, ends.ta, p, V, slicing, options.rule,
                                 options.grid)
        .front();
}

KernelEvaluator free_evaluator(const ParticleParams& p) {
    return [p](double xb, double xa, double T) {
        return free_kernel(SpacetimeEndpoints{xa, xb, 0.0, T}, p);
    };
}

KernelEvaluator ho_evaluator(const OscillatorParams& osc) {
    return [osc](double xb, double xa, double T) {
        return ho_kernel(SpacetimeEndpoints{xa, xb, 0.0, T}, osc);
    };
}

EvolveResult evolve_wavefunction(const SpatialGrid& grid, const std::vector<Complex>& psi_a,
                                 const KernelEvaluator& kernel, double T,
                                 const ParticleParams& p, unsigned threads) {
    grid.validate();
    p.validate();
    if (psi_a.size() != static_cast<std::size_t>(grid.n_points))
        throw DomainError("wavefunction size does not match the grid");
    if (!(T > 0.0)) throw DomainError("evolution time must be positive");
    const double dx = grid.dx();
    const double bound = kPi * p.hbar * T / (p.mass * grid.range());
    if (!(dx < bound))
        throw DomainError("grid spacing " + std::to_string(dx) + " violates the sampling bound " +
                          std::to_string(bound) + " for this evolution time");

    const std::vector<double> xs = grid.points();
    EvolveResult out;
    out.psi.assign(xs.size(), Complex{});
    for (const Complex& v : psi_a) out.norm_before += std::norm(v) * dx;
    // Pre-evaluate one kernel to surface domain errors (caustics) on the caller's thread.
    (void)kernel(xs.front(), xs.front(), T);
    parallel_for(xs.size(), threads == 0 ? default_thread_count() : threads, [&](std::size_t b) {
        Complex acc{0.0, 0.0};
        for (std::size_t a = 0; a < xs.size(); ++a)
            if (psi_a[a] != Complex{}) acc += kernel(xs[b], xs[a], T) * psi_a[a];
        out.psi[b] = acc * dx;
    });
    for (const Complex& v : out.psi) out.norm_after += std::norm(v) * dx;
    out.leakage_warning = out.norm_before > 0.0 &&
                          std::abs(out.norm_after - out.norm_before) > 0.01 * out.norm_before;
    return out;
}

}  // namespace feynpath
