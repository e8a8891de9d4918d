#include "feynpath/grin.hpp"

// pchip.hpp in Boost 1.74 calls isnan unqualified
#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "feynpath/errors.hpp"
#include "feynpath/parallel.hpp"

namespace feynpath {

namespace odeint = boost::numeric::odeint;

namespace {

void check_optics(double n0, double wavelength) {
    if (!(n0 > 0.0)) throw DomainError("background index n0 must be positive");
    if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
}

void check_planes(const std::vector<double>& z_planes) {
    if (z_planes.empty()) throw DomainError("no z planes requested");
    double last = 0.0;
    for (double z : z_planes) {
        if (!(z >= last)) throw DomainError("z planes must be non-negative and non-decreasing");
        last = z;
    }
}

// Integrates from z = 0 and returns the state at every requested plane.
template <class State, class System>
std::vector<State> integrate_planes(System sys, State x, const std::vector<double>& z_planes,
                                    const OdeTolerance& tol) {
    check_planes(z_planes);
    std::vector<double> times{0.0};
    for (double z : z_planes)
        if (z > times.back()) times.push_back(z);
    std::vector<State> states;
    states.reserve(times.size());
    if (times.size() == 1) {
        states.push_back(x);
    } else {
        using Stepper = odeint::runge_kutta_dopri5<State>;
        auto stepper = odeint::make_dense_output(tol.abs, tol.rel, Stepper());
        auto obs = [&](const State& s, double) { states.push_back(s); };
        try {
            odeint::integrate_times(stepper, sys, x, times.begin(), times.end(),
                                    (times.back() - times.front()) / 100.0, obs,
                                    odeint::max_step_checker(1000000));
        } catch (const std::exception& e) {
            throw NumericalError(std::string("ODE solver tolerance not met: ") + e.what());
        }
    }
    std::vector<State> out;
    out.reserve(z_planes.size());
    std::size_t t = 0;
    for (double z : z_planes) {
        while (times[t] < z) ++t;
        out.push_back(states[t]);
    }
    return out;
}

}  // namespace

GrinMedium GrinMedium::constant(double n0, double g0, double wavelength) {
    check_optics(n0, wavelength);
    if (!(g0 >= 0.0)) throw DomainError("gradient constant g must be >= 0");
    GrinMedium m;
    m.n0_ = n0;
    m.wavelength_ = wavelength;
    m.profile_ = Profile::constant;
    m.g_ = [g0](double) { return g0; };
    return m;
}

GrinMedium GrinMedium::tabulated(double n0, double wavelength, std::vector<double> zs,
                                 std::vector<double> gs) {
    check_optics(n0, wavelength);
    if (zs.size() != gs.size() || zs.size() < 4)
        throw DomainError("tabulated g(z) needs at least 4 (z, g) pairs of equal length");
    for (std::size_t i = 1; i < zs.size(); ++i)
        if (!(zs[i] > zs[i - 1])) throw DomainError("tabulated z values must increase strictly");
    const double lo = zs.front(), hi = zs.back();
    const double g_lo = gs.front(), g_hi = gs.back();
    using Spline = boost::math::interpolators::pchip<std::vector<double>>;
    auto spline = std::make_shared<Spline>(std::move(zs), std::move(gs));
    GrinMedium m;
    m.n0_ = n0;
    m.wavelength_ = wavelength;
    m.profile_ = Profile::tabulated;
    m.g_ = [spline, lo, hi, g_lo, g_hi](double z) {
        if (z <= lo) return g_lo;
        if (z >= hi) return g_hi;
        return (*spline)(z);
    };
    return m;
}

GrinMedium GrinMedium::expression(double n0, double wavelength, std::function<double(double)> g) {
    check_optics(n0, wavelength);
    if (!g) throw DomainError("g(z) expression is empty");
    GrinMedium m;
    m.n0_ = n0;
    m.wavelength_ = wavelength;
    m.profile_ = Profile::expression;
    m.g_ = std::move(g);
    return m;
}

GrinMedium GrinMedium::from_csv(double n0, double wavelength, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open g(z) profile '" + path + "'");
    std::vector<double> zs, gs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double z = 0.0, g = 0.0;
        if (!(row >> z >> g)) {
            if (zs.empty()) continue;  // header
            throw DomainError("malformed g(z) row: '" + line + "'");
        }
        zs.push_back(z);
        gs.push_back(g);
    }
    return tabulated(n0, wavelength, std::move(zs), std::move(gs));
}

double inhomogeneity_parameter(const GrinMedium& medium, double x_max, double z_max) {
    double worst = 0.0;
    const int samples = 1000;
    for (int i = 0; i <= samples; ++i) {
        const double z = z_max * i / samples;
        worst = std::max(worst, std::abs(medium.g(z)) * std::abs(x_max));
    }
    return worst;
}

double RayPair::wronskian_drift() const {
    if (samples.empty()) return 0.0;
    const double w0 = samples.front().wronskian();
    double drift = 0.0;
    for (const auto& s : samples) drift = std::max(drift, std::abs(s.wronskian() - w0));
    return drift;
}

RayPair solve_rays(const GrinMedium& medium, const std::vector<double>& z_planes, const RayInit& init,
                   const OdeTolerance& tol) {
    using State = std::array<double, 4>;
    auto sys = [&medium](const State& x, State& dxdz, double z) {
        const double g = medium.g(z);
        const double g2 = g * g;
        dxdz[0] = x[1];
        dxdz[1] = -g2 * x[0];
        dxdz[2] = x[3];
        dxdz[3] = -g2 * x[2];
    };
    RayPair out;
    out.samples.reserve(z_planes.size());
    const auto states = integrate_planes(sys, State{init.h1, init.dh1, init.h2, init.dh2}, z_planes, tol);
    for (std::size_t i = 0; i < states.size(); ++i) {
        const State& s = states[i];
        out.samples.push_back({z_planes[i], s[0], s[1], s[2], s[3]});
    }
    return out;
}

Complex grin_kernel(double xa, double xb, const RayValues& r, const GrinMedium& medium) {
    const double scale = std::max(std::abs(r.z), 1e-300);
    if (std::abs(r.h1) <= 1e-8 * scale)
        throw CausticError("focal plane at z = " + std::to_string(r.z) + " (H1 = 0)");
    const double kn = medium.k() * medium.n0();
    const Complex pre = std::sqrt(Complex(kn, 0.0) / (2.0 * kPi * kI * r.h1));
    const double phase =
        kn * r.z + kn * (r.dh1 * xb * xb + r.h2 * xa * xa - 2.0 * xa * xb) / (2.0 * r.h1);
    return pre * std::exp(kI * phase);
}

Complex grin_kernel(double xa, double xb, double z, const GrinMedium& medium) {
    if (!(z > 0.0)) throw DomainError("propagation distance must be positive");
    return grin_kernel(xa, xb, solve_rays(medium, {z}).samples.front(), medium);
}

double EnvelopeSolution::invariant_drift() const {
    double drift = 0.0;
    for (const auto& p : samples)
        drift = std::max(drift, std::abs(p.s * p.s * p.gamma_dot - invariant));
    return drift;
}

EnvelopeSolution solve_envelope(const GrinMedium& medium, const std::vector<double>& z_planes,
                                const std::optional<EnvelopeInit>& init, const OdeTolerance& tol) {
    EnvelopeInit start;
    if (init) {
        start = *init;
        if (std::abs(start.xi) == 0.0) throw DomainError("envelope init needs xi(0) != 0");
    } else {
        const double g0 = medium.g(0.0);
        if (!(g0 > 0.0))
            throw DomainError("default envelope init needs g(0) > 0; supply explicit initial conditions");
        start.xi = std::sqrt(medium.n0() / g0);
        start.dxi = kI * g0 * start.xi;
    }
    using State = std::array<double, 5>;  // Re xi, Im xi, Re xi', Im xi', gamma
    auto sys = [&medium](const State& x, State& d, double z) {
        const double g = medium.g(z);
        const double g2 = g * g;
        d[0] = x[2];
        d[1] = x[3];
        d[2] = -g2 * x[0];
        d[3] = -g2 * x[1];
        const double r2 = x[0] * x[0] + x[1] * x[1];
        d[4] = (x[0] * x[3] - x[1] * x[2]) / r2;  // Im(conj(xi) xi') / |xi|^2
    };
    auto point = [](double z, const State& s) {
        const Complex xi{s[0], s[1]};
        const Complex ratio = Complex{s[2], s[3]} / xi;
        return EnvelopePoint{z, std::abs(xi), s[4], ratio.imag(), ratio.real()};
    };
    EnvelopeSolution out;
    const State x0{start.xi.real(), start.xi.imag(), start.dxi.real(), start.dxi.imag(),
                   std::arg(start.xi)};
    const EnvelopePoint p0 = point(0.0, x0);
    out.invariant = p0.s * p0.s * p0.gamma_dot;
    const auto states = integrate_planes(sys, x0, z_planes, tol);
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (!(std::hypot(states[i][0], states[i][1]) > 0.0))
            throw NumericalError("envelope amplitude vanished");
        out.samples.push_back(point(z_planes[i], states[i]));
    }
    return out;
}

std::vector<Complex> mode_functions(int n_max, double x, const EnvelopePoint& env,
                                    const GrinMedium& medium) {
    if (n_max < 0) throw DomainError("n_max must be >= 0");
    if (!(env.gamma_dot > 0.0)) throw DomainError("mode functions need gamma' > 0");
    const double lb = medium.lambda_bar();
    const double n0 = medium.n0();
    const double scale = n0 * env.gamma_dot / lb;
    const double X = std::sqrt(scale) * x;
    // Normalised Hermite functions by the stable three-term recurrence.
    std::vector<double> h(static_cast<std::size_t>(n_max) + 1);
    h[0] = std::pow(kPi, -0.25) * std::exp(-0.5 * X * X);
    if (n_max >= 1) h[1] = std::sqrt(2.0) * X * h[0];
    for (int n = 1; n < n_max; ++n)
        h[static_cast<std::size_t>(n) + 1] =
            std::sqrt(2.0 / (n + 1)) * X * h[static_cast<std::size_t>(n)] -
            std::sqrt(static_cast<double>(n) / (n + 1)) * h[static_cast<std::size_t>(n) - 1];
    const double amp = std::pow(scale, 0.25);
    const Complex chirp = std::exp(kI * (n0 * env.sdot_over_s * x * x / (2.0 * lb)));
    std::vector<Complex> out(h.size());
    for (int n = 0; n <= n_max; ++n)
        out[static_cast<std::size_t>(n)] = amp * h[static_cast<std::size_t>(n)] * chirp *
                                           std::exp(-kI * ((n + 0.5) * env.gamma));
    return out;
}

namespace {

// Wynn epsilon algorithm; returns the highest-order even-column entry.
Complex wynn_epsilon(const std::vector<Complex>& s) {
    const std::size_t m = s.size();
    if (m == 0) return {};
    std::vector<Complex> prev(m, Complex{});  // column k-1
    std::vector<Complex> cur = s;             // column k
    Complex best = s.back();
    for (std::size_t k = 1; k < m; ++k) {
        std::vector<Complex> next(m - k);
        for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
            const Complex d = cur[i + 1] - cur[i];
            if (std::abs(d) <= 1e-300 * (1.0 + std::abs(cur[i]))) return best;
            next[i] = prev[i + 1] + 1.0 / d;
        }
        prev = std::move(cur);
        cur = std::move(next);
        if (k % 2 == 0) {
            if (!std::isfinite(cur.back().real()) || !std::isfinite(cur.back().imag())) return best;
            best = cur.back();
        }
    }
    return best;
}

}  // namespace

ModeSumResult mode_kernel(double xa, double xb, const EnvelopePoint& env_a,
                          const EnvelopePoint& env_b, const GrinMedium& medium, int n_max,
                          ModeSummation summation) {
    if (n_max < 1) throw DomainError("mode sum needs n_max >= 1");
    const std::vector<Complex> pa = mode_functions(n_max, xa, env_a, medium);
    const std::vector<Complex> pb = mode_functions(n_max, xb, env_b, medium);
    const Complex plane = std::exp(kI * (medium.k() * medium.n0() * (env_b.z - env_a.z)));
    std::vector<Complex> terms(pa.size());
    for (std::size_t n = 0; n < pa.size(); ++n) terms[n] = plane * std::conj(pa[n]) * pb[n];

    ModeSumResult out;
    if (summation == ModeSummation::partial) {
        Complex sum{0.0, 0.0};
        for (const Complex& t : terms) sum += t;
        out.value = sum;
        out.tail_ratio = std::abs(sum) > 0.0 ? std::abs(terms.back()) / std::abs(sum)
                                             : std::abs(terms.back());
    } else {
        // Partial sums taken in pairs, since odd terms vanish at x = 0.
        std::vector<Complex> partial;
        Complex sum = terms[0];
        partial.push_back(sum);
        for (std::size_t n = 1; n + 1 < terms.size(); n += 2) {
            sum += terms[n] + terms[n + 1];
            partial.push_back(sum);
        }
        out.value = wynn_epsilon(partial);
        std::vector<Complex> shorter(partial.begin(), partial.end() - 1);
        const Complex previous = wynn_epsilon(shorter);
        out.tail_ratio = std::abs(out.value) > 0.0 ? std::abs(out.value - previous) / std::abs(out.value)
                                                   : std::abs(out.value - previous);
    }
    out.converged = out.tail_ratio <= 1e-8;
    return out;
}

ModeSumResult mode_kernel(double xa, double xb, double za, double zb, const GrinMedium& medium,
                          int n_max, ModeSummation summation) {
    if (!(za >= 0.0) || !(zb >= za)) throw DomainError("mode kernel needs 0 <= za <= zb");
    const EnvelopeSolution env = solve_envelope(medium, {za, zb});
    return mode_kernel(xa, xb, env.samples[0], env.samples[1], medium, n_max, summation);
}

BeamResult propagate_beam(const SpatialGrid& grid, const std::vector<Complex>& field, double z,
                          const GrinMedium& medium, const BeamOptions& options) {
    grid.validate();
    if (field.size() != static_cast<std::size_t>(grid.n_points))
        throw DomainError("field size does not match the grid");
    if (!(z > 0.0)) throw DomainError("propagation distance must be positive");
    const std::vector<double> xs = grid.points();
    const double dx = grid.dx();
    const unsigned threads = options.threads == 0 ? default_thread_count() : options.threads;
    const std::size_t n = xs.size();

    BeamResult out;
    for (const Complex& e : field) out.power_in += std::norm(e) * dx;

    std::vector<Complex> by_kernel, by_modes;
    if (options.backend != BeamBackend::modes) {
        const double bound = kPi * medium.lambda_bar() * z / (medium.n0() * grid.range());
        if (!(dx < bound))
            throw DomainError("grid spacing " + std::to_string(dx) +
                              " violates the sampling bound " + std::to_string(bound));
        const RayValues rays = solve_rays(medium, {z}).samples.front();
        (void)grin_kernel(0.0, 0.0, rays, medium);  // focal-plane check on this thread
        by_kernel.assign(n, Complex{});
        parallel_for(n, threads, [&](std::size_t b) {
            Complex acc{0.0, 0.0};
            for (std::size_t a = 0; a < n; ++a)
                if (field[a] != Complex{}) acc += grin_kernel(xs[a], xs[b], rays, medium) * field[a];
            by_kernel[b] = acc * dx;
        });
    }
    if (options.backend != BeamBackend::kernel) {
        if (options.n_modes < 0) throw DomainError("n_modes must be >= 0");
        const EnvelopeSolution env = solve_envelope(medium, {0.0, z}, options.envelope_init);
        const std::size_t nm = static_cast<std::size_t>(options.n_modes) + 1;
        std::vector<std::vector<Complex>> at0(n), atz(n);
        parallel_for(n, threads, [&](std::size_t j) {
            at0[j] = mode_functions(options.n_modes, xs[j], env.samples[0], medium);
            atz[j] = mode_functions(options.n_modes, xs[j], env.samples[1], medium);
        });
        std::vector<Complex> coeff(nm, Complex{});
        for (std::size_t m = 0; m < nm; ++m) {
            Complex c{0.0, 0.0};
            for (std::size_t j = 0; j < n; ++j) c += std::conj(at0[j][m]) * field[j];
            coeff[m] = c * dx;
        }
        double captured = 0.0;
        for (const Complex& c : coeff) captured += std::norm(c);
        out.mode_power_fraction = out.power_in > 0.0 ? captured / out.power_in : 1.0;
        const Complex plane = std::exp(kI * (medium.k() * medium.n0() * z));
        by_modes.assign(n, Complex{});
        for (std::size_t j = 0; j < n; ++j) {
            Complex acc{0.0, 0.0};
            for (std::size_t m = 0; m < nm; ++m) acc += coeff[m] * atz[j][m];
            by_modes[j] = plane * acc;
        }
    }

    if (options.backend == BeamBackend::both) {
        double diff = 0.0, peak = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            diff = std::max(diff, std::abs(by_kernel[j] - by_modes[j]));
            peak = std::max(peak, std::abs(by_kernel[j]));
        }
        out.backend_difference = peak > 0.0 ? diff / peak : diff;
        if (out.backend_difference > options.consistency_tolerance)
            throw InconsistencyError("kernel and mode backends differ by " +
                                     std::to_string(out.backend_difference));
    }
    out.field = options.backend == BeamBackend::modes ? std::move(by_modes) : std::move(by_kernel);
    for (const Complex& e : out.field) out.power_out += std::norm(e) * dx;
    return out;
}

}  // namespace feynpath
