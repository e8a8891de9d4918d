#include "feynpath/coherent.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <random>
#include <string>

#include "feynpath/errors.hpp"
#include "feynpath/gauss_hermite.hpp"
#include "feynpath/parallel.hpp"

namespace feynpath {

namespace odeint = boost::numeric::odeint;

QuadraticHamiltonian::QuadraticHamiltonian(Real omega, Cplx f, Cplx g)
    : omega_(std::move(omega)), f_(std::move(f)), g_(std::move(g)) {
    if (!omega_ || !f_ || !g_) throw DomainError("Hamiltonian coefficients must all be set");
}

QuadraticHamiltonian QuadraticHamiltonian::constant(double omega, Complex f, Complex g) {
    if (!std::isfinite(omega) || !std::isfinite(std::abs(f)) || !std::isfinite(std::abs(g)))
        throw DomainError("Hamiltonian coefficients must be finite");
    return {[omega](double) { return omega; }, [f](double) { return f; },
            [g](double) { return g; }};
}

QuadraticHamiltonian QuadraticHamiltonian::dpa(double omega, double kappa) {
    if (!std::isfinite(omega) || !std::isfinite(kappa))
        throw DomainError("amplifier parameters must be finite");
    return {[omega](double) { return omega; },
            [omega, kappa](double t) { return kappa * std::exp(2.0 * kI * (omega * t)); },
            [](double) { return Complex{}; }};
}

namespace {

template <class T>
T interpolate(const std::vector<double>& ts, const std::vector<T>& ys, double t) {
    if (t <= ts.front()) return ys.front();
    if (t >= ts.back()) return ys.back();
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - ts.begin());
    const double w = (t - ts[j - 1]) / (ts[j] - ts[j - 1]);
    return ys[j - 1] * (1.0 - w) + ys[j] * w;
}

}  // namespace

QuadraticHamiltonian QuadraticHamiltonian::tabulated(std::vector<double> ts, std::vector<double> omega,
                                                     std::vector<Complex> f, std::vector<Complex> g) {
    if (ts.size() < 2) throw DomainError("coefficient table needs at least two rows");
    if (omega.size() != ts.size() || f.size() != ts.size() || g.size() != ts.size())
        throw DomainError("coefficient table columns differ in length");
    for (std::size_t i = 1; i < ts.size(); ++i)
        if (!(ts[i] > ts[i - 1])) throw DomainError("coefficient table times must increase");
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (!std::isfinite(omega[i]) || !std::isfinite(std::abs(f[i])) || !std::isfinite(std::abs(g[i])))
            throw DomainError("coefficient table holds a non-finite value");
    auto t_shared = std::make_shared<const std::vector<double>>(std::move(ts));
    auto w = std::make_shared<const std::vector<double>>(std::move(omega));
    auto fs = std::make_shared<const std::vector<Complex>>(std::move(f));
    auto gs = std::make_shared<const std::vector<Complex>>(std::move(g));
    return {[t_shared, w](double t) { return interpolate(*t_shared, *w, t); },
            [t_shared, fs](double t) { return interpolate(*t_shared, *fs, t); },
            [t_shared, gs](double t) { return interpolate(*t_shared, *gs, t); }};
}

namespace {

using XYZState = std::array<double, 6>;  // X, log Y, Z as (re, im) pairs

struct DivergenceSignal {
    double time;
};

Complex simpson(const std::vector<Complex>& y, double h, std::size_t stride) {
    const std::size_t n = (y.size() - 1) / stride;
    Complex acc = y.front() + y[n * stride];
    for (std::size_t j = 1; j < n; ++j) acc += (j % 2 == 1 ? 4.0 : 2.0) * y[j * stride];
    return acc * (h * static_cast<double>(stride) / 3.0);
}

}  // namespace

XYZSolution solve_xyz(const QuadraticHamiltonian& H, double ta, double tb, const XYZOptions& options) {
    if (!std::isfinite(ta) || !std::isfinite(tb) || !(tb >= ta))
        throw DomainError("solve_xyz needs finite ta <= tb");
    if (options.mesh_intervals < 4 || options.mesh_intervals % 4 != 0)
        throw DomainError("mesh_intervals must be a positive multiple of 4");
    const std::size_t m = static_cast<std::size_t>(options.mesh_intervals);
    const double h = (tb - ta) / static_cast<double>(m);

    XYZSolution out;
    out.t.resize(m + 1);
    for (std::size_t j = 0; j <= m; ++j) out.t[j] = ta + h * static_cast<double>(j);
    out.t.back() = tb;
    out.X.assign(m + 1, Complex{});
    out.Y.assign(m + 1, Complex{1.0, 0.0});
    out.Z.assign(m + 1, Complex{});

    const double limit = options.blow_up;
    auto sys = [&H, limit](const XYZState& s, XYZState& ds, double t) {
        const Complex X{s[0], s[1]};
        const Complex Z{s[4], s[5]};
        if (!(std::abs(X) < limit)) throw DivergenceSignal{t};
        const double w = H.omega(t);
        const Complex f = H.f(t);
        const Complex g = H.g(t);
        const Complex rate = w + 4.0 * f * X;
        const Complex dX = -2.0 * kI * w * X - 4.0 * kI * f * X * X - kI * std::conj(f);
        const Complex dL = -kI * rate;
        const Complex dZ = -kI * rate * Z - kI * (std::conj(g) + 2.0 * g * X);
        ds = {dX.real(), dX.imag(), dL.real(), dL.imag(), dZ.real(), dZ.imag()};
    };

    if (m > 0 && tb > ta) {
        XYZState state{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
        double last_time = ta;
        auto observe = [&](const XYZState& s, double t) {
            const auto j = static_cast<std::size_t>(std::lround((t - ta) / h));
            const Complex X{s[0], s[1]};
            if (!std::isfinite(std::abs(X)) || !(std::abs(X) < limit)) throw DivergenceSignal{t};
            out.X[j] = X;
            out.Y[j] = std::exp(Complex{s[2], s[3]});
            out.Z[j] = {s[4], s[5]};
            last_time = t;
        };
        using Stepper = odeint::runge_kutta_dopri5<XYZState>;
        auto stepper = odeint::make_dense_output(options.tol.abs, options.tol.rel, Stepper());
        try {
            odeint::integrate_times(stepper, sys, state, out.t.begin(), out.t.end(), h / 4.0, observe,
                                    odeint::max_step_checker(1000000));
        } catch (const DivergenceSignal& d) {
            throw BlowUpError("Riccati solution X(t) diverges near t = " + std::to_string(d.time), d.time);
        } catch (const odeint::step_adjustment_error&) {
            throw BlowUpError("Riccati step size collapsed near t = " + std::to_string(last_time),
                              last_time);
        } catch (const odeint::no_progress_error&) {
            throw BlowUpError("Riccati integration stalled near t = " + std::to_string(last_time),
                              last_time);
        }
    }

    std::vector<Complex> i0(m + 1), i1(m + 1), i2(m + 1);
    for (std::size_t j = 0; j <= m; ++j) {
        const Complex f = H.f(out.t[j]);
        const Complex g = H.g(out.t[j]);
        const Complex X = out.X[j], Y = out.Y[j], Z = out.Z[j];
        i0[j] = f * (2.0 * X + Z * Z) + g * Z;
        i1[j] = 2.0 * f * Y * Z + g * Y;
        i2[j] = f * Y * Y;
    }
    double err = 0.0;
    double scale = 1.0;
    auto integrate = [&](const std::vector<Complex>& y) {
        const Complex fine = simpson(y, h, 1);
        const Complex coarse = simpson(y, h, 2);
        err = std::max(err, std::abs(fine - coarse) / 15.0);
        scale = std::max(scale, std::abs(fine));
        return fine;
    };
    out.sigma0 = integrate(i0);
    out.sigma1 = integrate(i1);
    out.sigma2 = integrate(i2);
    out.sigma_error = err;
    if (err > options.sigma_tolerance * scale)
        throw NumericalError("Sigma quadrature error " + std::to_string(err) +
                             " exceeds tolerance; increase mesh_intervals");
    return out;
}

Complex quadratic_propagator(Complex alpha_a, Complex alpha_b, const XYZSolution& xyz) {
    if (xyz.t.empty()) throw DomainError("empty XYZ solution");
    const Complex bc = std::conj(alpha_b);
    const Complex X = xyz.X.back(), Y = xyz.Y.back(), Z = xyz.Z.back();
    const Complex logF = -0.5 * (std::norm(alpha_b) + std::norm(alpha_a)) + Y * bc * alpha_a +
                         X * bc * bc + Z * bc;
    const Complex sigma = xyz.sigma0 + alpha_a * xyz.sigma1 + alpha_a * alpha_a * xyz.sigma2;
    return std::exp(logF - kI * sigma);
}

Complex dpa_propagator(Complex alpha_a, Complex alpha_b, double ta, double tb, double omega,
                       double kappa) {
    const double dt = tb - ta;
    const double r = 2.0 * kappa * dt;
    const double sech = 1.0 / std::cosh(r);
    const double th = std::tanh(r);
    const Complex bc = std::conj(alpha_b);
    const Complex exponent = -0.5 * (std::norm(alpha_b) + std::norm(alpha_a)) +
                             bc * alpha_a * std::exp(-kI * (omega * dt)) * sech -
                             0.5 * kI * bc * bc * std::exp(-2.0 * kI * (omega * tb)) * th -
                             0.5 * kI * alpha_a * alpha_a * std::exp(2.0 * kI * (omega * ta)) * th;
    return std::sqrt(sech) * std::exp(exponent);
}

namespace {

struct Moments {
    Complex mean;  // (1/pi) int beta |K|^2
    double norm;   // (1/pi) int |K|^2
};

Moments phase_space_moments(Complex alpha, const CoherentPropagator& K, Complex center, double s,
                            int order) {
    const GaussRule rule = gauss_hermite(order);
    Moments m{Complex{}, 0.0};
    const std::size_t n = rule.nodes.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const Complex beta = center + s * Complex{rule.nodes[i], rule.nodes[j]};
            const double w = rule.scaled_weights[i] * rule.scaled_weights[j];
            const double q = std::norm(K(beta, alpha)) * w;
            m.mean += beta * q;
            m.norm += q;
        }
    }
    const double jac = s * s / kPi;
    m.mean *= jac;
    m.norm *= jac;
    return m;
}

}  // namespace

Complex expectation_annihilation(const std::vector<PointMass>& P, const CoherentPropagator& K,
                                 const ExpectationOptions& options) {
    if (P.empty()) throw DomainError("P-function needs at least one point mass");
    if (!K) throw DomainError("no propagator supplied");
    if (!(options.scale >= 1.0)) throw DomainError("phase-space scale must be >= 1");
    if (options.initial_order < 2 || options.max_order < options.initial_order)
        throw DomainError("invalid Gauss-Hermite order range");
    double total_weight = 0.0;
    for (const auto& pm : P) {
        if (!(pm.weight >= 0.0) || !std::isfinite(std::abs(pm.alpha)))
            throw DomainError("point masses need finite alpha and non-negative weight");
        total_weight += pm.weight;
    }
    if (std::abs(total_weight - 1.0) > 1e-12) throw DomainError("point-mass weights must sum to 1");

    const double s = std::sqrt(options.scale);
    Complex result{};
    for (const auto& pm : P) {
        if (pm.weight == 0.0) continue;
        // Centre the rule on the bulk of |K|^2 before refining.
        Complex center{};
        for (int pass = 0; pass < 3; ++pass) {
            const Moments pilot = phase_space_moments(pm.alpha, K, center, s, options.initial_order);
            if (!(pilot.norm > 0.0)) break;
            center = pilot.mean / pilot.norm;
        }
        Complex previous = phase_space_moments(pm.alpha, K, center, s, options.initial_order).mean;
        Complex value = previous;
        bool converged = false;
        for (int order = 2 * options.initial_order; order <= options.max_order; order *= 2) {
            value = phase_space_moments(pm.alpha, K, center, s, order).mean;
            if (std::abs(value - previous) <= options.tolerance * std::max(1.0, std::abs(value))) {
                converged = true;
                break;
            }
            previous = value;
        }
        if (!converged)
            throw NumericalError("phase-space quadrature did not converge by order " +
                                 std::to_string(options.max_order));
        result += pm.weight * value;
    }
    return result;
}

CompositionEstimate dpa_composition_mc(Complex alpha_a, Complex alpha_b, double ta, double tc,
                                       double tb, double omega, double kappa,
                                       std::uint64_t samples, std::uint64_t seed, unsigned threads,
                                       unsigned shards) {
    if (!(ta <= tc && tc <= tb)) throw DomainError("composition needs ta <= tc <= tb");
    if (samples < 2) throw DomainError("composition needs at least two samples");
    if (shards == 0) throw DomainError("composition needs at least one shard");

    struct Partial {
        Complex sum;
        double sum_sq = 0.0;
        std::uint64_t count = 0;
    };
    std::vector<Partial> parts(shards);
    parallel_for(shards, threads == 0 ? default_thread_count() : threads, [&](std::size_t k) {
        const std::uint64_t count = samples / shards + (k < samples % shards ? 1 : 0);
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(k)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
        Partial p;
        for (std::uint64_t i = 0; i < count; ++i) {
            const Complex c{normal(rng), normal(rng)};
            const Complex v = dpa_propagator(c, alpha_b, tc, tb, omega, kappa) *
                              dpa_propagator(alpha_a, c, ta, tc, omega, kappa) *
                              std::exp(std::norm(c));
            p.sum += v;
            p.sum_sq += std::norm(v);
        }
        p.count = count;
        parts[k] = p;
    });

    Complex sum{};
    double sum_sq = 0.0;
    for (const auto& p : parts) {
        sum += p.sum;
        sum_sq += p.sum_sq;
    }
    const double n = static_cast<double>(samples);
    CompositionEstimate out;
    out.samples = samples;
    out.estimate = sum / n;
    const double var = std::max(0.0, (sum_sq / n - std::norm(out.estimate)) * n / (n - 1.0));
    out.standard_error = std::sqrt(var / n);
    out.direct = dpa_propagator(alpha_a, alpha_b, ta, tb, omega, kappa);
    out.relative_error = std::abs(out.estimate - out.direct) / std::abs(out.direct);
    return out;
}

}  // namespace feynpath
