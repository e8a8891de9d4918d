#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "feynpath/coherent.hpp"
#include "feynpath/errors.hpp"
#include "feynpath/gauss_hermite.hpp"

using namespace feynpath;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

// Truncated Fock-space oracle: RK4 on i dpsi/dt = H(t) psi, then <alpha_b|psi>.
struct FockOracle {
    int dim = 70;
    std::function<double(double)> omega;
    std::function<Complex(double)> f;
    std::function<Complex(double)> g;

    std::vector<Complex> apply(const std::vector<Complex>& c, double t) const {
        const double w = omega(t);
        const Complex ft = f(t), gt = g(t);
        std::vector<Complex> out(c.size());
        for (int n = 0; n < dim; ++n) {
            Complex v = w * n * c[n];
            if (n + 2 < dim) v += ft * std::sqrt((n + 1.0) * (n + 2.0)) * c[n + 2];
            if (n >= 2) v += std::conj(ft) * std::sqrt(n * (n - 1.0)) * c[n - 2];
            if (n + 1 < dim) v += gt * std::sqrt(n + 1.0) * c[n + 1];
            if (n >= 1) v += std::conj(gt) * std::sqrt(static_cast<double>(n)) * c[n - 1];
            out[n] = -kI * v;
        }
        return out;
    }

    std::vector<Complex> coherent(Complex alpha) const {
        std::vector<Complex> c(dim);
        Complex term = std::exp(-0.5 * std::norm(alpha));
        for (int n = 0; n < dim; ++n) {
            c[n] = term;
            term *= alpha / std::sqrt(n + 1.0);
        }
        return c;
    }

    Complex propagator(Complex alpha_a, Complex alpha_b, double ta, double tb, int steps = 4000) const {
        auto psi = coherent(alpha_a);
        const double h = (tb - ta) / steps;
        auto axpy = [](const std::vector<Complex>& x, const std::vector<Complex>& y, double s) {
            std::vector<Complex> r(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + s * y[i];
            return r;
        };
        for (int k = 0; k < steps; ++k) {
            const double t = ta + k * h;
            const auto k1 = apply(psi, t);
            const auto k2 = apply(axpy(psi, k1, h / 2), t + h / 2);
            const auto k3 = apply(axpy(psi, k2, h / 2), t + h / 2);
            const auto k4 = apply(axpy(psi, k3, h), t + h);
            for (int n = 0; n < dim; ++n) psi[n] += h / 6.0 * (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]);
        }
        const auto b = coherent(alpha_b);
        Complex overlap{};
        for (int n = 0; n < dim; ++n) overlap += std::conj(b[n]) * psi[n];
        return overlap;
    }
};

}  // namespace

TEST(SolveXYZ, FreeRotation) {
    const double w = 1.7, ta = 0.3;
    const XYZSolution s = solve_xyz(QuadraticHamiltonian::constant(w, {}, {}), ta, 2.3);
    for (std::size_t i = 0; i < s.t.size(); ++i) {
        EXPECT_EQ(s.X[i], Complex{});
        EXPECT_EQ(s.Z[i], Complex{});
        EXPECT_LT(std::abs(s.Y[i] - std::exp(-kI * (w * (s.t[i] - ta)))), 1e-10);
    }
    EXPECT_EQ(s.sigma1, Complex{});
    EXPECT_EQ(s.sigma2, Complex{});
}

TEST(SolveXYZ, AmplifierClosedForms) {
    const double w = 1.0, kappa = 0.5, ta = 0.2;
    const XYZSolution s = solve_xyz(QuadraticHamiltonian::dpa(w, kappa), ta, ta + 4.0);  // kappa dt up to 2
    double worst = 0.0;
    for (std::size_t i = 0; i < s.t.size(); ++i) {
        const double t = s.t[i], u = 2.0 * kappa * (t - ta);
        const Complex X = std::exp(-2.0 * kI * w * t) * std::tanh(u) / (2.0 * kI);
        const Complex Y = std::exp(-kI * (w * (t - ta))) / std::cosh(u);
        worst = std::max({worst, std::abs(s.X[i] - X), std::abs(s.Y[i] - Y), std::abs(s.Z[i])});
    }
    EXPECT_LT(worst, 1e-8);
    EXPECT_EQ(s.X.front(), Complex{});
    EXPECT_EQ(s.Y.front(), Complex(1.0, 0.0));
}

TEST(SolveXYZ, RiccatiResidual) {
    const auto H = QuadraticHamiltonian([](double t) { return 1.0 + 0.3 * std::cos(t); },
                                        [](double t) { return Complex{0.2 * t, 0.1}; },
                                        [](double t) { return Complex{0.0, 0.4 * std::sin(2.0 * t)}; });
    const XYZSolution s = solve_xyz(H, 0.0, 2.0);
    const double h = s.t[1] - s.t[0];
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < s.t.size(); ++i) {
        const double t = s.t[i];
        const Complex dX = (s.X[i + 1] - s.X[i - 1]) / (2.0 * h);
        const Complex rhs = -2.0 * kI * H.omega(t) * s.X[i] - 4.0 * kI * H.f(t) * s.X[i] * s.X[i] -
                            kI * std::conj(H.f(t));
        worst = std::max(worst, std::abs(dX - rhs));
    }
    EXPECT_LT(worst, 1e-6);
}

TEST(SolveXYZ, BlowUpReportsTime) {
    XYZOptions opt;
    opt.blow_up = 0.2;  // |X| = tanh(2 kappa t) / 2 crosses 0.2 at atanh(0.4) / (2 kappa)
    try {
        solve_xyz(QuadraticHamiltonian::dpa(1.0, 1.0), 0.0, 2.0, opt);
        FAIL() << "expected BlowUpError";
    } catch (const BlowUpError& e) {
        EXPECT_NEAR(e.time(), std::atanh(0.4) / 2.0, 1e-2);
    }
}

TEST(SolveXYZ, Validation) {
    XYZOptions opt;
    opt.mesh_intervals = 10;
    EXPECT_THROW(solve_xyz(QuadraticHamiltonian::dpa(1.0, 0.1), 0.0, 1.0, opt), DomainError);
    EXPECT_THROW(solve_xyz(QuadraticHamiltonian::dpa(1.0, 0.1), 1.0, 0.0), DomainError);
    EXPECT_THROW(QuadraticHamiltonian::tabulated({0.0}, {1.0}, {Complex{}}, {Complex{}}), DomainError);
}

TEST(QuadraticPropagator, MatchesFockSpaceConstant) {
    const double w = 0.8;
    const Complex f{0.15, -0.05}, g{0.2, 0.3};
    const XYZSolution s = solve_xyz(QuadraticHamiltonian::constant(w, f, g), 0.0, 1.5);
    FockOracle fock{70, [=](double) { return w; }, [=](double) { return f; }, [=](double) { return g; }};
    for (auto [a, b] : std::vector<std::pair<Complex, Complex>>{{{0.3, -0.2}, {0.5, 0.4}}, {{-0.6, 0.1}, {0.0, -0.7}}}) {
        const Complex ref = fock.propagator(a, b, 0.0, 1.5);
        EXPECT_LT(rel(quadratic_propagator(a, b, s), ref), 1e-8);
    }
}

TEST(QuadraticPropagator, MatchesFockSpaceTimeDependent) {
    auto w = [](double t) { return 1.0 + 0.3 * std::cos(t); };
    auto f = [](double t) { return Complex{0.2 * t, 0.1}; };
    auto g = [](double t) { return Complex{0.1, 0.4 * std::sin(2.0 * t)}; };
    const XYZSolution s = solve_xyz(QuadraticHamiltonian(w, f, g), 0.5, 2.0);
    FockOracle fock{70, w, f, g};
    const Complex a{0.4, 0.3}, b{-0.2, 0.6};
    EXPECT_LT(rel(quadratic_propagator(a, b, s), fock.propagator(a, b, 0.5, 2.0)), 1e-8);
}

TEST(QuadraticPropagator, TabulatedCoefficients) {
    std::vector<double> ts, ws;
    std::vector<Complex> fs, gs;
    for (int i = 0; i <= 2000; ++i) {
        const double t = 1.5 * i / 2000.0;
        ts.push_back(t);
        ws.push_back(1.0 + 0.3 * std::cos(t));
        fs.emplace_back(0.2 * t, 0.1);
        gs.emplace_back(0.1, 0.4 * std::sin(2.0 * t));
    }
    const auto tab = QuadraticHamiltonian::tabulated(ts, ws, fs, gs);
    EXPECT_DOUBLE_EQ(tab.omega(9.0), ws.back());
    const auto exact = QuadraticHamiltonian([](double t) { return 1.0 + 0.3 * std::cos(t); },
                                            [](double t) { return Complex{0.2 * t, 0.1}; },
                                            [](double t) { return Complex{0.1, 0.4 * std::sin(2.0 * t)}; });
    const Complex a{0.4, 0.3}, b{-0.2, 0.6};
    const Complex k_tab = quadratic_propagator(a, b, solve_xyz(tab, 0.0, 1.5));
    const Complex k_exact = quadratic_propagator(a, b, solve_xyz(exact, 0.0, 1.5));
    EXPECT_LT(rel(k_tab, k_exact), 1e-5);
}

TEST(QuadraticPropagator, AgreesWithAmplifierClosedForm) {
    const Complex a{0.4, -0.2}, b{-0.3, 0.6};
    for (double kappa : {0.0, 0.3, 1.0})
        for (double dt : {0.0, 0.7, 2.0}) {
            const XYZSolution s = solve_xyz(QuadraticHamiltonian::dpa(1.2, kappa), 0.5, 0.5 + dt);
            const Complex d = dpa_propagator(a, b, 0.5, 0.5 + dt, 1.2, kappa);
            EXPECT_LT(rel(quadratic_propagator(a, b, s), d), 1e-8) << kappa << " " << dt;
        }
}

TEST(QuadraticPropagator, FullRotation) {
    const Complex alpha{0.8, -0.5};
    const XYZSolution s = solve_xyz(QuadraticHamiltonian::constant(1.0, {}, {}), 0.0, 2.0 * kPi);
    EXPECT_NEAR(std::abs(quadratic_propagator(alpha, alpha, s)), 1.0, 1e-10);
}

TEST(DpaPropagator, ZeroGainIsRotatingOverlap) {
    const Complex a{0.3, 0.9}, b{-0.4, 0.2};
    const double w = 1.3, dt = 0.8;
    const Complex expected = std::exp(-0.5 * (std::norm(a) + std::norm(b)) + std::conj(b) * a * std::exp(-kI * (w * dt)));
    EXPECT_LT(rel(dpa_propagator(a, b, 0.1, 0.1 + dt, w, 0.0), expected), 1e-14);
}

TEST(DpaPropagator, VacuumPersistence) {
    const double kappa = 0.4, dt = 1.1;
    const Complex k = dpa_propagator({}, {}, 0.0, dt, 1.0, kappa);
    EXPECT_NEAR(std::norm(k), 1.0 / std::cosh(2.0 * kappa * dt), 1e-14);
}

TEST(DpaPropagator, BoundedAtZeroGain) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        const Complex a{u(rng), u(rng)}, b{u(rng), u(rng)};
        EXPECT_LE(std::abs(dpa_propagator(a, b, 0.0, std::abs(u(rng)), 1.0, 0.0)), 1.0 + 1e-15);
    }
}

TEST(DpaPropagator, HermiticityAtZeroFrequency) {
    for (double re : {-0.5, 0.7})
        for (double im : {-0.3, 0.4}) {
            const Complex a{re, im}, b{im, -re};
            // <b|U|a> = conj(<a|U^dag|b>), and U^dag is U with kappa -> -kappa at omega = 0
            const Complex k1 = dpa_propagator(a, b, 0.0, 0.9, 0.0, 0.6);
            const Complex k2 = dpa_propagator(b, a, 0.0, 0.9, 0.0, -0.6);
            EXPECT_LT(rel(k1, std::conj(k2)), 1e-14);
        }
}

TEST(Composition, MonteCarloAgreesAndIsDeterministic) {
    const Complex a{0.3, -0.1}, b{0.2, 0.4};
    const auto e1 = dpa_composition_mc(a, b, 0.0, 0.6, 1.2, 1.0, 0.25, 200000, 42, 1);
    const auto e3 = dpa_composition_mc(a, b, 0.0, 0.6, 1.2, 1.0, 0.25, 200000, 42, 3);
    EXPECT_EQ(e1.estimate, e3.estimate);
    EXPECT_EQ(e1.standard_error, e3.standard_error);
    EXPECT_LT(std::abs(e1.estimate - e1.direct), 4.0 * e1.standard_error);
    EXPECT_LT(e1.relative_error, 1e-2);
    EXPECT_EQ(e1.samples, 200000u);
    const auto other = dpa_composition_mc(a, b, 0.0, 0.6, 1.2, 1.0, 0.25, 200000, 43, 1);
    EXPECT_NE(other.estimate, e1.estimate);
}

TEST(GaussHermite, MomentsExact) {
    const GaussRule r = gauss_hermite(20);
    for (int k = 0; k < 20; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 2 * k);
        EXPECT_NEAR(s / std::tgamma(k + 0.5), 1.0, 1e-12) << k;
    }
}

TEST(GaussHermite, LargeOrder) {
    const GaussRule r = gauss_hermite(256);
    ASSERT_EQ(r.nodes.size(), 256u);
    double s = 0.0;
    for (double w : r.weights) s += w;
    EXPECT_NEAR(s, std::sqrt(kPi), 1e-13);
    for (std::size_t i = 0; i < 128; ++i) EXPECT_NEAR(r.nodes[i], -r.nodes[255 - i], 1e-12);
    // int cos(x) e^{-x^2} = sqrt(pi) e^{-1/4}
    double c = 0.0;
    for (std::size_t i = 0; i < 256; ++i) c += r.scaled_weights[i] * std::exp(-r.nodes[i] * r.nodes[i]) * std::cos(r.nodes[i]);
    EXPECT_NEAR(c, std::sqrt(kPi) * std::exp(-0.25), 1e-13);
    EXPECT_THROW(gauss_hermite(0), DomainError);
    EXPECT_THROW(gauss_hermite(257), DomainError);
}

TEST(Expectation, VacuumNoGain) {
    const double w = 1.0, t = 0.8;
    const CoherentPropagator K = [&](Complex b, Complex a) { return dpa_propagator(a, b, 0.0, t, w, 0.0); };
    EXPECT_LT(std::abs(expectation_annihilation({{Complex{}, 1.0}}, K)), 1e-12);
}

TEST(Expectation, RotatingPointMass) {
    const double w = 1.4, t = 0.9;
    const Complex a0{0.7, -0.3};
    const CoherentPropagator K = [&](Complex b, Complex a) { return dpa_propagator(a, b, 0.0, t, w, 0.0); };
    EXPECT_LT(std::abs(expectation_annihilation({{a0, 1.0}}, K) - a0 * std::exp(-kI * (w * t))), 1e-6);
}

TEST(Expectation, AmplifierMatchesHeisenbergOde) {
    // omega = 0: d<a>/dt = -2 i kappa <a>*, integrated by RK4
    const double kappa = 0.3, t = 1.5;
    auto heisenberg = [&](Complex a) {
        const int n = 10000;
        const double h = t / n;
        auto f = [&](Complex x) { return -2.0 * kI * kappa * std::conj(x); };
        for (int i = 0; i < n; ++i) {
            const Complex k1 = f(a), k2 = f(a + 0.5 * h * k1), k3 = f(a + 0.5 * h * k2), k4 = f(a + h * k3);
            a += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        return a;
    };
    const CoherentPropagator K = [&](Complex b, Complex a) { return dpa_propagator(a, b, 0.0, t, 0.0, kappa); };
    ExpectationOptions opt;
    opt.scale = std::cosh(2.0 * kappa * t);
    const Complex a0{0.8, 0.0};
    const Complex ref = heisenberg(a0);
    EXPECT_NEAR(std::abs(ref - (a0 * std::cosh(2.0 * kappa * t) - kI * std::conj(a0) * std::sinh(2.0 * kappa * t))), 0.0, 1e-10);
    EXPECT_LT(rel(expectation_annihilation({{a0, 1.0}}, K, opt), ref), 1e-3);

    const std::vector<PointMass> mix{{{0.5, 0.2}, 0.25}, {{-0.3, 0.6}, 0.75}};
    const Complex mix_ref = 0.25 * heisenberg({0.5, 0.2}) + 0.75 * heisenberg({-0.3, 0.6});
    EXPECT_LT(rel(expectation_annihilation(mix, K, opt), mix_ref), 1e-3);
}

TEST(Expectation, Validation) {
    const CoherentPropagator K = [](Complex b, Complex a) { return dpa_propagator(a, b, 0.0, 1.0, 1.0, 0.0); };
    EXPECT_THROW(expectation_annihilation({}, K), DomainError);
    EXPECT_THROW(expectation_annihilation({{Complex{}, 0.5}}, K), DomainError);
}
