#include "feynpath/qed_media.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <string>

#include "feynpath/errors.hpp"

namespace feynpath {

double DispersiveMedium1D::delta_k() const {
    return kappa(omega_p).real() - kappa(omega_s).real() - kappa(omega_i).real();
}

double DispersiveMedium1D::loss() const { return kappa(omega_s).imag() + kappa(omega_i).imag(); }

void DispersiveMedium1D::validate() const {
    if (!kappa) throw DomainError("medium needs a wavevector function");
    if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("medium length must be positive");
    for (double w : {omega_p, omega_s, omega_i}) {
        const Complex k = kappa(w);
        if (!std::isfinite(k.real()) || !std::isfinite(k.imag()))
            throw DomainError("wavevector is not finite");
        if (k.imag() < 0.0) throw DomainError("gain medium: Im kappa must be >= 0");
    }
}

DispersiveMedium1D DispersiveMedium1D::from_mismatch(double delta_k, double loss, double length,
                                                     double k_signal) {
    if (!(loss >= 0.0)) throw DomainError("loss must be non-negative");
    DispersiveMedium1D m;
    m.length = length;
    m.omega_s = 1.0;
    m.omega_i = 1.0;
    m.omega_p = 2.0;
    const Complex leg{k_signal, 0.5 * loss};
    const double k_pump = 2.0 * k_signal + delta_k;
    m.kappa = [leg, k_pump](double w) { return w == 2.0 ? Complex{k_pump, 0.0} : leg; };
    m.validate();
    return m;
}

Complex green_1d(double x, double y, Complex kappa) {
    if (kappa == Complex{}) throw DomainError("Green's function needs kappa != 0");
    if (kappa.imag() < 0.0) throw DomainError("Green's function needs Im kappa >= 0");
    return std::exp(kI * kappa * std::abs(x - y)) / (2.0 * kI * kappa);
}

Complex green_1d(double x, double y, double omega, const DispersiveMedium1D& medium) {
    return green_1d(x, y, medium.kappa(omega));
}

double spdc_probability(double delta_k, double loss, double length) {
    if (!(length > 0.0)) throw DomainError("SPDC length must be positive");
    if (!(loss >= 0.0)) throw DomainError("SPDC loss must be non-negative");
    const double u = delta_k * length;
    const double v = loss * length;
    const double den = u * u + v * v;
    if (den == 0.0) return 1.0;
    const double a = -std::expm1(-v);
    const double s = std::sin(0.5 * u);
    return (a * a + 4.0 * std::exp(-v) * s * s) / den;
}

Complex biphoton_amplitude_numeric(double x, double y, const DispersiveMedium1D& medium,
                                   Complex pump_amplitude, Complex chi, double tolerance) {
    medium.validate();
    const double L = medium.length;
    if (x < L || y < L) throw DomainError("detectors must sit at or beyond the exit face z = L");
    if (chi == Complex{} || pump_amplitude == Complex{}) return Complex{};
    const double kp = medium.kappa(medium.omega_p).real();
    const Complex ks = medium.kappa(medium.omega_s);
    const Complex ki = medium.kappa(medium.omega_i);
    auto integrand = [&](double z) {
        return chi * pump_amplitude * std::exp(kI * (kp * z)) * green_1d(x, z, ks) * green_1d(z, y, ki);
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    double err_re = 0.0, err_im = 0.0;
    const double re = GK::integrate([&](double z) { return integrand(z).real(); }, 0.0, L, 15,
                                    tolerance, &err_re);
    const double im = GK::integrate([&](double z) { return integrand(z).imag(); }, 0.0, L, 15,
                                    tolerance, &err_im);
    const Complex value{re, im};
    const double scale = std::abs(chi * pump_amplitude) * L / (4.0 * std::abs(ks * ki));
    if (std::hypot(err_re, err_im) > 1e3 * tolerance * std::max(std::abs(value), scale))
        throw NumericalError("biphoton quadrature did not reach its tolerance");
    return value;
}

double biphoton_reference_scale(const DispersiveMedium1D& medium, Complex pump_amplitude, Complex chi) {
    medium.validate();
    const Complex ks = medium.kappa(medium.omega_s);
    const Complex ki = medium.kappa(medium.omega_i);
    return std::abs(chi * pump_amplitude) * medium.length / (4.0 * std::abs(ks * ki));
}

void EmitterEnvironment::validate() const {
    if (!std::isfinite(eps1) || !std::isfinite(eps2)) throw DomainError("dielectric must be finite");
    if (eps2 < 0.0) throw DomainError("emitter environment needs eps2 >= 0");
    if (!(gamma0 > 0.0)) throw DomainError("free-space rate must be positive");
    if (!(omega0 > 0.0)) throw DomainError("transition frequency must be positive");
}

double spontaneous_rate(const EmitterEnvironment& env) {
    env.validate();
    return env.gamma0 * std::sqrt(Complex{env.eps1, env.eps2}).real();
}

double imag_green_loop(const EmitterEnvironment& env) {
    env.validate();
    return env.omega0 / (4.0 * kPi) * std::sqrt(Complex{env.eps1, env.eps2}).real();
}

void EffectiveDielectricModel::validate() const {
    if (!(omega0 > 0.0)) throw DomainError("resonance frequency must be positive");
    if (!(beta >= 0.0)) throw DomainError("static polarisability must be non-negative");
    if (shape != 0.0 && shape != 1.0) throw DomainError("shape factor g must be 0 or 1");
    if (!(eps0 > 0.0)) throw DomainError("vacuum permittivity must be positive");
}

std::function<Complex(double)> EffectiveDielectricModel::lorentz_damping(double gamma) {
    if (!(gamma >= 0.0)) throw DomainError("damping must be non-negative");
    return [gamma](double W) { return W == 0.0 ? Complex{} : kI * (gamma / W); };
}

Complex effective_dielectric(double Omega, const EffectiveDielectricModel& model) {
    model.validate();
    if (model.shape == 0.0) return {1.0, 0.0};
    const Complex lambda = model.lambda_f ? model.lambda_f(Omega) : Complex{};
    const double w2 = model.omega0 * model.omega0;
    const Complex den = w2 - Omega * Omega * (1.0 + lambda);
    if (std::abs(den) < 1e-12 * w2)
        throw PoleError("effective dielectric function hits the resonance pole at Omega = " +
                        std::to_string(Omega));
    const Complex response = model.eps0 * w2 * model.beta / den;
    return 1.0 + model.shape * response / model.eps0;
}

}  // namespace feynpath
