#include "feynpath/kernels_exact.hpp"

#include <cmath>
#include <string>

#include "feynpath/errors.hpp"

namespace feynpath {

void ParticleParams::validate() const {
    if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("mass must be positive");
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw DomainError("hbar must be positive");
}

void OscillatorParams::validate() const {
    particle.validate();
    if (!(omega >= 0.0) || !std::isfinite(omega)) throw DomainError("omega must be >= 0");
}

namespace {

double checked_duration(const SpacetimeEndpoints& ends) {
    const double T = ends.duration();
    if (!(T > 0.0) || !std::isfinite(T))
        throw DomainError("kernel needs tb > ta, got T = " + std::to_string(T));
    return T;
}

void check_caustic(double phase) {
    const double n = std::round(phase / kPi);
    if (n >= 1.0 && std::abs(phase - n * kPi) <= 1e-12 * std::max(1.0, phase))
        throw CausticError("omega*T = " + std::to_string(phase) +
                           " is a caustic (multiple of pi)");
}

}  // namespace

Complex free_kernel(const SpacetimeEndpoints& ends, const ParticleParams& p) {
    p.validate();
    const double T = checked_duration(ends);
    const double d = ends.xb - ends.xa;
    const Complex pre = std::sqrt(Complex(p.mass, 0.0) / (2.0 * kPi * kI * p.hbar * T));
    return pre * std::exp(kI * (p.mass * d * d / (2.0 * p.hbar * T)));
}

double ho_action(const SpacetimeEndpoints& ends, const OscillatorParams& osc) {
    osc.validate();
    const double T = checked_duration(ends);
    const double m = osc.particle.mass;
    const double xa = ends.xa;
    const double xb = ends.xb;
    if (osc.omega == 0.0) return m * (xb - xa) * (xb - xa) / (2.0 * T);
    const double wt = osc.omega * T;
    check_caustic(wt);
    return m * osc.omega / (2.0 * std::sin(wt)) *
           ((xa * xa + xb * xb) * std::cos(wt) - 2.0 * xa * xb);
}

Complex ho_kernel(const SpacetimeEndpoints& ends, const OscillatorParams& osc) {
    osc.validate();
    if (osc.omega == 0.0) return free_kernel(ends, osc.particle);
    const double T = checked_duration(ends);
    const double wt = osc.omega * T;
    check_caustic(wt);
    const double m = osc.particle.mass;
    const double hbar = osc.particle.hbar;
    const double t_sinc = std::sin(wt) / osc.omega;  // T sinc(wT)
    const Complex pre = std::sqrt(Complex(m, 0.0) / (2.0 * kPi * kI * hbar * t_sinc));
    return pre * std::exp(kI * (ho_action(ends, osc) / hbar));
}

double snell_refract(double n_a, double n_b, double theta_a) {
    if (!(n_a > 0.0) || !(n_b > 0.0)) throw DomainError("refractive indices must be positive");
    if (!(theta_a >= 0.0) || !(theta_a < kPi / 2.0))
        throw DomainError("incidence angle must lie in [0, pi/2)");
    const double s = n_a * std::sin(theta_a) / n_b;
    if (s > 1.0)
        throw TotalInternalReflection("n_a sin(theta_a) / n_b = " + std::to_string(s) + " > 1");
    return std::asin(s);
}

FactorizationCheck quadratic_prefactor_check(const std::vector<KernelSample>& samples,
                                             double hbar, double tolerance) {
    if (samples.empty()) throw DomainError("no kernel samples");
    if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
    std::vector<Complex> f;
    f.reserve(samples.size());
    Complex mean{0.0, 0.0};
    for (const auto& s : samples) {
        f.push_back(s.kernel * std::exp(-kI * (s.classical_action / hbar)));
        mean += f.back();
    }
    mean /= static_cast<double>(f.size());
    FactorizationCheck out;
    out.prefactor = mean;
    const double scale = std::abs(mean);
    for (const auto& v : f)
        out.max_deviation = std::max(out.max_deviation,
                                     scale > 0.0 ? std::abs(v - mean) / scale : std::abs(v));
    out.constant = out.max_deviation < tolerance;
    return out;
}

}  // namespace feynpath
