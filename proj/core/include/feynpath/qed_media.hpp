#pragma once

#include <functional>

#include "feynpath/types.hpp"

namespace feynpath {

// 1D medium with complex wavevector kappa(omega) = k + i gamma and three
// interacting frequencies.
struct DispersiveMedium1D {
    std::function<Complex(double)> kappa;
    double length = 1.0;
    double omega_p = 2.0;
    double omega_s = 1.0;
    double omega_i = 1.0;

    // Re kappa(w_p) - Re kappa(w_s) - Re kappa(w_i)
    double delta_k() const;
    // Im kappa(w_s) + Im kappa(w_i)
    double loss() const;
    void validate() const;

    // Degenerate signal/idler at w = 1 with wavevector k_s, loss split evenly
    // between the legs, and the pump wavevector set to give delta_k.
    static DispersiveMedium1D from_mismatch(double delta_k, double loss, double length,
                                            double k_signal = 10.0);
};

// e^{i kappa |x - y|} / (2 i kappa). Needs Im kappa >= 0 and kappa != 0.
Complex green_1d(double x, double y, Complex kappa);
Complex green_1d(double x, double y, double omega, const DispersiveMedium1D& medium);

// |amplitude|^2 normalised to the lossless phase-matched value,
// -2 e^{-G L} [cos(dk L) - cosh(G L)] / (L^2 (dk^2 + G^2)),
// evaluated as [(1 - e^{-v})^2 + 4 e^{-v} sin^2(u/2)] / (u^2 + v^2).
double spdc_probability(double delta_k, double loss, double length);

// int_0^L chi A_p e^{i k_p z} G(x - z, w_s) G(z - y, w_i) dz for detectors at x, y >= L.
Complex biphoton_amplitude_numeric(double x, double y, const DispersiveMedium1D& medium,
                                   Complex pump_amplitude, Complex chi, double tolerance = 1e-12);

// |chi A_p L / (4 kappa_s kappa_i)|: the amplitude modulus at dk = 0, no loss,
// detectors on the exit face.
double biphoton_reference_scale(const DispersiveMedium1D& medium, Complex pump_amplitude,
                                Complex chi);

struct EmitterEnvironment {
    double eps1 = 1.0;
    double eps2 = 0.0;
    double gamma0 = 1.0;  // free-space rate
    double omega0 = 1.0;  // transition frequency

    void validate() const;
};

// Gamma0 Re sqrt(eps1 + i eps2), principal branch.
double spontaneous_rate(const EmitterEnvironment& env);

// Im G_zz(0, w0) = (w0 / 4 pi) Re sqrt(eps1 + i eps2)
double imag_green_loop(const EmitterEnvironment& env);

struct EffectiveDielectricModel {
    double omega0 = 1.0;
    double beta = 0.0;   // static polarisability
    double shape = 1.0;  // g(x): 1 inside the medium, 0 outside
    double eps0 = 1.0;
    std::function<Complex(double)> lambda_f;  // reservoir response; empty means 0

    void validate() const;

    // lambda_F(W) = i gamma / W (0 at W = 0), giving w0^2 - W^2 - i gamma W.
    static std::function<Complex(double)> lorentz_damping(double gamma);
};

// 1 + g Gt(W) / eps0 with Gt(W) = eps0 w0^2 beta / (w0^2 - W^2 (1 + lambda_F(W))).
// Throws PoleError when the denominator falls below 1e-12 w0^2.
Complex effective_dielectric(double Omega, const EffectiveDielectricModel& model);

}  // namespace feynpath
