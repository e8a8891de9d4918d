#pragma once

#include <functional>
#include <string>
#include <vector>

namespace feynpath {

// V(x,t) = a(t) x^2 + b(t) x + c(t)
struct QuadraticCoefficients {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

enum class PotentialKind { free, harmonic, quadratic, double_well, tabulated, general };

std::string to_string(PotentialKind kind);

// One-dimensional potential V(x,t) with an analytic-form tag. Models that are
// quadratic in x expose their coefficients for exact Gaussian slicing.
class PotentialModel {
public:
    using Function = std::function<double(double x, double t)>;
    using Coefficient = std::function<double(double t)>;

    static PotentialModel free();
    // (1/2) m omega^2 x^2
    static PotentialModel harmonic(double mass, double omega);
    static PotentialModel quadratic(Coefficient a, Coefficient b, Coefficient c);
    // depth * (x^2 - a^2)^2
    static PotentialModel double_well(double depth, double a);
    // Monotone cubic (PCHIP) through (x_i, V_i); infinite outside the table.
    static PotentialModel tabulated(std::vector<double> xs, std::vector<double> vs);
    static PotentialModel general(Function value, Function derivative);

    double operator()(double x, double t = 0.0) const { return value_(x, t); }
    // dV/dx
    double derivative(double x, double t = 0.0) const { return derivative_(x, t); }

    PotentialKind kind() const { return kind_; }
    bool is_quadratic() const { return static_cast<bool>(quadratic_); }
    // Throws DomainError when the model is not quadratic in x.
    QuadraticCoefficients coefficients(double t = 0.0) const;
    bool time_independent() const { return time_independent_; }

    // V(x,t) + slope * x, e.g. slope = -qE for a static field.
    PotentialModel with_linear_term(double slope) const;

private:
    PotentialKind kind_ = PotentialKind::free;
    Function value_;
    Function derivative_;
    std::function<QuadraticCoefficients(double)> quadratic_;
    bool time_independent_ = true;
};

}  // namespace feynpath
