#include "feynpath/potential.hpp"

// pchip.hpp in Boost 1.74 calls isnan unqualified
#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>

#include <cmath>
#include <limits>
#include <memory>

#include "feynpath/errors.hpp"

namespace feynpath {

std::string to_string(PotentialKind kind) {
    switch (kind) {
        case PotentialKind::free: return "free";
        case PotentialKind::harmonic: return "harmonic";
        case PotentialKind::quadratic: return "quadratic";
        case PotentialKind::double_well: return "double_well";
        case PotentialKind::tabulated: return "tabulated";
        case PotentialKind::general: return "general";
    }
    return "unknown";
}

PotentialModel PotentialModel::free() {
    PotentialModel p;
    p.kind_ = PotentialKind::free;
    p.value_ = [](double, double) { return 0.0; };
    p.derivative_ = [](double, double) { return 0.0; };
    p.quadratic_ = [](double) { return QuadraticCoefficients{}; };
    return p;
}

PotentialModel PotentialModel::harmonic(double mass, double omega) {
    if (!(mass > 0.0) || !(omega >= 0.0))
        throw DomainError("harmonic potential needs mass > 0 and omega >= 0");
    const double k = mass * omega * omega;
    PotentialModel p;
    p.kind_ = PotentialKind::harmonic;
    p.value_ = [k](double x, double) { return 0.5 * k * x * x; };
    p.derivative_ = [k](double x, double) { return k * x; };
    p.quadratic_ = [k](double) { return QuadraticCoefficients{0.5 * k, 0.0, 0.0}; };
    return p;
}

PotentialModel PotentialModel::quadratic(Coefficient a, Coefficient b, Coefficient c) {
    if (!a || !b || !c) throw DomainError("quadratic potential needs all three coefficients");
    PotentialModel p;
    p.kind_ = PotentialKind::quadratic;
    p.time_independent_ = false;
    p.value_ = [a, b, c](double x, double t) { return (a(t) * x + b(t)) * x + c(t); };
    p.derivative_ = [a, b](double x, double t) { return 2.0 * a(t) * x + b(t); };
    p.quadratic_ = [a, b, c](double t) { return QuadraticCoefficients{a(t), b(t), c(t)}; };
    return p;
}

PotentialModel PotentialModel::double_well(double depth, double a) {
    if (!(depth > 0.0)) throw DomainError("double well depth must be positive");
    PotentialModel p;
    p.kind_ = PotentialKind::double_well;
    const double a2 = a * a;
    p.value_ = [depth, a2](double x, double) {
        const double u = x * x - a2;
        return depth * u * u;
    };
    p.derivative_ = [depth, a2](double x, double) { return 4.0 * depth * x * (x * x - a2); };
    return p;
}

PotentialModel PotentialModel::tabulated(std::vector<double> xs, std::vector<double> vs) {
    if (xs.size() != vs.size() || xs.size() < 4)
        throw DomainError("tabulated potential needs at least 4 (x, V) pairs of equal length");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) throw DomainError("tabulated x values must increase strictly");
    const double lo = xs.front();
    const double hi = xs.back();
    using Spline = boost::math::interpolators::pchip<std::vector<double>>;
    auto spline = std::make_shared<Spline>(std::move(xs), std::move(vs));
    PotentialModel p;
    p.kind_ = PotentialKind::tabulated;
    p.value_ = [spline, lo, hi](double x, double) {
        if (x < lo || x > hi) return std::numeric_limits<double>::infinity();
        return (*spline)(x);
    };
    p.derivative_ = [spline, lo, hi](double x, double) {
        if (x < lo || x > hi) return 0.0;
        return spline->prime(x);
    };
    return p;
}

PotentialModel PotentialModel::general(Function value, Function derivative) {
    if (!value || !derivative) throw DomainError("general potential needs value and derivative");
    PotentialModel p;
    p.kind_ = PotentialKind::general;
    p.time_independent_ = false;
    p.value_ = std::move(value);
    p.derivative_ = std::move(derivative);
    return p;
}

QuadraticCoefficients PotentialModel::coefficients(double t) const {
    if (!quadratic_)
        throw DomainError("potential '" + to_string(kind_) + "' is not quadratic in x");
    return quadratic_(t);
}

PotentialModel PotentialModel::with_linear_term(double slope) const {
    if (slope == 0.0) return *this;
    PotentialModel p = *this;
    auto v = value_;
    auto d = derivative_;
    p.value_ = [v, slope](double x, double t) { return v(x, t) + slope * x; };
    p.derivative_ = [d, slope](double x, double t) { return d(x, t) + slope; };
    if (quadratic_) {
        auto q = quadratic_;
        p.quadratic_ = [q, slope](double t) {
            QuadraticCoefficients c = q(t);
            c.b += slope;
            return c;
        };
        if (kind_ == PotentialKind::free || kind_ == PotentialKind::harmonic)
            p.kind_ = PotentialKind::quadratic;
    }
    return p;
}

}  // namespace feynpath
