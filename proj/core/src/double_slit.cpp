#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

#include "feynpath/errors.hpp"
#include "feynpath/kernels_exact.hpp"
#include "feynpath/lattice.hpp"
#include "feynpath/parallel.hpp"

namespace feynpath {

double SlitGeometry::crossing_time() const {
    if (screen_time) return *screen_time;
    return total_time * (screen_z - source_z) / (detector_z - source_z);
}

void SlitGeometry::validate() const {
    if (!(total_time > 0.0)) throw DomainError("double slit needs a positive total time");
    if (!(source_z < screen_z && screen_z < detector_z))
        throw DomainError("double slit needs source_z < screen_z < detector_z");
    if (!(slit1.width > 0.0) || !(slit2.width > 0.0)) throw DomainError("slit widths must be positive");
    const double lo1 = slit1.center - slit1.width / 2.0, hi1 = slit1.center + slit1.width / 2.0;
    const double lo2 = slit2.center - slit2.width / 2.0, hi2 = slit2.center + slit2.width / 2.0;
    if (!(hi1 <= lo2 || hi2 <= lo1)) throw DomainError("slits overlap");
    const double tau = crossing_time();
    if (!(tau > 0.0 && tau < total_time))
        throw DomainError("screen crossing time must lie strictly inside (0, T)");
}

namespace {

Complex slit_amplitude(const Slit& slit, const SlitGeometry& g, double xb, double tau,
                       const ParticleParams& p, double tolerance) {
    if (!slit.open) return Complex{};
    const double T = g.total_time;
    auto integrand = [&](double xc) {
        const Complex leg2 = free_kernel(SpacetimeEndpoints{xc, xb, tau, T}, p);
        if (g.source == SourceModel::collimated) return leg2;
        return leg2 * free_kernel(SpacetimeEndpoints{g.source_x, xc, 0.0, tau}, p);
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double a = slit.center - slit.width / 2.0;
    const double b = slit.center + slit.width / 2.0;
    double err_re = 0.0, err_im = 0.0;
    const double re = GK::integrate([&](double x) { return integrand(x).real(); }, a, b, 20,
                                    tolerance, &err_re);
    const double im = GK::integrate([&](double x) { return integrand(x).imag(); }, a, b, 20,
                                    tolerance, &err_im);
    return {re, im};
}

}  // namespace

DoubleSlitPattern double_slit_pattern(const SlitGeometry& geom, const std::vector<double>& detector_x,
                                      const ParticleParams& p, double tolerance, unsigned threads) {
    geom.validate();
    p.validate();
    DoubleSlitPattern out;
    out.tau = geom.crossing_time();
    out.x = detector_x;
    const std::size_t n = detector_x.size();
    out.psi1.resize(n);
    out.psi2.resize(n);
    parallel_for(n, threads == 0 ? default_thread_count() : threads, [&](std::size_t i) {
        out.psi1[i] = slit_amplitude(geom.slit1, geom, detector_x[i], out.tau, p, tolerance);
        out.psi2[i] = slit_amplitude(geom.slit2, geom, detector_x[i], out.tau, p, tolerance);
    });
    out.P.resize(n);
    out.P1.resize(n);
    out.P2.resize(n);
    out.cross.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.P[i] = std::norm(out.psi1[i] + out.psi2[i]);
        out.P1[i] = std::norm(out.psi1[i]);
        out.P2[i] = std::norm(out.psi2[i]);
        out.cross[i] = 2.0 * (out.psi1[i] * std::conj(out.psi2[i])).real();
    }
    return out;
}

double fringe_visibility(const DoubleSlitPattern& pattern) {
    double cross = 0.0, incoherent = 0.0;
    for (std::size_t i = 0; i < pattern.P.size(); ++i) {
        cross = std::max(cross, std::abs(pattern.cross[i]));
        incoherent = std::max(incoherent, pattern.P1[i] + pattern.P2[i]);
    }
    return incoherent > 0.0 ? cross / incoherent : 0.0;
}

}  // namespace feynpath
