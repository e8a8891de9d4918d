#include <cmath>
#include <functional>

#include "cli.hpp"
#include "feynpath/coherent.hpp"
#include "feynpath/errors.hpp"
#include "feynpath/grin.hpp"
#include "feynpath/kernels_exact.hpp"
#include "feynpath/lattice.hpp"
#include "feynpath/qed_media.hpp"

namespace feynpath::cli {

namespace {

SelfTestLine check(const std::string& name, double tolerance, const std::function<double()>& error) {
    SelfTestLine line{name, 0.0, tolerance, false};
    try {
        line.error = error();
        line.pass = std::isfinite(line.error) && line.error < tolerance;
    } catch (const std::exception&) {
        line.error = std::nan("");
    }
    return line;
}

}  // namespace

std::vector<SelfTestLine> self_test() {
    std::vector<SelfTestLine> lines;
    lines.push_back(check("free_kernel_origin", 1e-5, [] {
        const Complex k = free_kernel({0.0, 0.0, 0.0, 1.0});
        return std::abs(k - Complex{0.28209479177387814, -0.28209479177387814});
    }));
    lines.push_back(check("gaussian_recursion_free_n10", 1e-12, [] {
        const SpacetimeEndpoints e{-0.3, 0.7, 0.0, 1.0};
        const Complex k = lattice_kernel(e, {}, PotentialModel::free(), {10, 1.0},
                                         LatticeMethod::gaussian_recursion);
        return std::abs(k - free_kernel(e)) / std::abs(free_kernel(e));
    }));
    lines.push_back(check("grid_transfer_harmonic_n100", 1e-3, [] {
        const SpacetimeEndpoints e{0.2, -0.4, 0.0, 1.0};
        const Complex k = lattice_kernel(e, {}, PotentialModel::harmonic(1.0, 1.0), {100, 1.0},
                                         LatticeMethod::grid_transfer);
        const Complex exact = ho_kernel(e, {{}, 1.0});
        return std::abs(k - exact) / std::abs(exact);
    }));
    lines.push_back(check("double_slit_identity", 1e-12, [] {
        const DoubleSlitPattern p = double_slit_pattern(SlitGeometry{}, {-1.0, 0.0, 0.3, 1.2});
        double worst = 0.0;
        for (std::size_t i = 0; i < p.P.size(); ++i)
            worst = std::max(worst, std::abs(p.P[i] - p.P1[i] - p.P2[i] - p.cross[i]) / p.P1[i]);
        return worst;
    }));
    lines.push_back(check("grin_constant_maps_to_oscillator", 1e-8, [] {
        const double lb = 0.1;
        const GrinMedium med = GrinMedium::constant(1.0, 0.1, 2.0 * kPi * lb);
        const Complex k = grin_kernel(0.3, -0.5, 10.0, med);
        const Complex ho = ho_kernel({0.3, -0.5, 0.0, 10.0}, {{1.0, lb}, 0.1}) *
                           std::exp(kI * (med.k() * 10.0));
        return std::abs(k - ho) / std::abs(ho);
    }));
    lines.push_back(check("dpa_numeric_vs_closed", 1e-8, [] {
        const XYZSolution xyz = solve_xyz(QuadraticHamiltonian::dpa(1.0, 0.5), 0.0, 1.5);
        const Complex a{0.4, -0.2}, b{-0.3, 0.6};
        const Complex d = dpa_propagator(a, b, 0.0, 1.5, 1.0, 0.5);
        return std::abs(quadratic_propagator(a, b, xyz) - d) / std::abs(d);
    }));
    lines.push_back(check("spdc_unit_loss_value", 1e-5, [] {
        return std::abs(spdc_probability(0.0, 1.0, 1.0) - 0.39958);
    }));
    lines.push_back(check("emission_principal_root", 1e-12, [] {
        return std::abs(spontaneous_rate({0.0, 1.0, 1.0, 1.0}) - std::sqrt(0.5));
    }));
    lines.push_back(check("dielectric_static_limit", 1e-12, [] {
        EffectiveDielectricModel m;
        m.beta = 0.7;
        m.lambda_f = EffectiveDielectricModel::lorentz_damping(0.2);
        return std::abs(effective_dielectric(0.0, m) - Complex{1.7, 0.0});
    }));
    return lines;
}

}  // namespace feynpath::cli
