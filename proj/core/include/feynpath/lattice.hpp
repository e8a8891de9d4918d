#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "feynpath/potential.hpp"
#include "feynpath/types.hpp"

namespace feynpath {

// N equal slices of a time interval of length T; epsilon = T / N.
struct TimeSlicing {
    int n = 1;
    double duration = 1.0;

    double epsilon() const { return duration / n; }
    // A(eps) = sqrt(2 pi i hbar eps / m)
    Complex normalization(const ParticleParams& p = {}) const;
    void validate() const;
};

struct SpatialGrid {
    double x_min = -1.0;
    double x_max = 1.0;
    int n_points = 3;

    double dx() const { return (x_max - x_min) / (n_points - 1); }
    double x(int i) const { return x_min + i * dx(); }
    double range() const { return x_max - x_min; }
    std::vector<double> points() const;
    void validate() const;
};

// Where the potential is sampled inside one slice.
//   midpoint:  eps V((x_{i-1} + x_i)/2, t_i)
//   trapezoid: eps [V(x_{i-1}, t_{i-1}) + V(x_i, t_i)] / 2
enum class SliceRule { midpoint, trapezoid };

enum class LatticeMethod { gaussian_recursion, grid_transfer };

// Matrix application for grid transfer. toeplitz_fft needs the trapezoid
// rule (the step matrix is diagonal x Toeplitz x diagonal there).
enum class TransferApply { automatic, dense, toeplitz_fft };

// Sum over slices of m (x_i - x_{i-1})^2 / (2 eps) - eps V; path holds x_0..x_N.
double lattice_action(const std::vector<double>& path, const PotentialModel& V,
                      const TimeSlicing& slicing, const ParticleParams& p = {},
                      SliceRule rule = SliceRule::midpoint, double ta = 0.0);

struct GridTransferOptions {
    SpatialGrid grid{-8.0, 8.0, 2048};
    TransferApply apply = TransferApply::automatic;
    // Momentum window of the one-slice kernel: flat below k_pass, cos^2
    // taper to zero at k_stop. Zero selects 2 m L / (hbar T) and 5/3 of it.
    double k_pass = 0.0;
    double k_stop = 0.0;
    // Complex absorbing layer at both grid ends, exp(-eta eps s^4) per slice
    // with s the fractional depth. Zero selects 3/16 of the range and eta T = 200.
    double absorber_width = 0.0;
    double absorber_strength = 0.0;
    unsigned threads = 0;  // 0: default_thread_count()
};

struct GridTransferReport {
    double k_pass = 0.0;
    double k_stop = 0.0;
    double absorber_width = 0.0;
    double absorber_strength = 0.0;
    // Largest fraction of |psi|^2 inside the absorbing layers before the last slice.
    double boundary_fraction = 0.0;
    TransferApply apply = TransferApply::dense;
};

struct LatticeOptions {
    SliceRule rule = SliceRule::trapezoid;
    GridTransferOptions grid;
};

// Time-sliced kernel. gaussian_recursion integrates the N-1 intermediate
// Gaussians exactly (V must be quadratic in x); grid_transfer multiplies N
// one-slice kernel matrices on the grid.
Complex lattice_kernel(const SpacetimeEndpoints& ends, const ParticleParams& p,
                       const PotentialModel& V, const TimeSlicing& slicing,
                       LatticeMethod method, const LatticeOptions& options = {});

// Grid transfer for many (xa, xb) pairs sharing one set of slice matrices.
std::vector<Complex> grid_transfer_kernels(const std::vector<std::pair<double, double>>& pairs,
                                           double ta, const ParticleParams& p,
                                           const PotentialModel& V, const TimeSlicing& slicing,
                                           SliceRule rule, const GridTransferOptions& options,
                                           GridTransferReport* report = nullptr);

// K(xb, xa; T)
using KernelEvaluator = std::function<Complex(double xb, double xa, double T)>;

KernelEvaluator free_evaluator(const ParticleParams& p = {});
KernelEvaluator ho_evaluator(const OscillatorParams& osc);

struct EvolveResult {
    std::vector<Complex> psi;
    double norm_before = 0.0;
    double norm_after = 0.0;
    bool leakage_warning = false;  // norm changed by more than 1%
};

// psi_b(x_b) = sum_a K(x_b, x_a; T) psi_a(x_a) dx on the grid. Checks the
// sampling bound dx < pi hbar T / (m range).
EvolveResult evolve_wavefunction(const SpatialGrid& grid, const std::vector<Complex>& psi_a,
                                 const KernelEvaluator& kernel, double T,
                                 const ParticleParams& p = {}, unsigned threads = 0);

struct Slit {
    double center = 0.0;
    double width = 0.1;
    bool open = true;
};

enum class SourceModel { point, collimated };

// Source at (source_z, source_x), screen with slits at screen_z, detector
// plane at detector_z. Free flight with total time T; the screen is crossed at
// tau = T (screen_z - source_z) / (detector_z - source_z) unless screen_time is set.
struct SlitGeometry {
    double source_x = 0.0;
    double source_z = 0.0;
    double screen_z = 1.0;
    double detector_z = 2.0;
    Slit slit1{-0.5, 0.1};
    Slit slit2{0.5, 0.1};
    double total_time = 2.0;
    std::optional<double> screen_time;
    SourceModel source = SourceModel::point;

    double crossing_time() const;
    void validate() const;
};

struct DoubleSlitPattern {
    std::vector<double> x;
    std::vector<Complex> psi1;
    std::vector<Complex> psi2;
    std::vector<double> P;
    std::vector<double> P1;
    std::vector<double> P2;
    std::vector<double> cross;  // 2 Re(psi1 conj(psi2))
    double tau = 0.0;
};

DoubleSlitPattern double_slit_pattern(const SlitGeometry& geom, const std::vector<double>& detector_x,
                                      const ParticleParams& p = {}, double tolerance = 1e-13,
                                      unsigned threads = 0);

// max |cross| / max (P1 + P2)
double fringe_visibility(const DoubleSlitPattern& pattern);

}  // namespace feynpath
