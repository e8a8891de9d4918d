#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "feynpath/blocking.hpp"
#include "feynpath/potential.hpp"

namespace feynpath {

// Closed imaginary-time path of M beads, hbar = k_B = 1. Bead M wraps to bead 0.
struct RingPolymer {
    std::vector<double> x;
    double dtau = 0.0;  // 1 / (M T)

    int beads() const { return static_cast<int>(x.size()); }
};

// Distinguishable particle in V(x) with an optional static field; the field
// enters as -q E x.
struct ThermalSystem {
    double mass = 1.0;
    PotentialModel potential = PotentialModel::harmonic(1.0, 1.0);
    double temperature = 1.0;
    double charge = 0.0;
    double field = 0.0;

    double energy(double x) const { return potential(x) - charge * field * x; }
    double energy_derivative(double x) const { return potential.derivative(x) - charge * field; }
    void validate() const;
};

RingPolymer make_ring(int beads, double temperature, double x0 = 0.0);

// sum_k [m (x_{k+1} - x_k)^2 / (2 dtau) + dtau U(x_k)]
double primitive_action(const RingPolymer& poly, const ThermalSystem& sys);

// Action change when bead k moves to x_new, everything else fixed.
double single_bead_action_change(const RingPolymer& poly, const ThermalSystem& sys, int k,
                                 double x_new);

// min(1, exp(-dS))
double metropolis_acceptance(double delta_action);

enum class MoveKind { single_bead, staging };

struct MoveConfig {
    MoveKind kind = MoveKind::staging;
    double width = 0.0;           // single-bead step; 0 picks sqrt(dtau / m)
    int segment = 0;              // staging length; 0 picks max(2, M / 4)
    bool centroid = true;         // whole-polymer shift once per sweep
    double centroid_width = 0.0;  // 0 picks sqrt(T / m)
    double target_acceptance = 0.5;
};

struct SweepStats {
    std::uint64_t proposed = 0;
    std::uint64_t accepted = 0;
    std::uint64_t centroid_proposed = 0;
    std::uint64_t centroid_accepted = 0;

    double acceptance() const {
        return proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
    }
    double centroid_acceptance() const {
        return centroid_proposed
                   ? static_cast<double>(centroid_accepted) / static_cast<double>(centroid_proposed)
                   : 0.0;
    }
};

// One sweep of M single-bead moves or M / segment staging moves, then an
// optional centroid shift. Move widths are read from `moves` as given.
SweepStats metropolis_sweep(RingPolymer& poly, const ThermalSystem& sys, std::mt19937_64& rng,
                            const MoveConfig& moves);

enum class Observable { potential_energy, total_energy_virial, mean_position, mean_square };

struct EstimatorResult {
    double mean = 0.0;
    double error = 0.0;
    double autocorrelation_time = 0.5;
    std::uint64_t samples = 0;
    bool trusted = true;  // every chain found a blocking plateau
};

struct PimcConfig {
    int beads = 64;
    std::uint64_t sweeps = 20000;   // measured sweeps per chain
    std::uint64_t burn_in = 2000;   // widths are tuned during burn-in only
    std::uint64_t thin = 1;
    MoveConfig moves;
    unsigned chains = 4;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    bool keep_trace = false;  // per-sweep samples of chain 0
};

struct PimcSample {
    std::uint64_t sweep = 0;
    double potential = 0.0;
    double virial_energy = 0.0;
    double position = 0.0;
    double square = 0.0;
};

struct PimcResult {
    EstimatorResult potential_energy;
    EstimatorResult total_energy;  // <U + x U'/2>, bead averaged
    EstimatorResult mean_position;
    EstimatorResult mean_square;
    double acceptance = 0.0;
    double centroid_acceptance = 0.0;
    double tuned_width = 0.0;
    double tuned_centroid_width = 0.0;
    std::vector<PimcSample> trace;

    const EstimatorResult& get(Observable o) const;
};

// Independent chains seeded from seed_seq{seed, chain}; merged in chain order.
PimcResult run_pimc(const ThermalSystem& sys, const PimcConfig& config);

EstimatorResult estimate(Observable observable, const ThermalSystem& sys, const PimcConfig& config);

struct PolarizabilityResult {
    double alpha = 0.0;  // from the smaller field
    double error = 0.0;
    double alpha_large = 0.0;  // from the larger field
    double error_large = 0.0;
    double nonlinearity = 0.0;  // |alpha_large - alpha| / |alpha|
};

// Central differences (<mu>_{+E} - <mu>_{-E}) / 2E with mu = q x at two field
// magnitudes. Throws FieldTooLargeError when the two differ by more than 5%
// and by more than three combined standard errors.
PolarizabilityResult polarizability_finite_field(const ThermalSystem& sys, double field_small,
                                                 double field_large, const PimcConfig& config);

}  // namespace feynpath
