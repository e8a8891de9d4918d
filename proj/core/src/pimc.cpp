#include "feynpath/pimc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "feynpath/errors.hpp"
#include "feynpath/parallel.hpp"

namespace feynpath {

void ThermalSystem::validate() const {
    if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("mass must be positive");
    if (!(temperature > 0.0) || !std::isfinite(temperature))
        throw DomainError("temperature must be positive");
    if (!std::isfinite(charge) || !std::isfinite(field))
        throw DomainError("charge and field must be finite");
}

RingPolymer make_ring(int beads, double temperature, double x0) {
    if (beads < 2) throw DomainError("ring polymer needs at least two beads");
    if (!(temperature > 0.0)) throw DomainError("temperature must be positive");
    RingPolymer poly;
    poly.x.assign(static_cast<std::size_t>(beads), x0);
    poly.dtau = 1.0 / (beads * temperature);
    return poly;
}

double primitive_action(const RingPolymer& poly, const ThermalSystem& sys) {
    const std::size_t M = poly.x.size();
    double spring = 0.0;
    double potential = 0.0;
    for (std::size_t k = 0; k < M; ++k) {
        const double d = poly.x[(k + 1) % M] - poly.x[k];
        spring += d * d;
        potential += sys.energy(poly.x[k]);
    }
    return sys.mass * spring / (2.0 * poly.dtau) + poly.dtau * potential;
}

double single_bead_action_change(const RingPolymer& poly, const ThermalSystem& sys, int k,
                                 double x_new) {
    const int M = poly.beads();
    const double prev = poly.x[static_cast<std::size_t>((k + M - 1) % M)];
    const double next = poly.x[static_cast<std::size_t>((k + 1) % M)];
    const double x = poly.x[static_cast<std::size_t>(k)];
    const double spring = (x_new - prev) * (x_new - prev) + (next - x_new) * (next - x_new) -
                          (x - prev) * (x - prev) - (next - x) * (next - x);
    return sys.mass * spring / (2.0 * poly.dtau) + poly.dtau * (sys.energy(x_new) - sys.energy(x));
}

double metropolis_acceptance(double delta_action) {
    if (std::isnan(delta_action)) return 0.0;
    return delta_action <= 0.0 ? 1.0 : std::exp(-delta_action);
}

namespace {

bool accept(double delta_action, std::mt19937_64& rng) {
    if (delta_action <= 0.0) return true;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return u(rng) < metropolis_acceptance(delta_action);
}

int staging_length(const MoveConfig& moves, int M) {
    const int l = moves.segment > 0 ? moves.segment : std::max(2, M / 4);
    return std::clamp(l, 2, M);
}

}  // namespace

SweepStats metropolis_sweep(RingPolymer& poly, const ThermalSystem& sys, std::mt19937_64& rng,
                            const MoveConfig& moves) {
    const int M = poly.beads();
    if (M < 2) throw DomainError("ring polymer needs at least two beads");
    SweepStats stats;
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    if (moves.kind == MoveKind::single_bead) {
        const double w = moves.width > 0.0 ? moves.width : std::sqrt(poly.dtau / sys.mass);
        for (int k = 0; k < M; ++k) {
            const double x_new = poly.x[static_cast<std::size_t>(k)] + w * unit(rng);
            ++stats.proposed;
            if (accept(single_bead_action_change(poly, sys, k, x_new), rng)) {
                poly.x[static_cast<std::size_t>(k)] = x_new;
                ++stats.accepted;
            }
        }
    } else {
        const int l = staging_length(moves, M);
        const int moves_per_sweep = std::max(1, (M + l - 2) / (l - 1));
        std::uniform_int_distribution<int> start_dist(0, M - 1);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::vector<double> saved(static_cast<std::size_t>(l - 1));
        for (int mv = 0; mv < moves_per_sweep; ++mv) {
            const int j = start_dist(rng);
            const double end = poly.x[static_cast<std::size_t>((j + l) % M)];
            double old_u = 0.0;
            double new_u = 0.0;
            double prev = poly.x[static_cast<std::size_t>(j)];
            for (int s = 1; s < l; ++s) {
                const auto i = static_cast<std::size_t>((j + s) % M);
                saved[static_cast<std::size_t>(s - 1)] = poly.x[i];
                old_u += sys.energy(poly.x[i]);
                const double r = l - s + 1;  // links left to the fixed end
                const double mean = prev + (end - prev) / r;
                const double sd = std::sqrt(poly.dtau / sys.mass * (r - 1.0) / r);
                poly.x[i] = mean + sd * normal(rng);
                new_u += sys.energy(poly.x[i]);
                prev = poly.x[i];
            }
            ++stats.proposed;
            if (accept(poly.dtau * (new_u - old_u), rng)) {
                ++stats.accepted;
            } else {
                for (int s = 1; s < l; ++s)
                    poly.x[static_cast<std::size_t>((j + s) % M)] = saved[static_cast<std::size_t>(s - 1)];
            }
        }
    }

    if (moves.centroid) {
        const double c = moves.centroid_width > 0.0 ? moves.centroid_width
                                                    : std::sqrt(sys.temperature / sys.mass);
        const double delta = c * unit(rng);
        double du = 0.0;
        for (double x : poly.x) du += sys.energy(x + delta) - sys.energy(x);
        ++stats.centroid_proposed;
        if (accept(poly.dtau * du, rng)) {
            for (double& x : poly.x) x += delta;
            ++stats.centroid_accepted;
        }
    }
    return stats;
}

const EstimatorResult& PimcResult::get(Observable o) const {
    switch (o) {
        case Observable::potential_energy: return potential_energy;
        case Observable::total_energy_virial: return total_energy;
        case Observable::mean_position: return mean_position;
        case Observable::mean_square: return mean_square;
    }
    return potential_energy;
}

namespace {

struct ChainOutput {
    std::vector<double> potential, virial, position, square;
    std::vector<PimcSample> trace;
    SweepStats stats;
    double width = 0.0;
    double centroid_width = 0.0;
};

ChainOutput run_chain(const ThermalSystem& sys, const PimcConfig& config, unsigned chain) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                      static_cast<std::uint32_t>(config.seed >> 32), static_cast<std::uint32_t>(chain)};
    std::mt19937_64 rng(seq);
    RingPolymer poly = make_ring(config.beads, sys.temperature);
    MoveConfig moves = config.moves;
    if (!(moves.width > 0.0)) moves.width = std::sqrt(poly.dtau / sys.mass);
    if (!(moves.centroid_width > 0.0)) moves.centroid_width = std::sqrt(sys.temperature / sys.mass);

    // Burn-in with width adaptation; widths are frozen afterwards.
    const std::uint64_t window = 20;
    SweepStats acc;
    for (std::uint64_t s = 0; s < config.burn_in; ++s) {
        const SweepStats st = metropolis_sweep(poly, sys, rng, moves);
        acc.proposed += st.proposed;
        acc.accepted += st.accepted;
        acc.centroid_proposed += st.centroid_proposed;
        acc.centroid_accepted += st.centroid_accepted;
        if ((s + 1) % window == 0) {
            const double t = moves.target_acceptance;
            if (moves.kind == MoveKind::single_bead && acc.proposed > 0)
                moves.width *= std::clamp(acc.acceptance() / t, 0.5, 2.0);
            if (moves.centroid && acc.centroid_proposed > 0)
                moves.centroid_width *= std::clamp(acc.centroid_acceptance() / t, 0.5, 2.0);
            acc = SweepStats{};
        }
    }

    ChainOutput out;
    out.width = moves.width;
    out.centroid_width = moves.centroid_width;
    const std::size_t n_meas = static_cast<std::size_t>(config.sweeps / config.thin);
    out.potential.reserve(n_meas);
    out.virial.reserve(n_meas);
    out.position.reserve(n_meas);
    out.square.reserve(n_meas);
    const double inv_m = 1.0 / static_cast<double>(config.beads);
    for (std::uint64_t s = 0; s < config.sweeps; ++s) {
        const SweepStats st = metropolis_sweep(poly, sys, rng, moves);
        out.stats.proposed += st.proposed;
        out.stats.accepted += st.accepted;
        out.stats.centroid_proposed += st.centroid_proposed;
        out.stats.centroid_accepted += st.centroid_accepted;
        if ((s + 1) % config.thin != 0) continue;
        double u = 0.0, vir = 0.0, pos = 0.0, sq = 0.0;
        for (double x : poly.x) {
            const double e = sys.energy(x);
            u += e;
            vir += e + 0.5 * x * sys.energy_derivative(x);
            pos += x;
            sq += x * x;
        }
        out.potential.push_back(u * inv_m);
        out.virial.push_back(vir * inv_m);
        out.position.push_back(pos * inv_m);
        out.square.push_back(sq * inv_m);
        if (config.keep_trace && chain == 0)
            out.trace.push_back({s + 1, u * inv_m, vir * inv_m, pos * inv_m, sq * inv_m});
    }
    return out;
}

EstimatorResult merge(const std::vector<ChainOutput>& chains,
                      std::vector<double> ChainOutput::*series) {
    EstimatorResult r;
    double var = 0.0;
    double tau = 0.0;
    for (const auto& c : chains) {
        const BlockingResult b = blocking_analysis(c.*series);
        r.mean += b.mean;
        var += b.error * b.error;
        tau += b.autocorrelation_time;
        r.samples += b.samples;
        r.trusted = r.trusted && b.plateau;
    }
    const double n = static_cast<double>(chains.size());
    r.mean /= n;
    r.error = std::sqrt(var) / n;
    r.autocorrelation_time = tau / n;
    return r;
}

}  // namespace

PimcResult run_pimc(const ThermalSystem& sys, const PimcConfig& config) {
    sys.validate();
    if (config.beads < 2) throw DomainError("PIMC needs at least two beads");
    if (config.chains == 0) throw DomainError("PIMC needs at least one chain");
    if (config.thin == 0) throw DomainError("thin must be positive");
    if (config.sweeps / config.thin < 2) throw DomainError("too few measured sweeps");
    if (!(config.moves.target_acceptance > 0.0 && config.moves.target_acceptance < 1.0))
        throw DomainError("target acceptance must lie in (0, 1)");

    std::vector<ChainOutput> chains(config.chains);
    parallel_for(config.chains, config.threads == 0 ? default_thread_count() : config.threads,
                 [&](std::size_t c) { chains[c] = run_chain(sys, config, static_cast<unsigned>(c)); });

    PimcResult out;
    out.potential_energy = merge(chains, &ChainOutput::potential);
    out.total_energy = merge(chains, &ChainOutput::virial);
    out.mean_position = merge(chains, &ChainOutput::position);
    out.mean_square = merge(chains, &ChainOutput::square);
    SweepStats total;
    for (const auto& c : chains) {
        total.proposed += c.stats.proposed;
        total.accepted += c.stats.accepted;
        total.centroid_proposed += c.stats.centroid_proposed;
        total.centroid_accepted += c.stats.centroid_accepted;
    }
    out.acceptance = total.acceptance();
    out.centroid_acceptance = total.centroid_acceptance();
    out.tuned_width = chains.front().width;
    out.tuned_centroid_width = chains.front().centroid_width;
    out.trace = std::move(chains.front().trace);
    return out;
}

EstimatorResult estimate(Observable observable, const ThermalSystem& sys, const PimcConfig& config) {
    return run_pimc(sys, config).get(observable);
}

PolarizabilityResult polarizability_finite_field(const ThermalSystem& sys, double field_small,
                                                 double field_large, const PimcConfig& config) {
    if (!(field_small > 0.0) || !(field_large > field_small))
        throw DomainError("need 0 < field_small < field_large");
    PolarizabilityResult out;
    if (sys.charge == 0.0) return out;

    auto response = [&](double E, double& err) {
        ThermalSystem plus = sys, minus = sys;
        plus.field = E;
        minus.field = -E;
        const EstimatorResult p = run_pimc(plus, config).mean_position;
        const EstimatorResult m = run_pimc(minus, config).mean_position;
        const double q = sys.charge;
        err = std::abs(q) * std::hypot(p.error, m.error) / (2.0 * E);
        return q * (p.mean - m.mean) / (2.0 * E);
    };
    out.alpha = response(field_small, out.error);
    out.alpha_large = response(field_large, out.error_large);
    const double diff = std::abs(out.alpha_large - out.alpha);
    out.nonlinearity = out.alpha != 0.0 ? diff / std::abs(out.alpha)
                                        : std::numeric_limits<double>::infinity();
    if (out.nonlinearity > 0.05 && diff > 3.0 * std::hypot(out.error, out.error_large))
        throw FieldTooLargeError("polarisability changes by " + std::to_string(100.0 * out.nonlinearity) +
                                 "% between fields; reduce the field strength");
    return out;
}

}  // namespace feynpath
