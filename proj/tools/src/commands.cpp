#include "commands.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "feynpath/coherent.hpp"
#include "feynpath/errors.hpp"
#include "feynpath/grin.hpp"
#include "feynpath/kernels_exact.hpp"
#include "feynpath/lattice.hpp"
#include "feynpath/pimc.hpp"
#include "feynpath/qed_media.hpp"

namespace feynpath::cli {

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw DomainError("points must be >= 1");
    if (n == 1) return {lo};
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return v;
}

double rel_error(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

struct Particle {
    double mass = 1.0;
    double hbar = 1.0;
};

void add_particle(CLI::App* sub, Particle& p) {
    sub->add_option("--mass", p.mass, "particle mass");
    sub->add_option("--hbar", p.hbar, "reduced Planck constant");
}

// ---- kernel ----------------------------------------------------------------

Command kernel_command(CLI::App& app) {
    struct Opts {
        std::string type = "free";
        double xa = 0.0, xb = 0.0, t = 1.0, ta = 0.0, omega = 1.0;
        double xb_min = -1.0, xb_max = 1.0;
        int points = 1;
        Particle p;
    };
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand("kernel", "closed-form free or harmonic-oscillator kernel");
    sub->add_option("--type", o->type, "free | ho")->check(CLI::IsMember({"free", "ho"}));
    sub->add_option("--xa", o->xa, "start position");
    sub->add_option("--xb", o->xb, "end position (points == 1)");
    sub->add_option("--t", o->t, "elapsed time tb - ta");
    sub->add_option("--ta", o->ta, "start time");
    sub->add_option("--omega", o->omega, "oscillator frequency");
    sub->add_option("--xb-min", o->xb_min, "scan start (points > 1)");
    sub->add_option("--xb-max", o->xb_max, "scan end (points > 1)");
    sub->add_option("--points", o->points, "number of xb samples");
    add_particle(sub, o->p);
    return {sub, [o](const Context&) {
                Report r;
                r.columns = {"xa", "xb", "t", "re", "im", "abs"};
                const ParticleParams p{o->p.mass, o->p.hbar};
                const auto xbs = o->points == 1 ? std::vector<double>{o->xb}
                                                : linspace(o->xb_min, o->xb_max, o->points);
                for (double xb : xbs) {
                    const SpacetimeEndpoints e{o->xa, xb, o->ta, o->ta + o->t};
                    const Complex k = o->type == "free" ? free_kernel(e, p)
                                                        : ho_kernel(e, OscillatorParams{p, o->omega});
                    r.rows.push_back({o->xa, xb, o->t, k.real(), k.imag(), std::abs(k)});
                }
                if (o->type == "ho" && o->points == 1)
                    r.results["classical_action"] =
                        ho_action({o->xa, o->xb, o->ta, o->ta + o->t}, OscillatorParams{p, o->omega});
                return r;
            }};
}

// ---- lattice ---------------------------------------------------------------

struct PotentialOpts {
    std::string potential = "free";
    double omega = 1.0;
    double depth = 1.0;
    double a = 1.0;
};

void add_potential(CLI::App* sub, PotentialOpts& v, std::vector<std::string> allowed) {
    std::string help;
    for (const auto& s : allowed) help += (help.empty() ? "" : " | ") + s;
    sub->add_option("--potential", v.potential, help)->check(CLI::IsMember(allowed));
    sub->add_option("--omega", v.omega, "harmonic frequency");
    sub->add_option("--depth", v.depth, "double-well depth");
    sub->add_option("--a", v.a, "double-well minima at +-a");
}

PotentialModel make_potential(const PotentialOpts& v, double mass) {
    if (v.potential == "harmonic") return PotentialModel::harmonic(mass, v.omega);
    if (v.potential == "double-well") return PotentialModel::double_well(v.depth, v.a);
    return PotentialModel::free();
}

Command lattice_command(CLI::App& app) {
    struct Opts {
        PotentialOpts v;
        Particle p;
        double xa = 0.0, xb = 0.5, t = 1.0;
        int slices = 100;
        std::string method = "grid";
        std::string rule = "trapezoid";
        double grid_min = -8.0, grid_max = 8.0;
        int grid_points = 2048;
    };
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand("lattice", "time-sliced kernel reconstruction");
    add_potential(sub, o->v, {"free", "harmonic", "double-well"});
    add_particle(sub, o->p);
    sub->add_option("--xa", o->xa, "start position");
    sub->add_option("--xb", o->xb, "end position");
    sub->add_option("--t", o->t, "elapsed time");
    sub->add_option("--slices", o->slices, "number of time slices N");
    sub->add_option("--method", o->method, "recursion | grid")->check(CLI::IsMember({"recursion", "grid"}));
    sub->add_option("--rule", o->rule, "trapezoid | midpoint")->check(CLI::IsMember({"trapezoid", "midpoint"}));
    sub->add_option("--grid-min", o->grid_min, "grid lower edge");
    sub->add_option("--grid-max", o->grid_max, "grid upper edge");
    sub->add_option("--grid-points", o->grid_points, "grid size");
    return {sub, [o](const Context& ctx) {
                const ParticleParams p{o->p.mass, o->p.hbar};
                const PotentialModel V = make_potential(o->v, p.mass);
                const SpacetimeEndpoints e{o->xa, o->xb, 0.0, o->t};
                LatticeOptions opts;
                opts.rule = o->rule == "trapezoid" ? SliceRule::trapezoid : SliceRule::midpoint;
                opts.grid.grid = SpatialGrid{o->grid_min, o->grid_max, o->grid_points};
                opts.grid.threads = ctx.threads;
                const TimeSlicing slicing{o->slices, o->t};
                Report r;
                Complex k;
                if (o->method == "recursion") {
                    k = lattice_kernel(e, p, V, slicing, LatticeMethod::gaussian_recursion, opts);
                } else {
                    GridTransferReport rep;
                    k = grid_transfer_kernels({{o->xa, o->xb}}, 0.0, p, V, slicing, opts.rule, opts.grid, &rep)
                            .front();
                    r.errors["boundary_fraction"] = rep.boundary_fraction;
                    r.results["k_pass"] = rep.k_pass;
                    r.results["k_stop"] = rep.k_stop;
                }
                const double nan = std::nan("");
                Complex exact{nan, nan};
                if (o->v.potential == "free") exact = free_kernel(e, p);
                if (o->v.potential == "harmonic") exact = ho_kernel(e, OscillatorParams{p, o->v.omega});
                r.columns = {"xa", "xb", "re", "im", "exact_re", "exact_im", "rel_error"};
                r.rows.push_back({o->xa, o->xb, k.real(), k.imag(), exact.real(), exact.imag(),
                                  std::isnan(exact.real()) ? nan : rel_error(k, exact)});
                return r;
            }};
}

// ---- evolve ----------------------------------------------------------------

Command evolve_command(CLI::App& app) {
    struct Opts {
        PotentialOpts v;
        Particle p;
        double sigma = 1.0, x0 = 0.0, p0 = 0.0, t = 2.0;
        double grid_min = -20.0, grid_max = 20.0;
        int grid_points = 801;
    };
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand("evolve", "propagate a Gaussian packet with a closed-form kernel");
    add_potential(sub, o->v, {"free", "harmonic"});
    add_particle(sub, o->p);
    sub->add_option("--sigma", o->sigma, "initial position spread");
    sub->add_option("--x0", o->x0, "initial centre");
    sub->add_option("--p0", o->p0, "initial mean wavenumber");
    sub->add_option("--t", o->t, "elapsed time");
    sub->add_option("--grid-min", o->grid_min, "grid lower edge");
    sub->add_option("--grid-max", o->grid_max, "grid upper edge");
    sub->add_option("--grid-points", o->grid_points, "grid size");
    return {sub, [o](const Context& ctx) {
                const ParticleParams p{o->p.mass, o->p.hbar};
                const SpatialGrid grid{o->grid_min, o->grid_max, o->grid_points};
                grid.validate();
                if (!(o->sigma > 0.0)) throw DomainError("sigma must be positive");
                std::vector<Complex> psi;
                const double norm = std::pow(2.0 * kPi * o->sigma * o->sigma, -0.25);
                for (double x : grid.points()) {
                    const double d = x - o->x0;
                    psi.push_back(norm * std::exp(Complex{-d * d / (4.0 * o->sigma * o->sigma), o->p0 * x}));
                }
                const KernelEvaluator K = o->v.potential == "free"
                                              ? free_evaluator(p)
                                              : ho_evaluator(OscillatorParams{p, o->v.omega});
                const EvolveResult ev = evolve_wavefunction(grid, psi, K, o->t, p, ctx.threads);
                Report r;
                r.columns = {"x", "re", "im", "abs2"};
                double m1 = 0.0, m2 = 0.0, total = 0.0;
                for (std::size_t i = 0; i < ev.psi.size(); ++i) {
                    const double x = grid.x(static_cast<int>(i));
                    const double w = std::norm(ev.psi[i]);
                    r.rows.push_back({x, ev.psi[i].real(), ev.psi[i].imag(), w});
                    total += w;
                    m1 += w * x;
                    m2 += w * x * x;
                }
                m1 /= total;
                r.results["norm_before"] = ev.norm_before;
                r.results["norm_after"] = ev.norm_after;
                r.results["mean"] = m1;
                r.results["width"] = std::sqrt(m2 / total - m1 * m1);
                r.errors["leakage_warning"] = ev.leakage_warning;
                return r;
            }};
}

// ---- double-slit -----------------------------------------------------------

Command double_slit_command(CLI::App& app) {
    struct Opts {
        SlitGeometry g;
        Particle p;
        bool close1 = false, close2 = false;
        std::string source = "point";
        double x_min = -4.0, x_max = 4.0;
        int points = 512;
    };
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand("double-slit", "two-slit interference pattern");
    add_particle(sub, o->p);
    sub->add_option("--source-x", o->g.source_x, "source transverse position");
    sub->add_option("--source-z", o->g.source_z, "source plane");
    sub->add_option("--screen-z", o->g.screen_z, "slit screen plane");
    sub->add_option("--detector-z", o->g.detector_z, "detector plane");
    sub->add_option("--slit1-center", o->g.slit1.center, "slit 1 centre");
    sub->add_option("--slit1-width", o->g.slit1.width, "slit 1 width");
    sub->add_option("--slit2-center", o->g.slit2.center, "slit 2 centre");
    sub->add_option("--slit2-width", o->g.slit2.width, "slit 2 width");
    sub->add_flag("--close-slit1", o->close1, "block slit 1");
    sub->add_flag("--close-slit2", o->close2, "block slit 2");
    sub->add_option("--t", o->g.total_time, "total flight time");
    sub->add_option("--source", o->source, "point | collimated")->check(CLI::IsMember({"point", "collimated"}));
    sub->add_option("--x-min", o->x_min, "detector scan start");
    sub->add_option("--x-max", o->x_max, "detector scan end");
    sub->add_option("--points", o->points, "detector samples");
    return {sub, [o](const Context& ctx) {
                SlitGeometry g = o->g;
                g.slit1.open = !o->close1;
                g.slit2.open = !o->close2;
                g.source = o->source == "point" ? SourceModel::point : SourceModel::collimated;
                const auto xs = linspace(o->x_min, o->x_max, o->points);
                const DoubleSlitPattern pat =
                    double_slit_pattern(g, xs, ParticleParams{o->p.mass, o->p.hbar}, 1e-13, ctx.threads);
                Report r;
                r.columns = {"x", "P", "P1", "P2", "cross"};
                for (std::size_t i = 0; i < xs.size(); ++i)
                    r.rows.push_back({xs[i], pat.P[i], pat.P1[i], pat.P2[i], pat.cross[i]});
                r.results["tau"] = pat.tau;
                r.results["visibility"] = fringe_visibility(pat);
                return r;
            }};
}

// ---- grin ------------------------------------------------------------------

Command grin_command(CLI::App& app) {
    struct Opts {
        double n0 = 1.0, wavelength = 2.0 * kPi * 0.1, g = 0.1, z = 10.0;
        std::string profile;
        double w0 = 1.0, x0 = 0.0;
        std::string backend = "kernel";
        int modes = 60;
        double grid_min = -10.0, grid_max = 10.0;
        int grid_points = 801;
    };
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand("grin", "paraxial beam through a graded-index medium");
    sub->add_option("--n0", o->n0, "background index");
    sub->add_option("--wavelength", o->wavelength, "vacuum wavelength");
    sub->add_option("--g", o->g, "gradient constant g (ignored with --profile)");
    sub->add_option("--profile", o->profile, "CSV of z,g samples");
    sub->add_option("--z", o->z, "propagation distance");
    sub->add_option("--w0", o->w0, "input Gaussian radius, E = exp(-(x-x0)^2 / (2 w0^2))");
    sub->add_option("--x0", o->x0, "input beam offset");
    sub->add_option("--backend", o->backend, "kernel | modes | both")
        ->check(CLI::IsMember({"kernel", "modes", "both"}));
    sub->add_option("--modes", o->modes, "mode count for the modes backend");
    sub->add_option("--grid-min", o->grid_min, "grid lower edge");
    sub->add_option("--grid-max", o->grid_max, "grid upper edge");
    sub->add_option("--grid-points", o->grid_points, "grid size");
    return {sub, [o](const Context& ctx) {
                const GrinMedium med = o->profile.empty()
                                           ? GrinMedium::constant(o->n0, o->g, o->wavelength)
                                           : GrinMedium::from_csv(o->n0, o->wavelength, o->profile);
                const SpatialGrid grid{o->grid_min, o->grid_max, o->grid_points};
                grid.validate();
                if (!(o->w0 > 0.0)) throw DomainError("w0 must be positive");
                std::vector<Complex> field;
                for (double x : grid.points()) {
                    const double d = (x - o->x0) / o->w0;
                    field.push_back(std::exp(-0.5 * d * d));
                }
                BeamOptions bo;
                bo.backend = o->backend == "kernel" ? BeamBackend::kernel
                             : o->backend == "modes" ? BeamBackend::modes
                                                     : BeamBackend::both;
                bo.n_modes = o->modes;
                bo.threads = ctx.threads;
                const BeamResult res = propagate_beam(grid, field, o->z, med, bo);
                Report r;
                r.columns = {"x", "re", "im", "abs2"};
                for (std::size_t i = 0; i < res.field.size(); ++i)
                    r.rows.push_back({grid.x(static_cast<int>(i)), res.field[i].real(), res.field[i].imag(),
                                      std::norm(res.field[i])});
                r.results["power_in"] = res.power_in;
                r.results["power_out"] = res.power_out;
                r.results["inhomogeneity"] =
                    inhomogeneity_parameter(med, std::max(std::abs(o->grid_min), std::abs(o->grid_max)), o->z);
                r.errors["mode_power_fraction"] = res.mode_power_fraction;
                r.errors["backend_difference"] = res.backend_difference;
                return r;
            }};
}

// ---- dpa -------------------------------------------------------------------

Command dpa_command(CLI::App& app) {
    struct Opts {
        double omega = 1.0, kappa = 0.25, ta = 0.0, tb = 1.0;
        double alpha_re = 0.5, alpha_im = 0.0;
        std::string method = "closed";
        double re_min = -2.0, re_max = 2.0, im_min = -2.0, im_max = 2.0;
        int points = 21;
        std::uint64_t mc_samples = 0;
        std::uint64_t seed = 1;
        double beta_re = 0.0, beta_im = 0.0;
    };
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand("dpa", "degenerate parametric amplifier propagator scan");
    sub->add_option("--omega", o->omega, "mode frequency");
    sub->add_option("--kappa", o->kappa, "parametric coupling");
    sub->add_option("--ta", o->ta, "start time");
    sub->add_option("--tb", o->tb, "end time");
    sub->add_option("--alpha-re", o->alpha_re, "Re alpha_a");
    sub->add_option("--alpha-im", o->alpha_im, "Im alpha_a");
    sub->add_option("--method", o->method, "closed | numeric")->check(CLI::IsMember({"closed", "numeric"}));
    sub->add_option("--re-min", o->re_min, "scan Re alpha_b start");
    sub->add_option("--re-max", o->re_max, "scan Re alpha_b end");
    sub->add_option("--im-min", o->im_min, "scan Im alpha_b start");
    sub->add_option("--im-max", o->im_max, "scan Im alpha_b end");
    sub->add_option("--points", o->points, "samples per axis");
    sub->add_option("--mc-samples", o->mc_samples, "composition check sample count (0 skips)");
    sub->add_option("--seed", o->seed, "Monte Carlo seed");
    sub->add_option("--beta-re", o->beta_re, "Re alpha_b for the composition check");
    sub->add_option("--beta-im", o->beta_im, "Im alpha_b for the composition check");
    return {sub, [o](const Context& ctx) {
                const Complex alpha{o->alpha_re, o->alpha_im};
                CoherentPropagator K;
                XYZSolution xyz;
                if (o->method == "numeric") {
                    xyz = solve_xyz(QuadraticHamiltonian::dpa(o->omega, o->kappa), o->ta, o->tb);
                    K = [&xyz](Complex b, Complex a) { return quadratic_propagator(a, b, xyz); };
                } else {
                    const double w = o->omega, k = o->kappa, ta = o->ta, tb = o->tb;
                    K = [=](Complex b, Complex a) { return dpa_propagator(a, b, ta, tb, w, k); };
                }
                Report r;
                r.columns = {"beta_re", "beta_im", "re", "im", "abs"};
                for (double br : linspace(o->re_min, o->re_max, o->points))
                    for (double bi : linspace(o->im_min, o->im_max, o->points)) {
                        const Complex v = K({br, bi}, alpha);
                        r.rows.push_back({br, bi, v.real(), v.imag(), std::abs(v)});
                    }
                ExpectationOptions eo;
                eo.scale = std::cosh(2.0 * o->kappa * (o->tb - o->ta));
                const Complex mean = expectation_annihilation({{alpha, 1.0}}, K, eo);
                r.results["mean_a_re"] = mean.real();
                r.results["mean_a_im"] = mean.imag();
                if (o->mc_samples > 0) {
                    const CompositionEstimate c = dpa_composition_mc(
                        alpha, {o->beta_re, o->beta_im}, o->ta, 0.5 * (o->ta + o->tb), o->tb, o->omega,
                        o->kappa, o->mc_samples, o->seed, ctx.threads);
                    r.results["composition_re"] = c.estimate.real();
                    r.results["composition_im"] = c.estimate.imag();
                    r.results["direct_re"] = c.direct.real();
                    r.results["direct_im"] = c.direct.imag();
                    r.errors["composition_relative_error"] = c.relative_error;
                    r.errors["composition_standard_error"] = c.standard_error;
                    r.seed = o->seed;
                }
                return r;
            }};
}

// ---- pimc ------------------------------------------------------------------

Command pimc_command(CLI::App& app) {
    struct Opts {
        std::string system = "ho";
        double temp = 1.0, mass = 1.0, omega = 1.0, depth = 1.0, a = 1.0;
        double charge = 0.0, field = 0.0;
        int beads = 64;
        std::uint64_t sweeps = 20000, burn_in = 2000, thin = 1, seed = 1;
        unsigned chains = 4;
        std::string moves = "staging";
        int segment = 0;
        bool polarizability = false;
        double field_small = 0.5, field_large = 1.0;
        bool trace = false;
    };
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand("pimc", "imaginary-time path integral Monte Carlo");
    sub->add_option("--system", o->system, "ho | double-well")->check(CLI::IsMember({"ho", "double-well"}));
    sub->add_option("--temp", o->temp, "temperature k_B T");
    sub->add_option("--mass", o->mass, "particle mass");
    sub->add_option("--omega", o->omega, "oscillator frequency");
    sub->add_option("--depth", o->depth, "double-well depth");
    sub->add_option("--a", o->a, "double-well minima at +-a");
    sub->add_option("--charge", o->charge, "particle charge q");
    sub->add_option("--field", o->field, "static field E");
    sub->add_option("--beads", o->beads, "Trotter number M");
    sub->add_option("--sweeps", o->sweeps, "measured sweeps per chain");
    sub->add_option("--burn-in", o->burn_in, "tuning sweeps per chain");
    sub->add_option("--thin", o->thin, "measure every n-th sweep");
    sub->add_option("--chains", o->chains, "independent chains");
    sub->add_option("--seed", o->seed, "master seed");
    sub->add_option("--moves", o->moves, "staging | single-bead")
        ->check(CLI::IsMember({"staging", "single-bead"}));
    sub->add_option("--segment", o->segment, "staging length (0: M/4)");
    sub->add_flag("--polarizability", o->polarizability, "finite-field polarisability run");
    sub->add_option("--field-small", o->field_small, "smaller probe field");
    sub->add_option("--field-large", o->field_large, "larger probe field");
    sub->add_flag("--trace", o->trace, "emit per-sweep samples of chain 0");
    return {sub, [o](const Context& ctx) {
                ThermalSystem sys;
                sys.mass = o->mass;
                sys.temperature = o->temp;
                sys.charge = o->charge;
                sys.field = o->field;
                sys.potential = o->system == "ho" ? PotentialModel::harmonic(o->mass, o->omega)
                                                  : PotentialModel::double_well(o->depth, o->a);
                PimcConfig cfg;
                cfg.beads = o->beads;
                cfg.sweeps = o->sweeps;
                cfg.burn_in = o->burn_in;
                cfg.thin = o->thin;
                cfg.chains = o->chains;
                cfg.seed = o->seed;
                cfg.threads = ctx.threads;
                cfg.moves.kind = o->moves == "staging" ? MoveKind::staging : MoveKind::single_bead;
                cfg.moves.segment = o->segment;
                cfg.keep_trace = o->trace;
                Report r;
                r.seed = o->seed;
                if (o->polarizability) {
                    const PolarizabilityResult pol =
                        polarizability_finite_field(sys, o->field_small, o->field_large, cfg);
                    r.columns = {"field", "alpha", "error"};
                    r.rows.push_back({o->field_small, pol.alpha, pol.error});
                    r.rows.push_back({o->field_large, pol.alpha_large, pol.error_large});
                    r.results["alpha"] = pol.alpha;
                    r.errors["alpha_error"] = pol.error;
                    r.errors["nonlinearity"] = pol.nonlinearity;
                    return r;
                }
                const PimcResult res = run_pimc(sys, cfg);
                auto put = [&r](const char* name, const EstimatorResult& e) {
                    r.results[name] = e.mean;
                    r.errors[std::string(name) + "_error"] = e.error;
                    r.errors[std::string(name) + "_tau"] = e.autocorrelation_time;
                    r.errors[std::string(name) + "_trusted"] = e.trusted;
                };
                put("potential_energy", res.potential_energy);
                put("total_energy", res.total_energy);
                put("mean_position", res.mean_position);
                put("mean_square", res.mean_square);
                r.results["acceptance"] = res.acceptance;
                r.results["centroid_acceptance"] = res.centroid_acceptance;
                r.results["samples"] = res.total_energy.samples;
                if (o->trace) {
                    r.columns = {"sweep", "potential", "virial_energy", "position", "square"};
                    for (const auto& s : res.trace)
                        r.rows.push_back({static_cast<double>(s.sweep), s.potential, s.virial_energy,
                                          s.position, s.square});
                } else {
                    r.columns = {"observable", "mean", "error", "tau"};
                    int id = 0;
                    for (const auto* e : {&res.potential_energy, &res.total_energy, &res.mean_position,
                                          &res.mean_square})
                        r.rows.push_back({static_cast<double>(id++), e->mean, e->error, e->autocorrelation_time});
                    r.results["observables"] = "0=potential_energy 1=total_energy 2=mean_position 3=mean_square";
                }
                return r;
            }};
}

// ---- spdc ------------------------------------------------------------------

Command spdc_command(CLI::App& app) {
    struct Opts {
        std::vector<double> dk{0.0};
        double gamma_l = 0.0, l = 1.0;
        double gl_min = 0.0, gl_max = 5.0;
        int points = 1;
        bool numeric = false;
    };
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand("spdc", "down-conversion probability in a lossy 1D medium");
    sub->add_option("--dk", o->dk, "phase mismatch (one or more values)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
        ->delimiter(',');
    sub->add_option("--gamma-l", o->gamma_l, "loss times length (points == 1)");
    sub->add_option("--l", o->l, "medium length");
    sub->add_option("--gl-min", o->gl_min, "scan start in Gamma L (points > 1)");
    sub->add_option("--gl-max", o->gl_max, "scan end in Gamma L (points > 1)");
    sub->add_option("--points", o->points, "Gamma L samples");
    sub->add_flag("--numeric", o->numeric, "add the vertex-quadrature column");
    return {sub, [o](const Context&) {
                Report r;
                r.columns = {"dk_l", "gamma_l", "P"};
                if (o->numeric) r.columns.push_back("P_numeric");
                const auto gls = o->points == 1 ? std::vector<double>{o->gamma_l}
                                                : linspace(o->gl_min, o->gl_max, o->points);
                for (double dk : o->dk)
                    for (double gl : gls) {
                        const double P = spdc_probability(dk, gl / o->l, o->l);
                        std::vector<double> row{dk * o->l, gl, P};
                        if (o->numeric) {
                            const auto med = DispersiveMedium1D::from_mismatch(dk, gl / o->l, o->l);
                            const double s = biphoton_reference_scale(med, 1.0, 1.0);
                            row.push_back(std::norm(biphoton_amplitude_numeric(o->l, o->l, med, 1.0, 1.0) / s));
                        }
                        r.rows.push_back(row);
                    }
                return r;
            }};
}

// ---- emission --------------------------------------------------------------

Command emission_command(CLI::App& app) {
    struct Opts {
        EmitterEnvironment env;
        double eps1_min = 0.0, eps1_max = 4.0;
        int points = 1;
    };
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand("emission", "spontaneous emission rate in a homogeneous medium");
    sub->add_option("--eps1", o->env.eps1, "Re epsilon (points == 1)");
    sub->add_option("--eps2", o->env.eps2, "Im epsilon");
    sub->add_option("--gamma0", o->env.gamma0, "free-space rate");
    sub->add_option("--omega0", o->env.omega0, "transition frequency");
    sub->add_option("--eps1-min", o->eps1_min, "scan start (points > 1)");
    sub->add_option("--eps1-max", o->eps1_max, "scan end (points > 1)");
    sub->add_option("--points", o->points, "eps1 samples");
    return {sub, [o](const Context&) {
                Report r;
                r.columns = {"eps1", "eps2", "rate", "ratio", "im_green"};
                const auto e1s = o->points == 1 ? std::vector<double>{o->env.eps1}
                                                : linspace(o->eps1_min, o->eps1_max, o->points);
                for (double e1 : e1s) {
                    EmitterEnvironment env = o->env;
                    env.eps1 = e1;
                    const double rate = spontaneous_rate(env);
                    r.rows.push_back({e1, env.eps2, rate, rate / env.gamma0, imag_green_loop(env)});
                }
                return r;
            }};
}

// ---- dielectric ------------------------------------------------------------

Command dielectric_command(CLI::App& app) {
    struct Opts {
        EffectiveDielectricModel m;
        double damping = 0.1;
        double w_min = 0.0, w_max = 2.0;
        int points = 201;
    };
    auto o = std::make_shared<Opts>();
    o->m.beta = 0.5;
    CLI::App* sub = app.add_subcommand("dielectric", "effective dielectric function of a resonant medium");
    sub->add_option("--omega0", o->m.omega0, "resonance frequency");
    sub->add_option("--beta", o->m.beta, "static polarisability");
    sub->add_option("--g", o->m.shape, "shape factor, 0 or 1");
    sub->add_option("--eps0", o->m.eps0, "vacuum permittivity");
    sub->add_option("--damping", o->damping, "Lorentz damping rate for lambda_F");
    sub->add_option("--omega-min", o->w_min, "scan start");
    sub->add_option("--omega-max", o->w_max, "scan end");
    sub->add_option("--points", o->points, "frequency samples");
    return {sub, [o](const Context&) {
                EffectiveDielectricModel m = o->m;
                m.lambda_f = EffectiveDielectricModel::lorentz_damping(o->damping);
                Report r;
                r.columns = {"Omega", "re", "im"};
                for (double W : linspace(o->w_min, o->w_max, o->points)) {
                    const Complex e = effective_dielectric(W, m);
                    r.rows.push_back({W, e.real(), e.imag()});
                }
                return r;
            }};
}

}  // namespace

std::vector<Command> register_commands(CLI::App& app) {
    return {kernel_command(app),      lattice_command(app), evolve_command(app),
            double_slit_command(app), grin_command(app),    dpa_command(app),
            pimc_command(app),        spdc_command(app),    emission_command(app),
            dielectric_command(app)};
}

}  // namespace feynpath::cli
