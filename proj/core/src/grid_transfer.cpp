#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <string>

#include "feynpath/errors.hpp"
#include "feynpath/lattice.hpp"
#include "feynpath/parallel.hpp"

namespace feynpath {

namespace {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// One-slice kinetic kernel with a smooth momentum window,
// Kw(d) = (1/2pi) int w(|k|) exp(-i hbar eps k^2 / 2m) exp(i k d) dk,
// sampled on grid offsets through a zero-padded inverse FFT.
class WindowedKernel {
public:
    WindowedKernel(const SpatialGrid& grid, double eps, const ParticleParams& p, double k_pass,
                   double k_stop)
        : n_(static_cast<std::size_t>(grid.n_points)),
          dx_(grid.dx()),
          x0_(grid.x_min),
          size_(next_pow2(8 * n_)) {
        const double dk = 2.0 * kPi / (static_cast<double>(size_) * dx_);
        const double a = p.hbar * eps / (2.0 * p.mass);
        spectrum_.assign(size_, Complex{});
        wavenumber_.assign(size_, 0.0);
        for (std::size_t m = 0; m < size_; ++m) {
            const double k = (m < size_ / 2 ? static_cast<double>(m)
                                            : static_cast<double>(m) - static_cast<double>(size_)) *
                             dk;
            wavenumber_[m] = k;
            const double ak = std::abs(k);
            double w = 0.0;
            if (ak < k_pass) {
                w = 1.0;
            } else if (ak < k_stop) {
                const double c = std::cos(0.5 * kPi * (ak - k_pass) / (k_stop - k_pass));
                w = c * c;
            }
            if (w > 0.0) spectrum_[m] = w * std::exp(-kI * (a * k * k)) / dx_;
        }
    }

    // u_j = Kw(x_j - s) for the n grid points.
    std::vector<Complex> sample(double s) const {
        std::vector<Complex> in(size_);
        const double shift = x0_ - s;
        for (std::size_t m = 0; m < size_; ++m)
            if (spectrum_[m] != Complex{}) in[m] = spectrum_[m] * std::exp(kI * (wavenumber_[m] * shift));
        std::vector<Complex> out;
        Eigen::FFT<double> fft;
        fft.inv(out, in);
        out.resize(n_);
        return out;
    }

private:
    std::size_t n_;
    double dx_;
    double x0_;
    std::size_t size_;
    std::vector<Complex> spectrum_;
    std::vector<double> wavenumber_;
};

double slice_phase_potential(const PotentialModel& V, SliceRule rule, double x_from, double t_from,
                             double x_to, double t_to) {
    return rule == SliceRule::midpoint ? V(0.5 * (x_from + x_to), t_to)
                                       : 0.5 * (V(x_from, t_from) + V(x_to, t_to));
}

}  // namespace

std::vector<Complex> grid_transfer_kernels(const std::vector<std::pair<double, double>>& pairs,
                                           double ta, const ParticleParams& p,
                                           const PotentialModel& V, const TimeSlicing& slicing,
                                           SliceRule rule, const GridTransferOptions& options,
                                           GridTransferReport* report) {
    p.validate();
    slicing.validate();
    const SpatialGrid& grid = options.grid;
    grid.validate();
    const double T = slicing.duration;
    const double L = grid.range();
    const double dx = grid.dx();
    const double eps = slicing.epsilon();
    const double hbar = p.hbar;

    const double sampling_bound = kPi * hbar * T / (p.mass * L);
    if (!(dx < sampling_bound))
        throw DomainError("grid spacing " + std::to_string(dx) + " violates the sampling bound " +
                          std::to_string(sampling_bound));
    const double k_pass = options.k_pass > 0.0 ? options.k_pass : 2.0 * p.mass * L / (hbar * T);
    const double k_stop = options.k_stop > 0.0 ? options.k_stop : 5.0 / 3.0 * k_pass;
    if (!(k_stop > k_pass)) throw DomainError("momentum window needs k_stop > k_pass");
    if (!(k_stop < kPi / dx))
        throw DomainError("momentum window k_stop = " + std::to_string(k_stop) +
                          " exceeds the grid cutoff pi/dx = " + std::to_string(kPi / dx));
    const double width = options.absorber_width > 0.0 ? options.absorber_width : 3.0 * L / 16.0;
    const double eta = options.absorber_strength > 0.0 ? options.absorber_strength : 200.0 / T;
    if (!(2.0 * width < L)) throw DomainError("absorbing layers cover the whole grid");
    const double inner_lo = grid.x_min + width;
    const double inner_hi = grid.x_max - width;
    for (const auto& [xa, xb] : pairs)
        if (xa < inner_lo || xa > inner_hi || xb < inner_lo || xb > inner_hi)
            throw DomainError("endpoint outside the absorber-free interior [" +
                              std::to_string(inner_lo) + ", " + std::to_string(inner_hi) +
                              "]: grid too small");

    TransferApply apply = options.apply;
    if (apply == TransferApply::automatic)
        apply = rule == SliceRule::trapezoid ? TransferApply::toeplitz_fft : TransferApply::dense;
    if (apply == TransferApply::toeplitz_fft && rule != SliceRule::trapezoid)
        throw DomainError("toeplitz_fft application needs the trapezoid slice rule");

    const std::size_t n = static_cast<std::size_t>(grid.n_points);
    const std::vector<double> xs = grid.points();
    const WindowedKernel kernel(grid, eps, p, k_pass, k_stop);
    const std::vector<Complex> table = kernel.sample(grid.x_min);  // Kw(j dx)

    std::vector<double> mask(n, 1.0);
    std::vector<bool> in_layer(n, false);
    for (std::size_t j = 0; j < n; ++j) {
        const double depth = std::max(inner_lo - xs[j], xs[j] - inner_hi);
        if (depth > 0.0) {
            const double s = std::min(1.0, depth / width);
            mask[j] = std::exp(-eta * eps * s * s * s * s);
            in_layer[j] = true;
        }
    }

    const bool static_v = V.time_independent();
    auto slice_time = [&](int i) { return ta + i * eps; };

    // Dense slice matrix for slice i (from t_{i-1} to t_i).
    auto dense_matrix = [&](int i) {
        Eigen::MatrixXcd M(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        const double t0 = slice_time(i - 1);
        const double t1 = slice_time(i);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) {
                const std::size_t d = j > k ? j - k : k - j;
                const double v = slice_phase_potential(V, rule, xs[k], t0, xs[j], t1);
                M(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
                    table[d] * std::exp(-kI * (eps * v / hbar)) * dx;
            }
        return M;
    };

    std::vector<Eigen::MatrixXcd> dense;
    if (apply == TransferApply::dense && slicing.n > 2) {
        if (static_v) {
            dense.push_back(dense_matrix(2));
        } else {
            for (int i = 2; i < slicing.n; ++i) dense.push_back(dense_matrix(i));
        }
    }

    // Circulant embedding of the Toeplitz kinetic matrix.
    const std::size_t q = next_pow2(2 * n);
    std::vector<Complex> circ_hat;
    if (apply == TransferApply::toeplitz_fft) {
        std::vector<Complex> circ(q);
        for (std::size_t d = 0; d < n; ++d) {
            circ[d] = table[d] * dx;
            if (d > 0) circ[q - d] = table[d] * dx;
        }
        Eigen::FFT<double> fft;
        fft.fwd(circ_hat, circ);
    }
    auto half_phase = [&](double t) {
        std::vector<Complex> ph(n);
        for (std::size_t j = 0; j < n; ++j) ph[j] = std::exp(-kI * (0.5 * eps * V(xs[j], t) / hbar));
        return ph;
    };
    std::vector<Complex> static_half;
    if (apply == TransferApply::toeplitz_fft && static_v) static_half = half_phase(ta);

    std::vector<Complex> result(pairs.size());
    std::vector<double> boundary(pairs.size(), 0.0);
    const unsigned threads = options.threads == 0 ? default_thread_count() : options.threads;

    parallel_for(pairs.size(), threads, [&](std::size_t c) {
        const double xa = pairs[c].first;
        const double xb = pairs[c].second;
        const int N = slicing.n;
        if (N == 1) {
            const Complex kw = kernel.sample(xa - (xb - grid.x_min)).front();
            result[c] = kw * std::exp(-kI * (eps *
                                              slice_phase_potential(V, rule, xa, slice_time(0), xb,
                                                                    slice_time(1)) /
                                              hbar));
            return;
        }
        std::vector<Complex> v = kernel.sample(xa);
        for (std::size_t j = 0; j < n; ++j)
            v[j] *= std::exp(-kI * (eps *
                                    slice_phase_potential(V, rule, xa, slice_time(0), xs[j],
                                                          slice_time(1)) /
                                    hbar)) *
                    mask[j];

        Eigen::FFT<double> fft;
        std::vector<Complex> buf(q), spectrum;
        for (int i = 2; i < N; ++i) {
            if (apply == TransferApply::dense) {
                const Eigen::MatrixXcd& M = static_v ? dense.front() : dense[static_cast<std::size_t>(i - 2)];
                Eigen::Map<Eigen::VectorXcd> vin(v.data(), static_cast<Eigen::Index>(n));
                Eigen::VectorXcd out = M * vin;
                for (std::size_t j = 0; j < n; ++j) v[j] = out[static_cast<Eigen::Index>(j)] * mask[j];
            } else {
                const std::vector<Complex> h0 = static_v ? static_half : half_phase(slice_time(i - 1));
                const std::vector<Complex> h1 = static_v ? static_half : half_phase(slice_time(i));
                std::fill(buf.begin(), buf.end(), Complex{});
                for (std::size_t j = 0; j < n; ++j) buf[j] = v[j] * h0[j];
                fft.fwd(spectrum, buf);
                for (std::size_t m = 0; m < q; ++m) spectrum[m] *= circ_hat[m];
                fft.inv(buf, spectrum);
                for (std::size_t j = 0; j < n; ++j) v[j] = buf[j] * h1[j] * mask[j];
            }
        }

        double total = 0.0;
        double layer = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double w = std::norm(v[j]);
            total += w;
            if (in_layer[j]) layer += w;
        }
        boundary[c] = total > 0.0 ? layer / total : 0.0;

        const std::vector<Complex> last = kernel.sample(xb);  // Kw(x_j - xb) = Kw(xb - x_j)
        Complex acc{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j)
            acc += last[j] *
                   std::exp(-kI * (eps *
                                   slice_phase_potential(V, rule, xs[j], slice_time(N - 1), xb,
                                                         slice_time(N)) /
                                   hbar)) *
                   v[j];
        result[c] = acc * dx;
    });

    if (report) {
        report->k_pass = k_pass;
        report->k_stop = k_stop;
        report->absorber_width = width;
        report->absorber_strength = eta;
        report->apply = apply;
        report->boundary_fraction = boundary.empty() ? 0.0 : *std::max_element(boundary.begin(), boundary.end());
    }
    return result;
}

}  // namespace feynpath
