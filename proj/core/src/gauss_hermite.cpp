#include "feynpath/gauss_hermite.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <mutex>

#include "feynpath/errors.hpp"
#include "feynpath/types.hpp"

namespace feynpath {

namespace {

// Hermite functions p_k(x) exp(-x^2/2), p_k orthonormal under exp(-x^2).
// Returns the n-th value, its polynomial-derivative counterpart and sum_{k<n} of squares.
struct Recurrence {
    double pn;
    double dpn;
    double sum_sq;
};

Recurrence orthonormal_hermite(int n, double x) {
    double p_prev = 0.0;
    double p = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
    double sum_sq = 0.0;
    for (int k = 0; k < n; ++k) {
        sum_sq += p * p;
        const double next = std::sqrt(2.0 / (k + 1.0)) * x * p - std::sqrt(k / (k + 1.0)) * p_prev;
        p_prev = p;
        p = next;
    }
    // p_n' = sqrt(2n) p_{n-1}
    return {p, std::sqrt(2.0 * n) * p_prev, sum_sq};
}

GaussRule compute(int n) {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
    for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(k / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    rule.scaled_weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = solver.eigenvalues()[i];
        for (int it = 0; it < 4; ++it) {
            const Recurrence r = orthonormal_hermite(n, x);
            if (r.dpn == 0.0) break;
            const double dx = r.pn / r.dpn;
            x -= dx;
            if (std::abs(dx) <= 1e-16 * std::max(1.0, std::abs(x))) break;
        }
        rule.nodes[static_cast<std::size_t>(i)] = x;
        const double scaled = 1.0 / orthonormal_hermite(n, x).sum_sq;
        rule.scaled_weights[static_cast<std::size_t>(i)] = scaled;
        rule.weights[static_cast<std::size_t>(i)] = scaled * std::exp(-x * x);
    }
    return rule;
}

}  // namespace

GaussRule gauss_hermite(int n) {
    if (n < 1 || n > 256) throw DomainError("Gauss-Hermite order must lie in [1, 256]");
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute(n)).first;
    return it->second;
}

}  // namespace feynpath
