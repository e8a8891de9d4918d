#pragma once

#include <vector>

namespace feynpath {

// n-point rule for int f(x) exp(-x^2) dx, nodes ascending.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> scaled_weights;  // weights * exp(x^2)
};

// Golub-Welsch eigen-solve polished by Newton steps on the orthonormal
// Hermite recurrence. Supports 1 <= n <= 256.
GaussRule gauss_hermite(int n);

}  // namespace feynpath
