#include "feynpath/blocking.hpp"

#include <algorithm>
#include <cmath>

#include "feynpath/errors.hpp"

namespace feynpath {

BlockingResult blocking_analysis(const std::vector<double>& samples, std::size_t min_blocks) {
    if (samples.size() < 2) throw DomainError("blocking analysis needs at least two samples");
    BlockingResult out;
    out.samples = samples.size();
    double sum = 0.0;
    for (double v : samples) sum += v;
    out.mean = sum / static_cast<double>(samples.size());

    std::vector<double> data = samples;
    std::size_t block = 1;
    while (data.size() >= std::max<std::size_t>(min_blocks, 2)) {
        const double n = static_cast<double>(data.size());
        double m = 0.0;
        for (double v : data) m += v;
        m /= n;
        double var = 0.0;
        for (double v : data) var += (v - m) * (v - m);
        var /= n - 1.0;
        BlockingLevel level;
        level.block_size = block;
        level.blocks = data.size();
        level.error = std::sqrt(var / n);
        level.error_of_error = level.error / std::sqrt(2.0 * (n - 1.0));
        out.levels.push_back(level);

        std::vector<double> next(data.size() / 2);
        for (std::size_t i = 0; i < next.size(); ++i) next[i] = 0.5 * (data[2 * i] + data[2 * i + 1]);
        data.swap(next);
        block *= 2;
    }
    if (out.levels.empty()) {
        // Too few samples for min_blocks; fall back to the naive error.
        const double n = static_cast<double>(samples.size());
        double var = 0.0;
        for (double v : samples) var += (v - out.mean) * (v - out.mean);
        out.error = std::sqrt(var / (n - 1.0) / n);
        return out;
    }

    const auto& L = out.levels;
    std::size_t chosen = L.size();
    for (std::size_t l = 0; l + 2 < L.size(); ++l) {
        bool flat = true;
        for (std::size_t k = l + 1; k <= l + 2; ++k)
            if (std::abs(L[k].error - L[l].error) > 2.0 * L[k].error_of_error) flat = false;
        // Still rising significantly means correlations are not yet resolved.
        if (flat && L[l + 2].error <= L[l].error + 2.0 * L[l + 2].error_of_error) {
            chosen = l;
            break;
        }
    }
    if (chosen < L.size()) {
        out.plateau = true;
        out.error = L[chosen].error;
    } else {
        out.error = 0.0;
        for (const auto& lv : L) out.error = std::max(out.error, lv.error);
    }
    const double e0 = L.front().error;
    out.autocorrelation_time = e0 > 0.0 ? 0.5 * (out.error / e0) * (out.error / e0) : 0.5;
    return out;
}

}  // namespace feynpath
