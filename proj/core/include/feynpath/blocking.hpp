#pragma once

#include <cstddef>
#include <vector>

namespace feynpath {

struct BlockingLevel {
    std::size_t block_size = 1;
    std::size_t blocks = 0;
    double error = 0.0;        // standard error of the mean at this level
    double error_of_error = 0.0;
};

struct BlockingResult {
    double mean = 0.0;
    double error = 0.0;
    double autocorrelation_time = 0.5;  // 0.5 for uncorrelated data
    std::size_t samples = 0;
    bool plateau = false;  // false: error is a lower bound, do not trust it
    std::vector<BlockingLevel> levels;
};

// Flyvbjerg-Petersen pairwise blocking. The plateau is the first level whose
// error agrees with the next two levels within twice their uncertainty;
// levels with fewer than min_blocks blocks are ignored.
BlockingResult blocking_analysis(const std::vector<double>& samples, std::size_t min_blocks = 32);

}  // namespace feynpath
