#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cfdim {

// Fixed-shape pairwise summation. The reduction tree depends only on the
// length of the input, so sums over per-sample vectors are bit-stable
// across worker counts.
double pairwise_sum(std::span<const double> xs);

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;  // standard error of the mean
    std::size_t n = 0;
};

// Two-pass mean / standard error with pairwise reductions.
MeanStderr mean_stderr(std::span<const double> xs);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t points = 0;
};

// Ordinary least squares of y on x.
LinearFit least_squares(std::span<const double> xs, std::span<const double> ys);

// Pearson chi-square statistic for observed counts vs expected probabilities
// (expected renormalized over the supplied buckets).
double chi_square_stat(std::span<const std::uint64_t> observed,
                       std::span<const double> expected_probs);

// Upper critical value of the chi-square distribution at tail mass 0.001
// (i.e. the test passes at p > 0.001 iff stat < this), df in [1, 20].
double chi_square_crit_999(unsigned df);

}  // namespace cfdim
