#include "cfdim/stats.hpp"

#include <cmath>

#include "cfdim/errors.hpp"

namespace cfdim {

double pairwise_sum(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

MeanStderr mean_stderr(std::span<const double> xs) {
    MeanStderr out;
    out.n = xs.size();
    if (out.n == 0) return out;
    out.mean = pairwise_sum(xs) / static_cast<double>(out.n);
    if (out.n < 2) return out;
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double d = xs[i] - out.mean;
        sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / static_cast<double>(out.n - 1);
    out.stderr_ = std::sqrt(var / static_cast<double>(out.n));
    return out;
}

LinearFit least_squares(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw InsufficientData("least_squares needs >= 2 matched points");
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    const double den = n * sxx - sx * sx;
    if (den == 0.0) throw InsufficientData("least_squares: degenerate x values");
    LinearFit fit;
    fit.points = xs.size();
    fit.slope = (n * sxy - sx * sy) / den;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double ymean = sy / n;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += r * r;
        const double d = ys[i] - ymean;
        ss_tot += d * d;
    }
    fit.r_squared = (ss_tot > 0) ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

double chi_square_stat(std::span<const std::uint64_t> observed,
                       std::span<const double> expected_probs) {
    if (observed.size() != expected_probs.size() || observed.empty())
        throw ValidationError("chi_square_stat: mismatched bucket counts");
    std::uint64_t total = 0;
    double prob_total = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        total += observed[i];
        prob_total += expected_probs[i];
    }
    if (total == 0 || prob_total <= 0)
        throw ValidationError("chi_square_stat: empty sample or zero expected mass");
    double stat = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double expected = static_cast<double>(total) * expected_probs[i] / prob_total;
        if (expected <= 0) throw ValidationError("chi_square_stat: zero expected bucket");
        const double d = static_cast<double>(observed[i]) - expected;
        stat += d * d / expected;
    }
    return stat;
}

double chi_square_crit_999(unsigned df) {
    // standard upper 0.1% points
    static constexpr double table[] = {
        10.828, 13.816, 16.266, 18.467, 20.515, 22.458, 24.322,
        26.124, 27.877, 29.588, 31.264, 32.909, 34.528, 36.123,
        37.697, 39.252, 40.790, 42.312, 43.820, 45.315,
    };
    if (df < 1 || df > 20) throw ValidationError("chi_square_crit_999: df must be in [1,20]");
    return table[df - 1];
}

}  // namespace cfdim
