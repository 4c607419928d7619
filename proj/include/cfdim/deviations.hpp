#pragma once

#include <cstdint>
#include <vector>

#include "cfdim/process.hpp"

namespace cfdim {

// A strictly increasing index map q with a witness L such that
// liminf q(n)/n < L. For explicit finite lists the witness certifies only
// the stored prefix.
struct SubsequenceSpec {
    enum class Kind { identity, arithmetic, explicit_list };

    Kind kind = Kind::identity;
    std::uint64_t step = 1;                // arithmetic: q(i) = step * i
    std::vector<std::uint64_t> indices;    // explicit list, strictly increasing
    double l_witness = 2.0;

    static SubsequenceSpec identity();
    static SubsequenceSpec arithmetic(std::uint64_t step);
    static SubsequenceSpec explicit_list(std::vector<std::uint64_t> indices, double l_witness);

    std::uint64_t q(std::uint64_t i_1based) const;
    std::uint64_t max_index(std::uint64_t n) const { return q(n); }
    void validate() const;
    std::string str() const;
};

// (1/n) sum_{i=1..n} 1[ digits q(i)+1 .. q(i)+|a| of the path equal a ].
// This is the symbolic form of the orbit average of the cylinder indicator
// along the subsequence: the indicator of I_a at T^j x reads digits j+1..j+|a|.
double frequency_average(const DigitWord& path, const DigitWord& a,
                         const SubsequenceSpec& q, std::uint64_t n);

struct DeviationEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t hits = 0;
};

// mu_G-probability that the frequency average of the word `a` along q
// deviates from mu_G(I_a) by more than delta at horizon n, by Monte Carlo.
DeviationEstimate deviation_probability_mc(const DigitWord& a, const SubsequenceSpec& q,
                                           double delta, std::uint64_t n,
                                           std::uint64_t samples, std::uint64_t seed,
                                           unsigned workers = 1);

struct DeviationSeries {
    DigitWord a;
    double delta = 0.0;
    SubsequenceSpec q;
    struct Entry {
        std::uint64_t n = 0;
        double estimate = 0.0;
        double stderr_ = 0.0;
        std::uint64_t samples = 0;
        std::uint64_t hits = 0;
    };
    std::vector<Entry> entries;
};

DeviationSeries deviation_series(const DigitWord& a, const SubsequenceSpec& q, double delta,
                                 const std::vector<std::uint64_t>& ns, std::uint64_t samples,
                                 std::uint64_t seed, unsigned workers = 1);

// Least squares of ln(estimate) against n over entries with at least 10
// positive hits; needs >= 3 usable entries.
struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::uint64_t fit_n_low = 0;
    std::uint64_t fit_n_high = 0;
    std::size_t points = 0;
};

DecayFit decay_rate_fit(const DeviationSeries& series);

// Fraction of nu-sampled paths whose finite-n frequency average deviates
// from mu_G(I_a) by more than delta. A finite-n proxy for the mass of the
// liminf deviation set; no convergence to the limit event is claimed.
DeviationEstimate gamma_mass_empirical(const DigitProcess& process, const DigitWord& a,
                                       const SubsequenceSpec& q, double delta,
                                       std::uint64_t n, std::uint64_t samples,
                                       std::uint64_t seed, unsigned workers = 1);

}  // namespace cfdim
