#pragma once

// Test-only oracles, independent of the library paths they check.

#include <cmath>
#include <cstdint>
#include <vector>

#include "cfdim/cf.hpp"
#include "cfdim/rng.hpp"

namespace oracles {

// first CF digit of an exact rational by plain floor division
inline std::uint64_t first_digit(const cfdim::Rational& x) {
    cfdim::Rational inv = 1 / x;
    cfdim::BigInt d = inv.get_num() / inv.get_den();
    return mpz_get_ui(d.get_mpz_t());
}

// mu_G of an interval by the direct formula, no shared code with the library
inline double mu_g_direct(double lo, double hi) {
    return (std::log1p(hi) - std::log1p(lo)) / std::log(2.0);
}

// three-sigma binomial band
inline double binomial_3sigma(double p, std::uint64_t n) {
    return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

// random word with digits in [1, max_digit]
inline cfdim::DigitWord random_word(cfdim::Rng& rng, std::size_t len, std::uint64_t max_digit) {
    std::vector<std::uint64_t> ds(len);
    for (auto& d : ds) d = 1 + rng.below(max_digit);
    return cfdim::DigitWord(std::move(ds));
}

// composite Simpson quadrature of -2 ln(x)/((1+x) ln 2) over (0,1) via the
// substitution x = exp(-t), t in (0, T]
inline double gauss_lyapunov_quadrature() {
    const double T = 45.0;
    const int n = 20000;  // even
    const double h = T / n;
    auto g = [](double t) {
        const double x = std::exp(-t);
        return 2.0 * t * x / ((1.0 + x) * std::log(2.0));
    };
    double s = g(0.0) + g(T);
    for (int i = 1; i < n; ++i) s += g(i * h) * ((i % 2) ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace oracles
