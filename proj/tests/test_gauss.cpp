#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "cfdim/gauss.hpp"
#include "cfdim/stats.hpp"
#include "oracles.hpp"

using namespace cfdim;

namespace {
const std::uint64_t kSeeds[] = {1, 42, 1337};
constexpr double kMu1 = 0.4150374992788437;    // ln(4/3)/ln 2
constexpr double kMu2 = 0.16992500144231237;   // ln(9/8)/ln 2
constexpr double kMu11 = 0.15200309344505006;  // ln(10/9)/ln 2
}  // namespace

TEST_CASE("interval masses against the closed-form logarithm oracle") {
    CHECK(mu_g_interval(Rational(0), Rational(1)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mu_g_interval(Rational(1, 2), Rational(1)) ==
          doctest::Approx(kMu1).epsilon(1e-14));
    CHECK(mu_g_interval(Rational(1, 3), Rational(1, 3)) == 0.0);
    CHECK_THROWS_AS(mu_g_interval(Rational(1, 2), Rational(1, 3)), DomainError);
    CHECK_THROWS_AS(mu_g_interval(Rational(-1, 2), Rational(1, 3)), DomainError);
}

TEST_CASE("cylinder masses") {
    CHECK(mu_g_cylinder(DigitWord{}) == 1.0);
    CHECK(mu_g_cylinder(DigitWord{1}) == doctest::Approx(kMu1).epsilon(1e-14));
    CHECK(mu_g_cylinder(DigitWord{1, 1}) == doctest::Approx(kMu11).epsilon(1e-14));
    CHECK(mu_g_cylinder(DigitWord{2}) == doctest::Approx(kMu2).epsilon(1e-14));
}

TEST_CASE("high-precision masses agree with the double path") {
    for (std::uint64_t seed : kSeeds) {
        Rng rng(seed);
        for (int rep = 0; rep < 40; ++rep) {
            const DigitWord w = oracles::random_word(rng, 1 + rng.below(6), 8);
            const double lo = mu_g_cylinder(w);
            const double hi = mu_g_cylinder_hp(w).to_double();
            CHECK(lo == doctest::Approx(hi).epsilon(1e-13));
        }
    }
}

TEST_CASE("tracker log-mass matches the closed form") {
    for (std::uint64_t seed : kSeeds) {
        Rng rng(seed);
        for (int rep = 0; rep < 40; ++rep) {
            const DigitWord w = oracles::random_word(rng, 1 + rng.below(7), 9);
            CylinderTracker t;
            for (auto d : w) t.advance(d);
            CHECK(std::exp(t.log_mass()) == doctest::Approx(mu_g_cylinder(w)).epsilon(1e-12));
            CHECK(std::exp(t.log_length()) ==
                  doctest::Approx(cylinder(w).length().get_d()).epsilon(1e-12));
        }
    }
}

TEST_CASE("conditional next-digit law is a probability") {
    for (std::uint64_t seed : kSeeds) {
        Rng rng(seed);
        for (int rep = 0; rep < 20; ++rep) {
            CylinderTracker t;
            const DigitWord w = oracles::random_word(rng, rng.below(6), 9);
            for (auto d : w) t.advance(d);
            double total = 0.0;
            for (std::uint64_t c = 1; c <= 3000; ++c) total += t.next_digit_prob(c);
            total += t.next_digit_tail(3000);
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
            // conditional law consistency with mass ratios
            const DigitWord wc = w.appended(7);
            CHECK(t.next_digit_prob(7) ==
                  doctest::Approx(mu_g_cylinder(wc) / mu_g_cylinder(w)).epsilon(1e-11));
        }
    }
}

TEST_CASE("sampler reproduces first-digit and two-digit laws") {
    const std::uint64_t n_draws = 1000000;
    for (std::uint64_t seed : kSeeds) {
        Rng rng(seed);
        std::uint64_t ones = 0, twos = 0;
        for (std::uint64_t i = 0; i < n_draws; ++i) {
            CylinderTracker t;
            const std::uint64_t c = t.sample_next_digit(rng);
            ones += (c == 1);
            twos += (c == 2);
        }
        const double f1 = static_cast<double>(ones) / n_draws;
        const double f2 = static_cast<double>(twos) / n_draws;
        CHECK(std::fabs(f1 - kMu1) < oracles::binomial_3sigma(kMu1, n_draws));
        CHECK(std::fabs(f2 - kMu2) < oracles::binomial_3sigma(kMu2, n_draws));
    }

    Rng rng(kSeeds[1]);
    const std::uint64_t n_words = 400000;
    std::uint64_t hit_11 = 0;
    for (std::uint64_t i = 0; i < n_words; ++i) {
        const DigitWord w = sample_mu_g_digits(2, rng);
        hit_11 += (w == DigitWord{1, 1});
    }
    const double f11 = static_cast<double>(hit_11) / n_words;
    CHECK(std::fabs(f11 - kMu11) < oracles::binomial_3sigma(kMu11, n_words));
}

TEST_CASE("sampler passes the chi-square test against the digit law") {
    const std::uint64_t n_draws = 1000000;
    for (std::uint64_t seed : kSeeds) {
        Rng rng(seed);
        std::vector<std::uint64_t> counts(9, 0);  // digits 1..8 plus tail
        for (std::uint64_t i = 0; i < n_draws; ++i) {
            CylinderTracker t;
            const std::uint64_t c = t.sample_next_digit(rng);
            counts[std::min<std::uint64_t>(c, 9) - 1]++;
        }
        std::vector<double> expected;
        double tail = 1.0;
        for (std::uint64_t c = 1; c <= 8; ++c) {
            expected.push_back(mu_g_first_digit(c));
            tail -= expected.back();
        }
        expected.push_back(tail);
        const double stat = chi_square_stat(counts, expected);
        CHECK(stat < chi_square_crit_999(8));
    }
}

TEST_CASE("quasi-independence ratios") {
    const double r11 = quasi_independence_ratio(DigitWord{1}, DigitWord{1});
    CHECK(r11 == doctest::Approx(kMu11 / (kMu1 * kMu1)).epsilon(1e-10));
    CHECK(r11 == doctest::Approx(0.882427).epsilon(1e-5));

    // closed form for the concatenation [1]+[2]: I_12 = (2/3, 3/4)
    const double r12 = quasi_independence_ratio(DigitWord{1}, DigitWord{2});
    const double expected = oracles::mu_g_direct(2.0 / 3.0, 3.0 / 4.0) / (kMu1 * kMu2);
    CHECK(r12 == doctest::Approx(expected).epsilon(1e-10));

    // exhaustive scan over short pairs stays in the quasi-independence band;
    // the same band holds for random deeper pairs
    double lo = 1e300, hi = 0.0;
    for (std::uint64_t a = 1; a <= 8; ++a)
        for (std::uint64_t b = 1; b <= 8; ++b)
            for (std::uint64_t c = 1; c <= 8; ++c)
                for (std::uint64_t d = 1; d <= 8; ++d) {
                    const double r =
                        quasi_independence_ratio(DigitWord{a, b}, DigitWord{c, d});
                    lo = std::min(lo, r);
                    hi = std::max(hi, r);
                }
    for (std::uint64_t seed : kSeeds) {
        Rng rng(seed);
        for (int rep = 0; rep < 4000; ++rep) {
            const DigitWord u = oracles::random_word(rng, 1 + rng.below(6), 8);
            const DigitWord v = oracles::random_word(rng, 1 + rng.below(6), 8);
            const double r = quasi_independence_ratio(u, v);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
    }
    CHECK(lo > 0.3);
    CHECK(hi < 3.5);
}

TEST_CASE("markov defect values") {
    const MarkovDefectWitness w1 = markov_defect(DigitWord{1}, DigitWord{}, 1);
    CHECK(w1.defect == doctest::Approx(std::fabs(kMu11 - kMu1 * kMu1)).epsilon(1e-10));
    CHECK(std::fabs(w1.defect - 0.0202526) < 1e-6);
    // the hp oracle confirms the double path to near-ulp accuracy
    const double hp = markov_defect_hp(DigitWord{1}, DigitWord{}, 1).to_double();
    CHECK(std::fabs(w1.defect - hp) < 1e-12);

    const MarkovDefectWitness w2 = markov_defect(DigitWord{1}, DigitWord{}, 2);
    const double mu12 = oracles::mu_g_direct(2.0 / 3.0, 3.0 / 4.0);
    CHECK(w2.defect == doctest::Approx(std::fabs(mu12 - kMu1 * kMu2)).epsilon(1e-9));

    // degenerate a == b still yields a finite nonnegative defect
    const MarkovDefectWitness w3 = markov_defect(DigitWord{3}, DigitWord{3}, 2);
    CHECK(w3.defect >= 0.0);
    CHECK(std::isfinite(w3.defect));
}

TEST_CASE("witness search finds the maximal small-case defect") {
    // independent 4-case oracle scan for k=0, D=2, m=1
    double best = -1.0;
    std::uint64_t best_b = 0, best_c = 0;
    for (std::uint64_t b = 1; b <= 2; ++b)
        for (std::uint64_t c = 1; c <= 2; ++c) {
            const double defect = markov_defect(DigitWord{b}, DigitWord{}, c).defect;
            if (defect > best) {
                best = defect;
                best_b = b;
                best_c = c;
            }
        }
    const MarkovDefectWitness found = find_markov_witness(0, 2, 1);
    CHECK(found.b == DigitWord{best_b});
    CHECK(found.c == best_c);
    CHECK(found.defect == doctest::Approx(best));
    CHECK(found.defect == doctest::Approx(0.0202530).epsilon(1e-4));

    // k=1 over three digits: strictly positive defect
    const MarkovDefectWitness deeper = find_markov_witness(1, 3, 2);
    CHECK(deeper.defect > 1e-4);

    // the single-case scan (D=1) still yields the all-ones defect
    const MarkovDefectWitness single = find_markov_witness(0, 1, 1);
    CHECK(single.defect > 0.02);

    // a witness must exist for every small conditioning length
    for (unsigned k = 0; k <= 3; ++k)
        CHECK_NOTHROW(find_markov_witness(k, 2, 1));
}

TEST_CASE("additivity over digit splits with explicit tails") {
    for (std::uint64_t seed : kSeeds) {
        Rng rng(seed);
        for (int rep = 0; rep < 6; ++rep) {
            const DigitWord w = oracles::random_word(rng, rng.below(6), 6);
            const double parent = mu_g_cylinder(w);
            const std::uint64_t cap = 1000;
            double total = 0.0;
            for (std::uint64_t c = cap; c >= 1; --c) total += mu_g_cylinder(w.appended(c));
            CHECK(total <= parent * (1.0 + 1e-12));
            CHECK(total >= parent * (1.0 - 2.0 / cap));
        }
    }
}

TEST_CASE("invariance: summing a leading digit preserves cylinder mass") {
    for (std::uint64_t seed : kSeeds) {
        Rng rng(seed);
        for (int rep = 0; rep < 6; ++rep) {
            const DigitWord w = oracles::random_word(rng, 1 + rng.below(5), 6);
            const std::uint64_t cap = 2000;
            double total = 0.0;
            for (std::uint64_t c = cap; c >= 1; --c) {
                const DigitWord cw = DigitWord{c} + w;
                total += mu_g_cylinder(cw);
            }
            const double tail = mu_g_interval(Rational(0), Rational(1, cap + 1));
            CHECK(std::fabs(total - mu_g_cylinder(w)) <= tail);
        }
    }
}

TEST_CASE("density of mu_G stays within its global bounds") {
    const double lo_bound = 1.0 / (2.0 * std::log(2.0));
    const double hi_bound = 1.0 / std::log(2.0);
    for (std::uint64_t seed : kSeeds) {
        Rng rng(seed);
        for (int rep = 0; rep < 50; ++rep) {
            const DigitWord w = oracles::random_word(rng, 1 + rng.below(6), 9);
            const CylinderInterval cyl = cylinder(w);
            const double ratio = mu_g_cylinder(w) / cyl.length().get_d();
            CHECK(ratio >= lo_bound * (1.0 - 1e-9));
            CHECK(ratio <= hi_bound * (1.0 + 1e-9));
        }
    }
}
