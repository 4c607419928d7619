#include <doctest.h>

#include <cmath>

#include "cfdim/cf.hpp"
#include "cfdim/rng.hpp"
#include "oracles.hpp"

using namespace cfdim;

namespace {
const std::uint64_t kSeeds[] = {1, 42, 1337};
}

TEST_CASE("eval_finite_cf on hand-computed words") {
    CHECK(eval_finite_cf(DigitWord{2}) == Rational(1, 2));
    CHECK(eval_finite_cf(DigitWord{1, 1, 1}) == Rational(2, 3));
    CHECK(eval_finite_cf(DigitWord{2, 3}) == Rational(3, 7));
    CHECK_THROWS_AS(eval_finite_cf(DigitWord{}), EmptyWord);
}

TEST_CASE("continuant recurrence seeds and steps") {
    const ContinuantPair c1 = continuants(DigitWord{1});
    CHECK(c1.p_prev == 0);
    CHECK(c1.p_cur == 1);
    CHECK(c1.q_prev == 1);
    CHECK(c1.q_cur == 1);

    const ContinuantPair c11 = continuants(DigitWord{1, 1});
    CHECK(c11.p_prev == 1);
    CHECK(c11.p_cur == 1);
    CHECK(c11.q_prev == 1);
    CHECK(c11.q_cur == 2);

    const ContinuantPair c23 = continuants(DigitWord{2, 3});
    CHECK(c23.p_cur == 3);
    CHECK(c23.q_cur == 7);
    // convergent must equal the reduced finite CF value
    CHECK(Rational(c23.p_cur, c23.q_cur) == eval_finite_cf(DigitWord{2, 3}));
}

TEST_CASE("cylinder endpoints, orientation normalized") {
    const CylinderInterval full = cylinder(DigitWord{});
    CHECK(full.low == 0);
    CHECK(full.high == 1);
    CHECK(full.length() == 1);

    const CylinderInterval one = cylinder(DigitWord{1});
    CHECK(one.low == Rational(1, 2));
    CHECK(one.high == 1);
    CHECK(one.length() == Rational(1, 2));

    const CylinderInterval two = cylinder(DigitWord{2});
    CHECK(two.low == Rational(1, 3));
    CHECK(two.high == Rational(1, 2));
    CHECK(two.length() == Rational(1, 6));

    const CylinderInterval oo = cylinder(DigitWord{1, 1});
    CHECK(oo.low == Rational(1, 2));
    CHECK(oo.high == Rational(2, 3));
    CHECK(oo.length() == Rational(1, 6));
}

TEST_CASE("cylinder membership against the brute-force digit oracle") {
    // every x with first digit d lies in cylinder([d]) and vice versa
    const CylinderInterval c1 = cylinder(DigitWord{1});
    const CylinderInterval c2 = cylinder(DigitWord{2});
    for (int i = 1; i < 1009; ++i) {
        const Rational x(i, 1009);
        const std::uint64_t d = oracles::first_digit(x);
        CHECK(c1.contains(x) == (d == 1));
        CHECK(c2.contains(x) == (d == 2));
    }
}

TEST_CASE("digit extraction from exact rationals") {
    CHECK(digits_of(Rational(2, 3), 2) == DigitWord{1, 2});
    CHECK_THROWS_AS(digits_of(Rational(2, 3), 3), RationalTermination);
    try {
        digits_of(Rational(2, 3), 3);
    } catch (const RationalTermination& e) {
        CHECK(e.digits() == std::vector<std::uint64_t>{1, 2});
    }

    CHECK(digits_of(Rational(1, 2), 1) == DigitWord{2});
    CHECK_THROWS_AS(digits_of(Rational(1, 2), 2), RationalTermination);
}

TEST_CASE("digits of sqrt(2)-1 at 256 bits") {
    BigInt two_shifted = 2;
    mpz_mul_2exp(two_shifted.get_mpz_t(), two_shifted.get_mpz_t(), 2 * 256);
    BigInt root;
    mpz_sqrt(root.get_mpz_t(), two_shifted.get_mpz_t());  // floor(sqrt(2) * 2^256)
    BigInt one_shifted = 1;
    mpz_mul_2exp(one_shifted.get_mpz_t(), one_shifted.get_mpz_t(), 256);
    const RealPoint x = RealPoint::with_precision(root - one_shifted, 256);
    CHECK(digits_of(x, 5) == DigitWord{2, 2, 2, 2, 2});
}

TEST_CASE("precision budget certifies digits and exhausts honestly") {
    // 40-bit input: cylinder length must stay above 2^-8, which caps the
    // depth at a couple of digits
    BigInt m = (BigInt(1) << 40) * 2 / 3;
    const RealPoint x = RealPoint::with_precision(m, 40);
    CHECK_THROWS_AS(digits_of(x, 30), PrecisionExhausted);

    // generous precision on an irrational point: no throw
    BigInt two_shifted = 2;
    mpz_mul_2exp(two_shifted.get_mpz_t(), two_shifted.get_mpz_t(), 2 * 200);
    BigInt root;
    mpz_sqrt(root.get_mpz_t(), two_shifted.get_mpz_t());
    const RealPoint y = RealPoint::with_precision(root - (BigInt(1) << 200), 200);
    const DigitWord w = digits_of(y, 10);
    CHECK(w.size() == 10);
    CHECK(w == DigitWord{2, 2, 2, 2, 2, 2, 2, 2, 2, 2});
}

TEST_CASE("gauss_map on rationals") {
    CHECK(gauss_map(Rational(2, 3)) == Rational(1, 2));
    CHECK(gauss_map(Rational(1, 3)) == 0);
    CHECK(gauss_map(Rational(2, 5)) == Rational(1, 2));
    CHECK_THROWS_AS(gauss_map(Rational(0)), UndefinedAtZero);

    // wrapped points carry the terminal orbit as an exact zero
    const RealPoint x = RealPoint::exact(Rational(1, 3));
    CHECK(gauss_map(x).is_zero());
    CHECK_THROWS_AS(gauss_map(gauss_map(x)), UndefinedAtZero);
}

TEST_CASE("unimodularity: exhaustive small words plus random deep words") {
    // exhaustive: all words of length <= 4 with digits <= 9
    std::vector<std::uint64_t> w;
    for (std::size_t len = 1; len <= 4; ++len) {
        w.assign(len, 1);
        bool more = true;
        while (more) {
            const ContinuantPair c = continuants(DigitWord{std::vector<std::uint64_t>(w)});
            const BigInt det = c.unimodular_det();
            CHECK((det == 1 || det == -1));
            more = false;
            for (std::size_t i = len; i-- > 0;) {
                if (w[i] < 9) {
                    ++w[i];
                    for (std::size_t j = i + 1; j < len; ++j) w[j] = 1;
                    more = true;
                    break;
                }
            }
        }
    }
    for (std::uint64_t seed : kSeeds) {
        Rng rng(seed);
        for (int rep = 0; rep < 500; ++rep) {
            const std::size_t len = 1 + rng.below(12);
            const ContinuantPair c = continuants(oracles::random_word(rng, len, 9));
            const BigInt det = c.unimodular_det();
            CHECK((det == 1 || det == -1));
        }
    }
}

TEST_CASE("children partition their parent cylinder") {
    for (std::uint64_t seed : kSeeds) {
        Rng rng(seed);
        for (int rep = 0; rep < 8; ++rep) {
            const std::size_t depth = rng.below(8);
            const DigitWord w = oracles::random_word(rng, depth, 6);
            const CylinderInterval parent = cylinder(w);

            // containment and pairwise disjointness for c <= 50
            Rational prev_hi(-1);
            std::vector<CylinderInterval> kids;
            for (std::uint64_t c = 1; c <= 50; ++c) kids.push_back(cylinder(w.appended(c)));
            // children sit side by side; sort by low endpoint
            std::sort(kids.begin(), kids.end(),
                      [](const auto& a, const auto& b) { return a.low < b.low; });
            for (const auto& kid : kids) {
                CHECK(kid.low >= parent.low);
                CHECK(kid.high <= parent.high);
                CHECK(kid.low >= prev_hi);
                prev_hi = kid.high;
            }

            // residual of the digit split shrinks like 1/C
            for (const std::uint64_t big_c : {10ULL, 100ULL, 10000ULL}) {
                double total = 0.0;
                ContinuantPair cont = continuants(w);
                for (std::uint64_t c = 1; c <= big_c; ++c) {
                    ContinuantPair child = cont;
                    child.advance(c);
                    total += Rational(Rational(1) / (child.q_cur * (child.q_cur + child.q_prev)))
                                 .get_d();
                }
                const double parent_len = parent.length().get_d();
                const double residual = (parent_len - total) / parent_len;
                CHECK(residual > 0.0);
                CHECK(residual < 2.0 / static_cast<double>(big_c));
            }
        }
    }
}

TEST_CASE("roundtrip: digits of the cylinder midpoint recover the word") {
    // exhaustive shallow
    for (std::uint64_t a = 1; a <= 5; ++a)
        for (std::uint64_t b = 1; b <= 5; ++b)
            for (std::uint64_t c = 1; c <= 5; ++c) {
                const DigitWord w{a, b, c};
                CHECK(digits_of(cylinder(w).midpoint(), 3) == w);
            }
    // random deeper
    for (std::uint64_t seed : kSeeds) {
        Rng rng(seed);
        for (int rep = 0; rep < 100; ++rep) {
            const std::size_t depth = 1 + rng.below(10);
            const DigitWord w = oracles::random_word(rng, depth, 9);
            CHECK(digits_of(cylinder(w).midpoint(), depth) == w);
        }
    }
}

TEST_CASE("all-ones word maximizes cylinder length at fixed depth") {
    // lengths 1/(f_n f_{n+1}) with f = 1, 2, 3, 5, 8, ...
    BigInt f_prev = 1, f_cur = 2;
    for (std::size_t n = 1; n <= 15; ++n) {
        const DigitWord ones{std::vector<std::uint64_t>(n, 1)};
        const Rational len = cylinder(ones).length();
        CHECK(len == Rational(1) / (f_prev * f_cur));
        const BigInt next = f_prev + f_cur;
        f_prev = f_cur;
        f_cur = next;
    }
    for (std::uint64_t seed : kSeeds) {
        Rng rng(seed);
        for (int rep = 0; rep < 200; ++rep) {
            const std::size_t depth = 1 + rng.below(12);
            DigitWord w = oracles::random_word(rng, depth, 9);
            const DigitWord ones{std::vector<std::uint64_t>(depth, 1)};
            CHECK(cylinder(w).length() <= cylinder(ones).length());
        }
    }
}

TEST_CASE("gauss_map shifts the digit sequence") {
    for (std::uint64_t seed : kSeeds) {
        Rng rng(seed);
        for (int rep = 0; rep < 30; ++rep) {
            // random 200-bit point
            BigInt m = 0;
            for (int i = 0; i < 3; ++i) m = (m << 64) | rng.next();
            m = (m << 8) | rng.below(256);
            m %= (BigInt(1) << 200) - 2;
            if (m == 0) m = 1;
            const RealPoint x = RealPoint::with_precision(m, 200);
            const DigitWord full = digits_of(x, 9);
            const DigitWord shifted = digits_of(gauss_map(x), 8);
            CHECK(shifted == full.suffix(1));
        }
    }
}
