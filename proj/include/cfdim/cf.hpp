#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "cfdim/errors.hpp"

namespace cfdim {

using BigInt = mpz_class;
using Rational = mpq_class;

// A finite word of continued-fraction digits (positive integers). The empty
// word is a first-class value and addresses the whole space (0,1).
class DigitWord {
public:
    DigitWord() = default;
    DigitWord(std::initializer_list<std::uint64_t> ds) : digits_(ds) { validate(); }
    explicit DigitWord(std::vector<std::uint64_t> ds) : digits_(std::move(ds)) { validate(); }

    static DigitWord parse(const std::string& text);  // "1,2,3" or "1 2 3"

    std::size_t size() const { return digits_.size(); }
    bool empty() const { return digits_.empty(); }
    std::uint64_t operator[](std::size_t i) const { return digits_[i]; }
    const std::vector<std::uint64_t>& digits() const { return digits_; }

    void push_back(std::uint64_t d);
    DigitWord prefix(std::size_t n) const;
    DigitWord suffix(std::size_t from) const;  // digits from index `from` to end
    friend DigitWord operator+(const DigitWord& a, const DigitWord& b);
    DigitWord appended(std::uint64_t d) const;

    bool operator==(const DigitWord&) const = default;
    auto begin() const { return digits_.begin(); }
    auto end() const { return digits_.end(); }

    std::string str() const;  // "1,2,3"; empty word -> ""

private:
    void validate() const;
    std::vector<std::uint64_t> digits_;
};

// Numerators/denominators of the convergents of a word, via the three-term
// recurrence p_n = a_n p_{n-1} + p_{n-2}, q_n = a_n q_{n-1} + q_{n-2} with
// seeds p_{-1}=1, p_0=0, q_{-1}=0, q_0=1. Satisfies p q' - p' q = +-1.
struct ContinuantPair {
    BigInt p_prev = 1;
    BigInt p_cur = 0;
    BigInt q_prev = 0;
    BigInt q_cur = 1;

    void advance(std::uint64_t digit);
    // p q' - p' q, always +-1 (+1 for odd depth, -1 for even)
    BigInt unimodular_det() const;
};

ContinuantPair continuants(const DigitWord& w);

// [a_1,...,a_m] = 1/(a_1 + 1/(a_2 + ... + 1/a_m)), in lowest terms.
Rational eval_finite_cf(const DigitWord& w);

// The set of x whose first digits equal the word, as an interval with exact
// rational endpoints (sorted; orientation is recoverable from the depth).
struct CylinderInterval {
    Rational low;
    Rational high;
    std::size_t depth = 0;
    DigitWord word;

    Rational length() const { return high - low; }
    Rational midpoint() const { return (low + high) / 2; }
    bool contains(const Rational& x) const { return x > low && x < high; }
};

CylinderInterval cylinder(const DigitWord& w);

// A point of (0,1): either an exact rational, or a binary interval
// [m/2^P, (m+1)/2^P] representing a real known to P bits.
class RealPoint {
public:
    static RealPoint exact(const Rational& value);
    // value in [mantissa/2^bits, (mantissa+1)/2^bits]
    static RealPoint with_precision(const BigInt& mantissa, unsigned bits);

    bool is_exact() const { return exact_; }
    unsigned precision_bits() const { return bits_; }
    const Rational& low() const { return low_; }
    const Rational& high() const { return high_; }
    // midpoint, for display
    Rational approx() const { return (low_ + high_) / 2; }

    bool is_zero() const { return exact_ && low_ == 0; }

private:
    RealPoint() = default;
    static RealPoint unchecked(Rational lo, Rational hi, bool exact, unsigned bits);
    friend RealPoint gauss_map(const RealPoint& x);

    Rational low_, high_;
    bool exact_ = true;
    unsigned bits_ = 0;  // 0 means exact
};

// First n continued-fraction digits via the Gauss map. For inexact points a
// digit is emitted only while it is certified: both interval endpoints agree
// and the current cylinder length exceeds 2^(32-P).
DigitWord digits_of(const RealPoint& x, std::size_t n);
DigitWord digits_of(const Rational& x, std::size_t n);

// Tx = 1/x mod 1, exact on rationals. Returns 0 on a terminating orbit.
Rational gauss_map(const Rational& x);
RealPoint gauss_map(const RealPoint& x);

}  // namespace cfdim
