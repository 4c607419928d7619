#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfdim/cf.hpp"

namespace cfdim {

// digits of an f-expansion; base-M digits include 0
using FWord = std::vector<std::int64_t>;

// An f-expansion: x = f(a_1 + f(a_2 + ...)) for a monotone continuous f.
// Decreasing case: f on [1, M+1] with f(1)=1, f(M+1)=0 (continued fractions
// are f(y)=1/y with M infinite). Increasing case: f on [0, M] with f(0)=0,
// f(M)=1 (base-M is f(y)=y/M). The digit map is T x = f^{-1}(x) mod 1.
class ExpansionScheme {
public:
    enum class Direction { increasing, decreasing };

    static ExpansionScheme continued_fraction();
    static ExpansionScheme base(std::uint64_t m);
    static ExpansionScheme custom(Direction dir, std::uint64_t branch_count,
                                  std::function<double(double)> f,
                                  std::function<double(double)> f_inverse,
                                  std::string name);

    const std::string& name() const { return name_; }
    Direction direction() const { return dir_; }
    bool infinite_branches() const { return m_ == 0; }
    std::uint64_t branch_count() const;

    // alphabet N = { floor(y) : y in f^{-1}((0,1)) }
    std::int64_t alphabet_min() const;
    std::optional<std::int64_t> alphabet_max() const;
    bool in_alphabet(std::int64_t a) const;

    double f(double y) const { return f_(y); }
    double f_inverse(double x) const { return finv_(x); }

    // branch image I~_a = f((a, a+1)), endpoints sorted ascending
    std::pair<double, double> branch_interval(std::int64_t a) const;

    bool has_exact_step() const { return builtin_ != Builtin::none; }
    // digit and next remainder of one exact expansion step (built-ins only)
    std::pair<std::int64_t, Rational> exact_step(const Rational& r) const;
    // exact f(a + t) (built-ins only)
    Rational exact_f(std::int64_t a, const Rational& t) const;

private:
    enum class Builtin { none, cf, base_m };

    ExpansionScheme() = default;

    Builtin builtin_ = Builtin::none;
    Direction dir_ = Direction::decreasing;
    std::uint64_t m_ = 0;  // 0 = infinite
    std::function<double(double)> f_, finv_;
    std::string name_;
};

// First n digits a_i = floor(f^{-1}(r_{i-1})), r_i = frac(f^{-1}(r_{i-1})).
// Built-in schemes run on exact rationals (with interval certification for
// inexact points); custom schemes run on widened double intervals that
// refuse a digit whenever the interval straddles a branch boundary.
FWord digits_f(const ExpansionScheme& scheme, const RealPoint& x, std::size_t n);

struct FInterval {
    Rational low;
    Rational high;
    bool exact = true;  // false when endpoints came from double evaluators
};

// Bracket of all points whose first digits equal the given prefix, from the
// truncated expansion f(a_1 + f(a_2 + ... f(a_n + (0,1)))).
FInterval reconstruct_f(const ExpansionScheme& scheme, const FWord& word, std::size_t n);

// T x = f^{-1}(x) - floor(f^{-1}(x)); shifts the digit sequence by one.
double t_map_f(const ExpansionScheme& scheme, double x);
Rational t_map_f_exact(const ExpansionScheme& scheme, const Rational& x);

// Finite-difference check of the expanding-map conditions: C^2 branches,
// some power of T with derivative bounded away from 1, and the bounded
// distortion ratio |T''(x)/(T'(y)T'(z))| over branch triples.
struct ConditionReport {
    struct Branch {
        std::int64_t a = 0;
        bool c2_ok = false;
        double t_prime_min = 0.0;
        double t_prime_max = 0.0;
        double t_second_max = 0.0;
    };
    std::vector<Branch> branches;
    std::uint64_t branch_cap = 0;  // branches examined for infinite schemes
    bool capped = false;
    unsigned ell = 0;      // smallest power with grid-inf |(T^ell)'| above the margin
    double beta = 0.0;     // that infimum
    double q_estimate = 0.0;
    unsigned grid = 0;
};

ConditionReport check_conditions(const ExpansionScheme& scheme, unsigned grid,
                                 unsigned ell_max);

// Piecewise-constant fixed density of the Ulam-discretized transfer
// operator. Exact branch preimages f(a + bin) feed the matrix; for infinite
// schemes branches beyond the cap are folded in by a mass-preserving
// uniform remainder rule.
struct InvariantDensity {
    unsigned bins = 0;
    std::vector<double> values;  // density per bin, integrates to 1
    double l1_residual = 0.0;
    bool converged = false;
    std::uint64_t iterations = 0;
    std::uint64_t branch_cap = 0;

    double at(double x) const;
    double integral() const;
};

InvariantDensity ulam_invariant_density(const ExpansionScheme& scheme, unsigned bins,
                                        std::uint64_t max_iters, double tol,
                                        std::uint64_t branch_cap = 0);

// F(t) = mu_T([0,t]) and its inverse: either the piecewise-linear cumulative
// of an Ulam density, or the closed-form Gauss cumulative log2(1+x).
class CumulativeMap {
public:
    static CumulativeMap from_density(const InvariantDensity& density);
    static CumulativeMap gauss_closed_form();

    double F(double t) const;
    double F_inv(double y) const;

private:
    CumulativeMap() = default;
    bool closed_form_ = false;
    std::vector<double> cum_;   // cum_[i] = F(i/bins), cum_[bins] = 1
    std::vector<double> dens_;
};

// S = F o T o F^{-1}; preserves Lebesgue measure.
double conjugated_map_S(const ExpansionScheme& scheme, const CumulativeMap& cum, double x);
double conjugated_map_S(const ExpansionScheme& scheme, const InvariantDensity& density,
                        double x);

// Best-affine-fit residual of S on F(I~_a), normalized by the image length.
// Zero iff S is affine there at this resolution; a strictly positive value
// certifies numerically that the digits are not a k-step Markov chain under
// mu_T for any k.
double markov_obstruction_defect(const ExpansionScheme& scheme, const CumulativeMap& cum,
                                 std::int64_t branch, unsigned probes);

}  // namespace cfdim
