#pragma once

#include <cstdint>

#include "cfdim/cf.hpp"
#include "cfdim/hp.hpp"
#include "cfdim/rng.hpp"

namespace cfdim {

// W(u,v;s,t) = integral over [s,t] of dr / ((1+u r)(1+v r)).
// Every Gauss-measure quantity of a cylinder reduces to this integral: if a
// word has continuants (p',p,q',q) and x = (p + p' r)/(q + q' r) for the
// continuation value r = T^m x in (0,1), then the measure density pulled
// back to r is 1/(ln2 * q(q+p) * (1+u r)(1+v r)) with u = q'/q and
// v = (q'+p')/(q+p). Evaluated in a cancellation-free form.
double cross_ratio_integral(double u, double v, double s, double t);

// Tracks u = q'/q, v = (q'+p')/(q+p), ln q and ln(q+p) of a growing word in
// plain doubles. Digit appends are O(1); all conditional-law and log-mass
// queries reduce to cross_ratio_integral calls. The recurrences are Möbius
// contractions, so double rounding does not accumulate.
class CylinderTracker {
public:
    void advance(std::uint64_t digit);

    std::size_t depth() const { return depth_; }
    double u() const { return u_; }
    double v() const { return v_; }

    // ln mu_G(I_w) and ln |I_w|
    double log_mass() const;
    double log_length() const;

    // conditional law of the next digit given the word so far
    double next_digit_prob(std::uint64_t c) const;       // P(alpha_{m+1} = c | w)
    double next_digit_tail(std::uint64_t c_max) const;   // P(alpha_{m+1} > c_max | w)
    std::uint64_t sample_next_digit(Rng& rng) const;

    // conditional entropy of the next digit, summed for c <= cap, plus the
    // tail mass beyond the cap
    void conditional_entropy(std::uint64_t cap, double& entropy_below,
                             double& tail_mass) const;

    // certified upper bound on the entropy carried by digits past the cap:
    // dyadic blocks (2^j cap, 2^(j+1) cap] with exact block masses m_j can
    // hide at most m_j ln(block_size / m_j) each
    double tail_entropy_bound(std::uint64_t cap) const;

private:
    double u_ = 0.0;
    double v_ = 1.0;
    double log_q_ = 0.0;
    double log_qp_ = 0.0;
    std::size_t depth_ = 0;
};

// mu_G(E) = (1/log 2) * integral over E of dx/(1+x); closed form for
// intervals: log2((1+high)/(1+low)). Measure values come in two working
// precisions: the plain double path (53-bit, ~1 ulp since the interval
// ratio is formed exactly) and the _hp path at 192 bits.
double mu_g_interval(const Rational& low, const Rational& high);
HPReal mu_g_interval_hp(const Rational& low, const Rational& high);

double mu_g_cylinder(const DigitWord& w);
HPReal mu_g_cylinder_hp(const DigitWord& w);

// mu_G mass of the first-digit cylinder I_c, closed form.
double mu_g_first_digit(std::uint64_t c);

// n digits distributed exactly as (alpha_1..alpha_n) under mu_G, sampled
// digit-by-digit from the closed-form conditional law (no alphabet cap).
DigitWord sample_mu_g_digits(std::size_t n, Rng& rng);

// mu_G(I_uv) / (mu_G(I_u) mu_G(I_v)) for the concatenation uv.
double quasi_independence_ratio(const DigitWord& u, const DigitWord& v);

// |mu_G(I_bac) - mu_G(I_ac) mu_G(I_ba) / mu_G(I_a)|; a may be empty
// (I_a is then the whole space). A positive value witnesses that the digit
// sequence is not a |a|-step Markov chain under mu_G.
struct MarkovDefectWitness {
    DigitWord b;
    DigitWord a;
    std::uint64_t c = 1;
    double defect = 0.0;
};

MarkovDefectWitness markov_defect(const DigitWord& b, const DigitWord& a, std::uint64_t c);
HPReal markov_defect_hp(const DigitWord& b, const DigitWord& a, std::uint64_t c);

// Exhaustive scan over b in {1..D}^m (m <= max_m), a in {1..D}^k, c in
// {1..D}, in lexicographic order of (m, b, a, c); returns the witness with
// maximal defect, first-found on ties.
MarkovDefectWitness find_markov_witness(unsigned k, std::uint64_t max_digit, unsigned max_m);

}  // namespace cfdim
