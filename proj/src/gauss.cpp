#include "cfdim/gauss.hpp"

#include <cmath>
#include <limits>

namespace cfdim {

namespace {

constexpr double kLn2 = 0.6931471805599453;
const double kLogLn2 = std::log(kLn2);

// log1p(z)/z, continuous through z = 0
double log1p_over(double z) {
    if (std::fabs(z) < 1e-5) return 1.0 - z * (0.5 - z * (1.0 / 3.0 - 0.25 * z));
    return std::log1p(z) / z;
}

}  // namespace

double cross_ratio_integral(double u, double v, double s, double t) {
    // primitive: (1/(u-v)) ln((1+ur)/(1+vr)); evaluated via a single log1p of
    // the cross ratio so nearby endpoints and u ~ v lose no precision
    const double d = u - v;
    const double a = t / (1.0 + v * t);
    const double b = s / (1.0 + v * s);
    const double z = d * (a - b) / (1.0 + d * b);
    return (a - b) / (1.0 + d * b) * log1p_over(z);
}

void CylinderTracker::advance(std::uint64_t digit) {
    const double a = static_cast<double>(digit);
    log_q_ += std::log(a + u_);
    log_qp_ += std::log(a + v_);
    u_ = 1.0 / (a + u_);
    v_ = 1.0 / (a + v_);
    ++depth_;
}

double CylinderTracker::log_mass() const {
    return std::log(cross_ratio_integral(u_, v_, 0.0, 1.0)) - kLogLn2 - log_q_ - log_qp_;
}

double CylinderTracker::log_length() const {
    // |I_w| = 1/(q(q+q')) and q+q' = q(1+u)
    return -(2.0 * log_q_ + std::log1p(u_));
}

double CylinderTracker::next_digit_prob(std::uint64_t c) const {
    const double cd = static_cast<double>(c);
    const double w = cross_ratio_integral(u_, v_, 1.0 / (cd + 1.0), 1.0 / cd);
    return w / cross_ratio_integral(u_, v_, 0.0, 1.0);
}

double CylinderTracker::next_digit_tail(std::uint64_t c_max) const {
    const double s = 1.0 / (static_cast<double>(c_max) + 1.0);
    return cross_ratio_integral(u_, v_, 0.0, s) / cross_ratio_integral(u_, v_, 0.0, 1.0);
}

std::uint64_t CylinderTracker::sample_next_digit(Rng& rng) const {
    const double total = cross_ratio_integral(u_, v_, 0.0, 1.0);
    const double target = (1.0 - rng.u01()) * total;
    // smallest c with W(0, 1/(c+1)) <= target, i.e. P(next <= c) >= U
    auto upper_tail = [&](std::uint64_t c) {
        return cross_ratio_integral(u_, v_, 0.0, 1.0 / (static_cast<double>(c) + 1.0));
    };
    std::uint64_t lo = 0, hi = 1;
    while (upper_tail(hi) > target) {
        lo = hi;
        if (hi >= (1ULL << 62)) break;  // tail mass ~2^-62; saturate
        hi *= 2;
    }
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (upper_tail(mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

void CylinderTracker::conditional_entropy(std::uint64_t cap, double& entropy_below,
                                          double& tail_mass) const {
    const double total = cross_ratio_integral(u_, v_, 0.0, 1.0);
    double h = 0.0;
    // share endpoint values between consecutive digit intervals
    double upper = 1.0;  // 1/c for c = 1
    double g_upper = upper / (1.0 + v_ * upper);
    const double d = u_ - v_;
    for (std::uint64_t c = 1; c <= cap; ++c) {
        const double lower = 1.0 / (static_cast<double>(c) + 1.0);
        const double g_lower = lower / (1.0 + v_ * lower);
        const double z = d * (g_upper - g_lower) / (1.0 + d * g_lower);
        const double w = (g_upper - g_lower) / (1.0 + d * g_lower) * log1p_over(z);
        const double p = w / total;
        if (p > 0.0) h -= p * std::log(p);
        upper = lower;
        g_upper = g_lower;
    }
    entropy_below = h;
    tail_mass = cross_ratio_integral(u_, v_, 0.0, 1.0 / (static_cast<double>(cap) + 1.0)) / total;
}

double CylinderTracker::tail_entropy_bound(std::uint64_t cap) const {
    const double total = cross_ratio_integral(u_, v_, 0.0, 1.0);
    double bound = 0.0;
    std::uint64_t lo = cap;
    for (int block = 0; block < 60; ++block) {
        const std::uint64_t hi = lo * 2;
        // mass of digits in (lo, hi]: the continuation value lies in
        // [1/(hi+1), 1/(lo+1))
        const double m = cross_ratio_integral(u_, v_, 1.0 / (static_cast<double>(hi) + 1.0),
                                              1.0 / (static_cast<double>(lo) + 1.0)) /
                         total;
        if (m <= 0.0) break;
        bound += m * std::log(static_cast<double>(hi - lo) / m);
        if (m < 1e-18) break;
        lo = hi;
    }
    return bound + 1e-15;  // cover the truncated far blocks
}

double mu_g_interval(const Rational& low, const Rational& high) {
    if (low < 0 || high > 1 || low > high)
        throw DomainError("mu_g_interval: need 0 <= low <= high <= 1");
    // log2((1+high)/(1+low)) = log1p((high-low)/(1+low)) / ln 2, with the
    // ratio formed exactly so short intervals lose nothing
    Rational s = (high - low) / (1 + low);
    return std::log1p(s.get_d()) / kLn2;
}

HPReal mu_g_interval_hp(const Rational& low, const Rational& high) {
    if (low < 0 || high > 1 || low > high)
        throw DomainError("mu_g_interval_hp: need 0 <= low <= high <= 1");
    Rational s = (high - low) / (1 + low);
    return HPReal(s).log1p() / HPReal::ln2();
}

double mu_g_cylinder(const DigitWord& w) {
    if (w.empty()) return 1.0;
    const CylinderInterval cyl = cylinder(w);
    return mu_g_interval(cyl.low, cyl.high);
}

HPReal mu_g_cylinder_hp(const DigitWord& w) {
    if (w.empty()) return HPReal(1.0);
    const CylinderInterval cyl = cylinder(w);
    return mu_g_interval_hp(cyl.low, cyl.high);
}

double mu_g_first_digit(std::uint64_t c) {
    // log2(1 + 1/(c(c+2)))
    const double cd = static_cast<double>(c);
    return std::log1p(1.0 / (cd * (cd + 2.0))) / kLn2;
}

DigitWord sample_mu_g_digits(std::size_t n, Rng& rng) {
    if (n < 1) throw ValidationError("sample_mu_g_digits: n must be >= 1");
    DigitWord w;
    CylinderTracker tracker;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t c = tracker.sample_next_digit(rng);
        tracker.advance(c);
        w.push_back(c);
    }
    return w;
}

double quasi_independence_ratio(const DigitWord& u, const DigitWord& v) {
    if (u.empty() || v.empty())
        throw EmptyWord("quasi_independence_ratio: both words must be nonempty");
    CylinderTracker tu, tv, tuv;
    for (std::uint64_t d : u) {
        tu.advance(d);
        tuv.advance(d);
    }
    for (std::uint64_t d : v) {
        tv.advance(d);
        tuv.advance(d);
    }
    return std::exp(tuv.log_mass() - tu.log_mass() - tv.log_mass());
}

MarkovDefectWitness markov_defect(const DigitWord& b, const DigitWord& a, std::uint64_t c) {
    const DigitWord ba = b + a;
    const DigitWord ac = a.appended(c);
    const DigitWord bac = ba.appended(c);
    const double m_bac = mu_g_cylinder(bac);
    const double m_ac = mu_g_cylinder(ac);
    const double m_ba = mu_g_cylinder(ba);
    const double m_a = mu_g_cylinder(a);
    MarkovDefectWitness witness;
    witness.b = b;
    witness.a = a;
    witness.c = c;
    witness.defect = std::fabs(m_bac - m_ac * m_ba / m_a);
    return witness;
}

HPReal markov_defect_hp(const DigitWord& b, const DigitWord& a, std::uint64_t c) {
    const DigitWord ba = b + a;
    const HPReal m_bac = mu_g_cylinder_hp(ba.appended(c));
    const HPReal m_ac = mu_g_cylinder_hp(a.appended(c));
    const HPReal m_ba = mu_g_cylinder_hp(ba);
    const HPReal m_a = mu_g_cylinder_hp(a);
    return (m_bac - m_ac * m_ba / m_a).abs();
}

namespace {

// odometer over {1..D}^len in lexicographic order; false when exhausted
bool next_word(std::vector<std::uint64_t>& w, std::uint64_t max_digit) {
    for (std::size_t i = w.size(); i-- > 0;) {
        if (w[i] < max_digit) {
            ++w[i];
            for (std::size_t j = i + 1; j < w.size(); ++j) w[j] = 1;
            return true;
        }
    }
    return false;
}

}  // namespace

MarkovDefectWitness find_markov_witness(unsigned k, std::uint64_t max_digit, unsigned max_m) {
    if (max_digit < 1 || max_m < 1)
        throw ValidationError("find_markov_witness: need max_digit >= 1 and max_m >= 1");
    MarkovDefectWitness best;
    best.defect = -1.0;
    for (unsigned m = 1; m <= max_m; ++m) {
        std::vector<std::uint64_t> b(m, 1);
        do {
            std::vector<std::uint64_t> a(k, 1);
            bool more_a = true;
            while (more_a) {
                for (std::uint64_t c = 1; c <= max_digit; ++c) {
                    MarkovDefectWitness w =
                        markov_defect(DigitWord(b), DigitWord(a), c);
                    if (w.defect > best.defect) best = w;
                }
                more_a = !a.empty() && next_word(a, max_digit);
            }
        } while (next_word(b, max_digit));
    }
    if (best.defect < 1e-15)
        throw NoWitnessFound("all defects below working precision");
    return best;
}

}  // namespace cfdim
