#include "cfdim/process.hpp"

#include <cmath>
#include <limits>

namespace cfdim {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// (u, v) parameters of a short state word, for conditional-law queries
CylinderTracker tracker_of(const DigitWord& w) {
    CylinderTracker t;
    for (std::uint64_t d : w) t.advance(d);
    return t;
}

}  // namespace

DigitLaw DigitLaw::uniform(std::uint64_t lo, std::uint64_t hi) {
    if (lo < 1 || hi < lo) throw ValidationError("DigitLaw::uniform: bad range");
    DigitLaw law;
    law.masses.assign(hi, 0.0);
    const double p = 1.0 / static_cast<double>(hi - lo + 1);
    for (std::uint64_t d = lo; d <= hi; ++d) law.masses[d - 1] = p;
    law.validate();
    return law;
}

DigitLaw DigitLaw::point_mass(std::uint64_t digit) {
    if (digit < 1) throw ValidationError("DigitLaw::point_mass: digit must be >= 1");
    DigitLaw law;
    law.masses.assign(digit, 0.0);
    law.masses[digit - 1] = 1.0;
    return law;
}

double DigitLaw::tail_mass() const {
    double s = 0.0;
    for (double m : masses) s += m;
    return tail == Tail::zero ? 0.0 : 1.0 - s;
}

void DigitLaw::validate() const {
    double s = 0.0;
    for (double m : masses) {
        if (m < 0.0 || !std::isfinite(m)) throw ValidationError("DigitLaw: negative mass");
        s += m;
    }
    if (tail == Tail::zero) {
        if (std::fabs(s - 1.0) > 1e-12)
            throw ValidationError("DigitLaw: masses must sum to 1 with a zero tail");
    } else {
        if (s > 1.0 + 1e-12) throw ValidationError("DigitLaw: explicit mass exceeds 1");
        if (tail_ratio < 0.0 || tail_ratio >= 1.0)
            throw ValidationError("DigitLaw: geometric tail ratio must lie in [0,1)");
    }
}

double DigitLaw::mass_of(std::uint64_t digit) const {
    if (digit < 1) throw ValidationError("DigitLaw: digits start at 1");
    if (digit <= masses.size()) return masses[digit - 1];
    if (tail == Tail::zero) return 0.0;
    const double t = tail_mass();
    const std::uint64_t j = digit - masses.size() - 1;
    return t * (1.0 - tail_ratio) * std::pow(tail_ratio, static_cast<double>(j));
}

std::uint64_t DigitLaw::sample(Rng& rng) const {
    double u = rng.u01();
    for (std::size_t i = 0; i < masses.size(); ++i) {
        if (u < masses[i]) return i + 1;
        u -= masses[i];
    }
    if (tail == Tail::zero) {
        // rounding residue; return the last positive digit
        for (std::size_t i = masses.size(); i-- > 0;)
            if (masses[i] > 0.0) return i + 1;
        throw ValidationError("DigitLaw: sampling from an empty law");
    }
    // inverse CDF of the geometric tail
    const double t = tail_mass();
    if (t <= 0.0) return masses.size();  // degenerate; clamp
    const double frac = std::min(u / t, 1.0 - 1e-16);
    const std::uint64_t j =
        static_cast<std::uint64_t>(std::floor(std::log1p(-frac) / std::log(tail_ratio)));
    return masses.size() + 1 + j;
}

double DigitLaw::entropy() const {
    double h = 0.0;
    for (double m : masses)
        if (m > 0.0) h -= m * std::log(m);
    if (tail == Tail::geometric) {
        const double t = tail_mass();
        if (t > 0.0 && tail_ratio > 0.0) {
            // sum over j of t(1-r)r^j ln(t(1-r)r^j)
            const double r = tail_ratio;
            h -= t * std::log(t * (1.0 - r)) + t * (r / (1.0 - r)) * std::log(r);
        } else if (t > 0.0) {
            h -= t * std::log(t);  // ratio 0: all tail mass on digit D+1
        }
    }
    return h;
}

double DigitLaw::mean_log() const {
    double s = 0.0;
    for (std::size_t i = 0; i < masses.size(); ++i)
        s += masses[i] * std::log(static_cast<double>(i + 1));
    if (tail == Tail::geometric) {
        const double t = tail_mass();
        if (t > 0.0) {
            // converges geometrically; sum until terms vanish
            const double r = tail_ratio;
            double w = t * (1.0 - r);
            std::uint64_t d = masses.size() + 1;
            while (w > 1e-18 * (1.0 - r)) {
                s += w * std::log(static_cast<double>(d));
                w *= r;
                ++d;
            }
        }
    }
    return s;
}

void IIDSpec::validate() const {
    for (const auto& law : per_index) law.validate();
    default_law.validate();
}

IIDProcess::IIDProcess(IIDSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

DigitWord IIDProcess::sample(std::size_t n, Rng& rng) const {
    DigitWord w;
    for (std::size_t i = 1; i <= n; ++i) w.push_back(spec_.law_at(i).sample(rng));
    return w;
}

double IIDProcess::log_mass(const DigitWord& w) const {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double m = spec_.law_at(i + 1).mass_of(w[i]);
        if (m <= 0.0) return kNegInf;
        s += std::log(m);
    }
    return s;
}

void MarkovSpec::validate() const {
    if (order < 1) throw ValidationError("MarkovSpec: order must be >= 1");
    if (max_digit < 1) throw ValidationError("MarkovSpec: max_digit must be >= 1");
    const std::size_t states = state_count();
    if (initial.size() != states || rows.size() != states)
        throw ValidationError("MarkovSpec: need one initial mass and one row per state");
    double s = 0.0;
    for (double p : initial) {
        if (p < 0.0) throw ValidationError("MarkovSpec: negative initial mass");
        s += p;
    }
    if (std::fabs(s - 1.0) > 1e-12)
        throw ValidationError("MarkovSpec: initial distribution must sum to 1");
    for (const auto& row : rows) {
        if (row.tail != DigitLaw::Tail::zero)
            throw ValidationError("MarkovSpec: kernel rows must have a zero tail");
        if (row.masses.size() > max_digit)
            throw ValidationError("MarkovSpec: row exceeds the digit cap");
        row.validate();
    }
}

std::size_t MarkovSpec::state_count() const {
    std::size_t n = 1;
    for (unsigned i = 0; i < order; ++i) {
        if (n > (1ULL << 40) / max_digit)
            throw ValidationError("MarkovSpec: state space too large");
        n *= static_cast<std::size_t>(max_digit);
    }
    return n;
}

std::size_t MarkovSpec::state_index(const DigitWord& state) const {
    if (state.size() < order) throw ValidationError("MarkovSpec: state shorter than order");
    std::size_t idx = 0;
    for (std::size_t i = state.size() - order; i < state.size(); ++i) {
        const std::uint64_t d = state[i];
        if (d < 1 || d > max_digit)
            throw ValidationError("MarkovSpec: digit outside the table alphabet");
        idx = idx * static_cast<std::size_t>(max_digit) + static_cast<std::size_t>(d - 1);
    }
    return idx;
}

TableMarkovProcess::TableMarkovProcess(MarkovSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
}

DigitWord TableMarkovProcess::sample(std::size_t n, Rng& rng) const {
    if (n < spec_.order) throw ValidationError("sample: need n >= order");
    // initial state by inverse CDF over the lexicographic state list
    double u = rng.u01();
    std::size_t idx = 0;
    for (std::size_t i = 0; i < spec_.initial.size(); ++i) {
        if (u < spec_.initial[i]) {
            idx = i;
            break;
        }
        u -= spec_.initial[i];
        idx = i;
    }
    // unpack the state word
    std::vector<std::uint64_t> state(spec_.order);
    std::size_t rem = idx;
    for (std::size_t i = spec_.order; i-- > 0;) {
        state[i] = rem % spec_.max_digit + 1;
        rem /= spec_.max_digit;
    }
    DigitWord w{std::vector<std::uint64_t>(state)};
    while (w.size() < n) {
        const std::size_t s = spec_.state_index(w);
        w.push_back(spec_.rows[s].sample(rng));
    }
    return w;
}

double TableMarkovProcess::log_mass(const DigitWord& w) const {
    if (w.size() < spec_.order)
        throw ValidationError("log_mass: word shorter than the chain order");
    DigitWord prefix = w.prefix(spec_.order);
    double s;
    {
        const double p0 = spec_.initial[spec_.state_index(prefix)];
        if (p0 <= 0.0) return kNegInf;
        s = std::log(p0);
    }
    for (std::size_t i = spec_.order; i < w.size(); ++i) {
        const std::size_t st = spec_.state_index(w.prefix(i));
        const double p = spec_.rows[st].mass_of(w[i]);
        if (p <= 0.0) return kNegInf;
        s += std::log(p);
    }
    return s;
}

GaussMarkovProcess::GaussMarkovProcess(unsigned k) : k_(k) {
    if (k < 1) throw ValidationError("GaussMarkovProcess: order must be >= 1");
}

std::string GaussMarkovProcess::name() const {
    return "gauss-markov-" + std::to_string(k_);
}

DigitWord GaussMarkovProcess::sample(std::size_t n, Rng& rng) const {
    if (n < k_) throw ValidationError("sample: need n >= order");
    // initial distribution p_a = mu_G(I_a): the first k digits of a mu_G draw
    DigitWord w = sample_mu_g_digits(k_, rng);
    while (w.size() < n) {
        const DigitWord state = w.suffix(w.size() - k_);
        w.push_back(sample_transition(state, rng));
    }
    return w;
}

double GaussMarkovProcess::transition_prob(const DigitWord& state, std::uint64_t c) const {
    if (state.size() != k_) throw ValidationError("transition_prob: state length != order");
    return tracker_of(state).next_digit_prob(c);
}

std::uint64_t GaussMarkovProcess::sample_transition(const DigitWord& state, Rng& rng) const {
    if (state.size() != k_) throw ValidationError("sample_transition: state length != order");
    return tracker_of(state).sample_next_digit(rng);
}

double GaussMarkovProcess::log_mass(const DigitWord& w) const {
    if (w.size() < k_) throw ValidationError("log_mass: word shorter than the chain order");
    CylinderTracker head;
    for (std::size_t i = 0; i < k_; ++i) head.advance(w[i]);
    double s = head.log_mass();
    for (std::size_t i = k_; i < w.size(); ++i) {
        const CylinderTracker state = tracker_of(w.suffix(i - k_).prefix(k_));
        s += std::log(state.next_digit_prob(w[i]));
    }
    return s;
}

DigitWord GaussMeasureProcess::sample(std::size_t n, Rng& rng) const {
    return sample_mu_g_digits(n, rng);
}

double GaussMeasureProcess::log_mass(const DigitWord& w) const {
    return tracker_of(w).log_mass();
}

GaussMarkovProcess build_gauss_markov(unsigned k) { return GaussMarkovProcess(k); }

DigitPath sample_path(const DigitProcess& process, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    DigitPath path;
    path.word = process.sample(n, rng);
    path.seed = seed;
    path.process = process.name();
    return path;
}

double process_cylinder_mass(const DigitProcess& process, const DigitWord& w) {
    const double lm = process.log_mass(w);
    return std::isfinite(lm) ? std::exp(lm) : 0.0;
}

StationarityReport stationarity_residual(unsigned k, const DigitWord& b, std::uint64_t d,
                                         std::uint64_t cap) {
    if (k < 1) throw ValidationError("stationarity_residual: order must be >= 1");
    if (b.size() != k - 1)
        throw ValidationError("stationarity_residual: |b| must equal order - 1");
    if (cap < 1) throw ValidationError("stationarity_residual: cap must be >= 1");

    const DigitWord bd = b.appended(d);
    // sum_c p_{cb} p_{cb,d} = sum_c mu_G(I_cbd); accumulate ascending so the
    // tiny large-c terms are not absorbed into the big early ones
    std::vector<double> terms;
    terms.reserve(cap);
    for (std::uint64_t c = cap; c >= 1; --c) {
        CylinderTracker t;
        t.advance(c);
        for (std::uint64_t dig : b) t.advance(dig);
        const double p_cb = std::exp(t.log_mass());
        const double p_cb_d = t.next_digit_prob(d);
        terms.push_back(p_cb * p_cb_d);
        if (c == 1) break;
    }
    double sum = 0.0;
    for (double t : terms) sum += t;

    StationarityReport report;
    report.cap = cap;
    report.residual = std::fabs(sum - mu_g_cylinder(bd));
    // every missing term lives inside { alpha_1 > cap } = (0, 1/(cap+1))
    report.tail_bound = mu_g_interval(Rational(0), Rational(1, cap + 1));
    return report;
}

double psi_ratio(const GaussMarkovProcess& chain, const DigitWord& u, const DigitWord& v) {
    if (u.size() <= chain.order() || v.size() <= chain.order())
        throw ValidationError("psi_ratio: need |u|, |v| > order");
    const double lu = chain.log_mass(u);
    const double lv = chain.log_mass(v);
    const double luv = chain.log_mass(u + v);
    return std::exp(luv - lu - lv);
}

}  // namespace cfdim
