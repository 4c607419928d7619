#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cfdim/cf.hpp"
#include "cfdim/gauss.hpp"
#include "cfdim/rng.hpp"

namespace cfdim {

// A probability law on digits {1, 2, ...}: explicit masses for digits
// 1..D plus a tail rule, either zero or a renormalized geometric tail
// P(D+1+j) = tail_mass * (1-ratio) * ratio^j.
struct DigitLaw {
    enum class Tail { zero, geometric };

    std::vector<double> masses;  // digits 1..D
    Tail tail = Tail::zero;
    double tail_ratio = 0.0;

    static DigitLaw uniform(std::uint64_t lo, std::uint64_t hi);
    static DigitLaw point_mass(std::uint64_t digit);

    void validate() const;  // masses sum to 1 within 1e-12 after the tail rule
    std::uint64_t max_explicit_digit() const { return masses.size(); }
    double tail_mass() const;
    double mass_of(std::uint64_t digit) const;
    std::uint64_t sample(Rng& rng) const;

    double entropy() const;   // exact, nats; geometric tail in closed form
    double mean_log() const;  // E[ln digit], finite for both tail rules
};

// i.i.d. digits with index-dependent laws: per_index[i-1] applies at index i
// while available, default_law afterwards.
struct IIDSpec {
    std::vector<DigitLaw> per_index;
    DigitLaw default_law;

    const DigitLaw& law_at(std::size_t index_1based) const {
        if (index_1based >= 1 && index_1based <= per_index.size())
            return per_index[index_1based - 1];
        return default_law;
    }
    void validate() const;
};

// Explicit-table k-step Markov chain over digits {1..D}. States are words in
// {1..D}^k enumerated lexicographically; rows are zero-tail laws on {1..D}.
struct MarkovSpec {
    unsigned order = 1;
    std::uint64_t max_digit = 2;
    std::vector<double> initial;     // D^k entries, lexicographic
    std::vector<DigitLaw> rows;      // D^k rows

    void validate() const;
    std::size_t state_count() const;
    std::size_t state_index(const DigitWord& state) const;  // last k digits
};

// A digit process: can sample prefixes and price cylinders. Implementations
// must be pure given the caller-provided stream so sampling parallelizes by
// sample index.
class DigitProcess {
public:
    virtual ~DigitProcess() = default;
    virtual std::string name() const = 0;
    virtual DigitWord sample(std::size_t n, Rng& rng) const = 0;
    // ln P(A_1..A_m = w); -inf when the process gives the word mass zero
    virtual double log_mass(const DigitWord& w) const = 0;
    // smallest prefix length for which log_mass is defined (k for a k-step chain)
    virtual std::size_t min_word_length() const { return 1; }
};

class IIDProcess final : public DigitProcess {
public:
    explicit IIDProcess(IIDSpec spec);
    std::string name() const override { return "iid"; }
    DigitWord sample(std::size_t n, Rng& rng) const override;
    double log_mass(const DigitWord& w) const override;
    const IIDSpec& spec() const { return spec_; }

private:
    IIDSpec spec_;
};

class TableMarkovProcess final : public DigitProcess {
public:
    explicit TableMarkovProcess(MarkovSpec spec);
    std::string name() const override { return "markov-table"; }
    DigitWord sample(std::size_t n, Rng& rng) const override;
    double log_mass(const DigitWord& w) const override;
    std::size_t min_word_length() const override { return spec_.order; }
    const MarkovSpec& spec() const { return spec_; }

private:
    MarkovSpec spec_;
};

// The k-step chain with initial distribution p_a = mu_G(I_a) over words of
// length k and kernel p_{a,c} = mu_G(I_ac)/mu_G(I_a). Closed form, no digit
// cap. Coincides with mu_G on every cylinder of depth <= k+1 and is the
// stationary psi-mixing chain whose dimension approaches 1 as k grows.
class GaussMarkovProcess final : public DigitProcess {
public:
    explicit GaussMarkovProcess(unsigned k);
    std::string name() const override;
    DigitWord sample(std::size_t n, Rng& rng) const override;
    double log_mass(const DigitWord& w) const override;
    std::size_t min_word_length() const override { return k_; }
    unsigned order() const { return k_; }

    // kernel entry p_{state, c}; state must have length k
    double transition_prob(const DigitWord& state, std::uint64_t c) const;
    std::uint64_t sample_transition(const DigitWord& state, Rng& rng) const;

private:
    unsigned k_;
};

// The digits of mu_G itself (the k = infinity reference source).
class GaussMeasureProcess final : public DigitProcess {
public:
    std::string name() const override { return "mu-g"; }
    DigitWord sample(std::size_t n, Rng& rng) const override;
    double log_mass(const DigitWord& w) const override;
};

GaussMarkovProcess build_gauss_markov(unsigned k);

// Reproducible sampled prefix: same (process, seed, n) gives the same word.
struct DigitPath {
    DigitWord word;
    std::uint64_t seed = 0;
    std::string process;
};

DigitPath sample_path(const DigitProcess& process, std::size_t n, std::uint64_t seed);

// nu(I_w) = P(A_1..A_|w| = w); 0 is allowed when a law assigns zero mass.
double process_cylinder_mass(const DigitProcess& process, const DigitWord& w);

// |sum_{c<=cap} p_{cb} p_{cb,d} - p_{bd}| for the Gauss chain of order k,
// with the exact closed-form bound on the truncated tail. The residual is
// always <= the bound; both go to zero as the cap grows.
struct StationarityReport {
    double residual = 0.0;
    double tail_bound = 0.0;
    std::uint64_t cap = 0;
};

StationarityReport stationarity_residual(unsigned k, const DigitWord& b, std::uint64_t d,
                                         std::uint64_t cap);

// R = P(A_1..A_{l+m} = uv) / (P(A_1..A_l = u) P(A_1..A_m = v)) for the Gauss
// chain; requires |u|, |v| > k.
double psi_ratio(const GaussMarkovProcess& chain, const DigitWord& u, const DigitWord& v);

}  // namespace cfdim
