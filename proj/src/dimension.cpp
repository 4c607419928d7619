#include "cfdim/dimension.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "cfdim/parallel.hpp"
#include "cfdim/stats.hpp"

namespace cfdim {

namespace {

// ln of a positive bigint via mantissa + exponent
double log_bigint(const BigInt& x) {
    long exp2 = 0;
    const double mant = mpz_get_d_2exp(&exp2, x.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp2) * std::numbers::ln2;
}

MCEstimate reduce(const std::vector<double>& per_sample) {
    const MeanStderr ms = mean_stderr(per_sample);
    return MCEstimate{ms.mean, ms.stderr_, ms.n};
}

}  // namespace

double lyapunov_gauss_exact() {
    return std::numbers::pi * std::numbers::pi / (6.0 * std::numbers::ln2);
}

EntropyEstimate entropy_gauss_markov(unsigned k, std::uint64_t outer_samples,
                                     std::uint64_t cap, std::uint64_t seed,
                                     unsigned workers) {
    if (k < 1) throw ValidationError("entropy_gauss_markov: order must be >= 1");
    if (cap < 16) throw ValidationError("entropy_gauss_markov: cap must be >= 16");
    if (outer_samples < 2) throw ValidationError("entropy_gauss_markov: need >= 2 samples");

    std::vector<double> inner(outer_samples);
    std::vector<double> tail_bounds(outer_samples);
    parallel_for(outer_samples, workers, [&](std::size_t i) {
        Rng rng(seed, i);
        // state a ~ p_a = mu_G(I_a): the first k digits of a mu_G draw
        CylinderTracker state;
        for (unsigned j = 0; j < k; ++j) state.advance(state.sample_next_digit(rng));
        double h = 0.0, tail_mass = 0.0;
        state.conditional_entropy(cap, h, tail_mass);
        inner[i] = h;
        tail_bounds[i] = state.tail_entropy_bound(cap);
    });

    const MeanStderr ms = mean_stderr(inner);
    const MeanStderr tb = mean_stderr(tail_bounds);
    EntropyEstimate est;
    est.h = ms.mean;
    est.stderr_ = ms.stderr_;
    est.samples = outer_samples;
    est.cap = cap;
    // the truth lies in [h, h + tail_bound]; each state's hidden tail is
    // covered by its certified dyadic-block bound
    est.tail_bound = tb.mean + 3.0 * tb.stderr_;
    return est;
}

LyapunovPair lyapunov_mc(const DigitProcess& process, std::size_t n,
                         std::uint64_t samples, std::uint64_t seed, unsigned workers) {
    if (n < 100) throw ValidationError("lyapunov_mc: need n >= 100");
    if (samples < 2) throw ValidationError("lyapunov_mc: need >= 2 samples");

    std::vector<double> cyl(samples), birk(samples);
    parallel_for(samples, workers, [&](std::size_t i) {
        Rng rng(seed, i);
        const DigitWord w = process.sample(n, rng);

        // (i) exact cylinder geometry: -(1/n) ln |J_n| with bigint continuants
        const ContinuantPair c = continuants(w);
        cyl[i] = (log_bigint(c.q_cur) + log_bigint(c.q_cur + c.q_prev)) /
                 static_cast<double>(n);

        // (ii) Birkhoff average of -2 ln x over suffix evaluations
        std::vector<double> suffix(n);
        double t = 0.0;
        for (std::size_t j = n; j-- > 0;) {
            t = 1.0 / (static_cast<double>(w[j]) + t);
            suffix[j] = t;  // value of [a_{j+1}, ..., a_n]
        }
        double acc = 0.0;
        for (double x : suffix) acc -= 2.0 * std::log(x);
        birk[i] = acc / static_cast<double>(n);
    });

    return LyapunovPair{reduce(cyl), reduce(birk)};
}

MCEstimate entropy_smb_mc(const DigitProcess& process, std::size_t n,
                          std::uint64_t samples, std::uint64_t seed, unsigned workers) {
    if (samples < 2) throw ValidationError("entropy_smb_mc: need >= 2 samples");
    std::vector<double> vals(samples);
    parallel_for(samples, workers, [&](std::size_t i) {
        Rng rng(seed, i);
        const DigitWord w = process.sample(n, rng);
        const double lm = process.log_mass(w);
        if (!std::isfinite(lm))
            throw ZeroMassEncountered("entropy_smb_mc: sampled a zero-mass word");
        vals[i] = -lm / static_cast<double>(n);
    });
    return reduce(vals);
}

MCEstimate local_dimension(const DigitProcess& process, std::size_t n,
                           std::uint64_t samples, std::uint64_t seed, unsigned workers) {
    if (samples < 2) throw ValidationError("local_dimension: need >= 2 samples");
    std::vector<double> vals(samples);
    parallel_for(samples, workers, [&](std::size_t i) {
        Rng rng(seed, i);
        const DigitWord w = process.sample(n, rng);
        const double lm = process.log_mass(w);
        if (!std::isfinite(lm))
            throw ZeroMassEncountered("local_dimension: sampled a zero-mass word");
        const ContinuantPair c = continuants(w);
        const double ll = -(log_bigint(c.q_cur) + log_bigint(c.q_cur + c.q_prev));
        vals[i] = lm / ll;
    });
    return reduce(vals);
}

double DimensionEstimate::stderr_dim() const {
    if (lyapunov <= 0.0) return 0.0;
    const double a = stderr_h / lyapunov;
    const double b = stderr_gamma * entropy / (lyapunov * lyapunov);
    return std::sqrt(a * a + b * b);
}

DimensionEstimate kinney_pitcher_dim(const DigitLaw& law, std::size_t n,
                                     std::uint64_t samples, std::uint64_t seed,
                                     unsigned workers) {
    law.validate();
    const double h = law.entropy();
    if (!std::isfinite(h)) throw InfiniteEntropy("kinney_pitcher_dim: H(A_1) diverges");
    if (!std::isfinite(law.mean_log()))
        throw InfiniteLogMoment("kinney_pitcher_dim: E[ln A_1] diverges");

    IIDSpec spec;
    spec.default_law = law;
    const IIDProcess process(spec);

    // degenerate law: a single orbit, gamma still makes sense but has zero
    // spread; keep the Monte Carlo path uniform for all laws
    std::vector<double> gammas(samples);
    parallel_for(samples, workers, [&](std::size_t i) {
        Rng rng(seed, i);
        const DigitWord w = process.sample(n, rng);
        std::vector<double> suffix(n);
        double t = 0.0;
        for (std::size_t j = n; j-- > 0;) {
            t = 1.0 / (static_cast<double>(w[j]) + t);
            suffix[j] = t;
        }
        double acc = 0.0;
        for (double x : suffix) acc -= 2.0 * std::log(x);
        gammas[i] = acc / static_cast<double>(n);
    });
    const MeanStderr g = mean_stderr(gammas);

    DimensionEstimate est;
    est.entropy = h;
    est.lyapunov = g.mean;
    est.dim = h / g.mean;
    est.stderr_h = 0.0;  // entropy is exact
    est.stderr_gamma = g.stderr_;
    est.method = "kinney_pitcher";
    est.samples_h = 0;
    est.samples_gamma = samples;
    return est;
}

GapReport verify_gap_bound(unsigned k, const GapBudgets& budgets, std::uint64_t seed,
                           unsigned workers) {
    if (k < 1) throw ValidationError("verify_gap_bound: order must be >= 1");
    const GaussMarkovProcess chain(k);

    const EntropyEstimate h = entropy_gauss_markov(k, budgets.entropy_samples,
                                                   budgets.entropy_cap, seed, workers);
    const LyapunovPair g = lyapunov_mc(chain, budgets.lyapunov_n,
                                       budgets.lyapunov_samples, seed + 1, workers);

    GapReport report;
    report.k = k;
    report.dim_estimate.entropy = h.h;
    report.dim_estimate.lyapunov = g.cylinder.value;
    report.dim_estimate.dim = h.h / g.cylinder.value;
    report.dim_estimate.stderr_h = h.stderr_;
    report.dim_estimate.stderr_gamma = g.cylinder.stderr_;
    report.dim_estimate.method = "series";
    report.dim_estimate.samples_h = h.samples;
    report.dim_estimate.samples_gamma = g.cylinder.samples;
    report.entropy_tail_bound = h.tail_bound;

    const double gap_pow = std::exp2(3.0 - static_cast<double>(k));
    report.bound = std::max(0.0, 1.0 - gap_pow);
    report.lyapunov_gap_bound = gap_pow;

    const double gamma_g = lyapunov_gauss_exact();
    report.lyapunov_gap = std::fabs(g.cylinder.value - gamma_g);

    report.dim_ok =
        report.dim_estimate.dim >= report.bound - 3.0 * report.dim_estimate.stderr_dim();
    // the inner sums drop a bounded tail, so the truth lies in
    // [h, h + tail_bound]; the floor test uses the upper end of that bracket
    report.entropy_check = h.h + h.tail_bound >= gamma_g - 3.0 * h.stderr_;
    report.lyapunov_ok =
        report.lyapunov_gap <= report.lyapunov_gap_bound + 3.0 * g.cylinder.stderr_;
    return report;
}

}  // namespace cfdim
