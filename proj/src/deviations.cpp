#include "cfdim/deviations.hpp"

#include <cmath>

#include "cfdim/parallel.hpp"
#include "cfdim/stats.hpp"

namespace cfdim {

SubsequenceSpec SubsequenceSpec::identity() {
    SubsequenceSpec s;
    s.kind = Kind::identity;
    s.step = 1;
    s.l_witness = 2.0;
    return s;
}

SubsequenceSpec SubsequenceSpec::arithmetic(std::uint64_t step) {
    if (step < 1) throw ValidationError("SubsequenceSpec: step must be >= 1");
    SubsequenceSpec s;
    s.kind = Kind::arithmetic;
    s.step = step;
    s.l_witness = static_cast<double>(step) + 1.0;
    return s;
}

SubsequenceSpec SubsequenceSpec::explicit_list(std::vector<std::uint64_t> indices,
                                               double l_witness) {
    SubsequenceSpec s;
    s.kind = Kind::explicit_list;
    s.indices = std::move(indices);
    s.l_witness = l_witness;
    s.validate();
    return s;
}

void SubsequenceSpec::validate() const {
    if (l_witness <= 1.0) throw ValidationError("SubsequenceSpec: L witness must exceed 1");
    if (kind == Kind::explicit_list) {
        if (indices.empty()) throw ValidationError("SubsequenceSpec: empty explicit list");
        for (std::size_t i = 0; i < indices.size(); ++i) {
            if (indices[i] < 1) throw ValidationError("SubsequenceSpec: indices start at 1");
            if (i > 0 && indices[i] <= indices[i - 1])
                throw ValidationError("SubsequenceSpec: indices must strictly increase");
        }
    } else if (step < 1) {
        throw ValidationError("SubsequenceSpec: step must be >= 1");
    }
}

std::uint64_t SubsequenceSpec::q(std::uint64_t i) const {
    if (i < 1) throw ValidationError("SubsequenceSpec: q is 1-based");
    switch (kind) {
        case Kind::identity:
            return i;
        case Kind::arithmetic:
            return step * i;
        case Kind::explicit_list:
            if (i > indices.size())
                throw ValidationError("SubsequenceSpec: index past the explicit list");
            return indices[i - 1];
    }
    return i;
}

std::string SubsequenceSpec::str() const {
    switch (kind) {
        case Kind::identity:
            return "identity";
        case Kind::arithmetic:
            return "arithmetic(" + std::to_string(step) + ")";
        case Kind::explicit_list:
            return "explicit[" + std::to_string(indices.size()) + "]";
    }
    return "?";
}

double frequency_average(const DigitWord& path, const DigitWord& a,
                         const SubsequenceSpec& q, std::uint64_t n) {
    if (n < 1) throw ValidationError("frequency_average: n must be >= 1");
    if (a.empty()) throw EmptyWord("frequency_average: the word a must be nonempty");
    const std::uint64_t needed = q.q(n) + a.size();
    if (path.size() < needed)
        throw PathTooShort("frequency_average: path has " + std::to_string(path.size()) +
                           " digits, needs " + std::to_string(needed));
    std::uint64_t hits = 0;
    for (std::uint64_t i = 1; i <= n; ++i) {
        const std::uint64_t shift = q.q(i);  // digits shift+1 .. shift+|a|
        bool match = true;
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (path[shift + j] != a[j]) {
                match = false;
                break;
            }
        }
        hits += match ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(n);
}

namespace {

DeviationEstimate deviation_core(const DigitProcess* process, const DigitWord& a,
                                 const SubsequenceSpec& q, double delta, std::uint64_t n,
                                 std::uint64_t samples, std::uint64_t seed,
                                 unsigned workers) {
    if (delta < 0.0) throw ValidationError("deviation probability: delta must be >= 0");
    if (samples < 1) throw ValidationError("deviation probability: need samples >= 1");
    const double center = mu_g_cylinder(a);
    const std::size_t path_len = q.q(n) + a.size();
    std::vector<double> hits(samples);
    parallel_for(samples, workers, [&](std::size_t i) {
        Rng rng(seed, i);
        const DigitWord path = process ? process->sample(path_len, rng)
                                       : sample_mu_g_digits(path_len, rng);
        const double avg = frequency_average(path, a, q, n);
        hits[i] = (std::fabs(avg - center) > delta) ? 1.0 : 0.0;
    });
    DeviationEstimate est;
    est.samples = samples;
    est.hits = static_cast<std::uint64_t>(pairwise_sum(hits));
    est.estimate = static_cast<double>(est.hits) / static_cast<double>(samples);
    est.stderr_ = std::sqrt(est.estimate * (1.0 - est.estimate) /
                            static_cast<double>(samples));
    return est;
}

}  // namespace

DeviationEstimate deviation_probability_mc(const DigitWord& a, const SubsequenceSpec& q,
                                           double delta, std::uint64_t n,
                                           std::uint64_t samples, std::uint64_t seed,
                                           unsigned workers) {
    return deviation_core(nullptr, a, q, delta, n, samples, seed, workers);
}

DeviationSeries deviation_series(const DigitWord& a, const SubsequenceSpec& q, double delta,
                                 const std::vector<std::uint64_t>& ns, std::uint64_t samples,
                                 std::uint64_t seed, unsigned workers) {
    DeviationSeries series;
    series.a = a;
    series.delta = delta;
    series.q = q;
    std::uint64_t sub = 0;
    for (std::uint64_t n : ns) {
        const DeviationEstimate est =
            deviation_probability_mc(a, q, delta, n, samples, seed + (sub++), workers);
        series.entries.push_back({n, est.estimate, est.stderr_, est.samples, est.hits});
    }
    return series;
}

DecayFit decay_rate_fit(const DeviationSeries& series) {
    std::vector<double> xs, ys;
    std::uint64_t n_low = 0, n_high = 0;
    for (const auto& e : series.entries) {
        if (e.hits < 10 || e.estimate <= 0.0) continue;  // keep log out of the noise
        xs.push_back(static_cast<double>(e.n));
        ys.push_back(std::log(e.estimate));
        if (n_low == 0) n_low = e.n;
        n_high = e.n;
    }
    if (xs.size() < 3)
        throw InsufficientData("decay_rate_fit: need >= 3 entries with >= 10 hits");
    const LinearFit fit = least_squares(xs, ys);
    DecayFit out;
    out.slope = fit.slope;
    out.intercept = fit.intercept;
    out.r_squared = fit.r_squared;
    out.fit_n_low = n_low;
    out.fit_n_high = n_high;
    out.points = fit.points;
    return out;
}

DeviationEstimate gamma_mass_empirical(const DigitProcess& process, const DigitWord& a,
                                       const SubsequenceSpec& q, double delta,
                                       std::uint64_t n, std::uint64_t samples,
                                       std::uint64_t seed, unsigned workers) {
    return deviation_core(&process, a, q, delta, n, samples, seed, workers);
}

}  // namespace cfdim
