#pragma once

#include <cstdint>
#include <string>

#include "cfdim/process.hpp"

namespace cfdim {

// pi^2 / (6 ln 2): the Lyapunov exponent (and entropy) of the Gauss measure.
double lyapunov_gauss_exact();

struct MCEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::uint64_t samples = 0;
};

// h_nu = -sum_a sum_c p_a p_{a,c} ln p_{a,c} for the Gauss chain of order k,
// estimated with exactly sampled outer states and a closed-form inner sum up
// to `cap`, with the dropped tail bounded explicitly (the estimate is a
// lower bound within tail_bound).
struct EntropyEstimate {
    double h = 0.0;
    double stderr_ = 0.0;
    double tail_bound = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t cap = 0;
};

EntropyEstimate entropy_gauss_markov(unsigned k, std::uint64_t outer_samples,
                                     std::uint64_t cap, std::uint64_t seed,
                                     unsigned workers = 1);

// Two Lyapunov-exponent estimators, both reported: the exact-continuant
// cylinder-length estimator -(1/n) ln |J_n|, and the Birkhoff average of
// -2 ln x along the orbit reconstructed from path suffixes.
struct LyapunovPair {
    MCEstimate cylinder;
    MCEstimate birkhoff;
};

LyapunovPair lyapunov_mc(const DigitProcess& process, std::size_t n,
                         std::uint64_t samples, std::uint64_t seed,
                         unsigned workers = 1);

// Shannon-McMillan-Breiman estimator: mean of -(1/n) ln nu(J_n) over paths.
MCEstimate entropy_smb_mc(const DigitProcess& process, std::size_t n,
                          std::uint64_t samples, std::uint64_t seed,
                          unsigned workers = 1);

// Pointwise estimator: mean of ln nu(J_n) / ln |J_n| over paths.
MCEstimate local_dimension(const DigitProcess& process, std::size_t n,
                           std::uint64_t samples, std::uint64_t seed,
                           unsigned workers = 1);

struct DimensionEstimate {
    double entropy = 0.0;
    double lyapunov = 0.0;
    double dim = 0.0;
    double stderr_h = 0.0;
    double stderr_gamma = 0.0;
    std::string method;  // series | smb_mc | birkhoff_mc | kinney_pitcher
    std::uint64_t samples_h = 0;
    std::uint64_t samples_gamma = 0;

    double stderr_dim() const;
};

// dim = H(A_1) / (-integral of ln x^2 dnu) for i.i.d. digits with the given
// one-digit law: entropy exact from the law, the log integral by Monte Carlo
// Birkhoff averages.
DimensionEstimate kinney_pitcher_dim(const DigitLaw& law, std::size_t n,
                                     std::uint64_t samples, std::uint64_t seed,
                                     unsigned workers = 1);

struct GapBudgets {
    std::uint64_t entropy_samples = 3000;
    std::uint64_t entropy_cap = 10000;
    std::size_t lyapunov_n = 1200;
    std::uint64_t lyapunov_samples = 300;
};

// Checks the dimension lower bound 1 - 2^(3-k) of the Gauss chain, the
// entropy floor h >= h_{mu_G}, and the Lyapunov gap |gamma - gamma_G| <=
// 2^(3-k), each with a 3-sigma allowance.
struct GapReport {
    unsigned k = 0;
    DimensionEstimate dim_estimate;
    double bound = 0.0;               // max(0, 1 - 2^(3-k))
    bool entropy_check = false;       // h >= h_{mu_G} - 3 sigma
    double lyapunov_gap = 0.0;        // |gamma_nu - gamma_G|
    double lyapunov_gap_bound = 0.0;  // 2^(3-k)
    bool dim_ok = false;
    bool lyapunov_ok = false;
    double entropy_tail_bound = 0.0;

    bool all_ok() const { return dim_ok && entropy_check && lyapunov_ok; }
};

GapReport verify_gap_bound(unsigned k, const GapBudgets& budgets, std::uint64_t seed,
                           unsigned workers = 1);

}  // namespace cfdim
