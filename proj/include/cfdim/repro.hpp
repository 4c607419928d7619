#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cfdim {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string details;
    double seconds = 0.0;
};

// Runs the full reproduction suite: every desk-scale check the library makes
// about the Gauss measure, the order-k digit chains, dimension estimates,
// deviation decay, and the f-expansion pipeline, each at its pinned
// tolerance. Deterministic for a fixed (seed, worker) pair and invariant
// across worker counts.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed, unsigned workers);

// One pass/fail line per criterion, plus a summary; returns true iff all pass.
bool print_acceptance(const std::vector<CriterionResult>& results);

}  // namespace cfdim
