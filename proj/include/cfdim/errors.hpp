#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfdim {

// Base class for all library errors. Each concrete type carries a stable
// machine-readable code used by the CLI's error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

#define CFDIM_DEFINE_ERROR(Name, code_str)                      \
    class Name : public Error {                                 \
    public:                                                     \
        explicit Name(const std::string& msg)                   \
            : Error(code_str, msg) {}                           \
    }

CFDIM_DEFINE_ERROR(EmptyWord, "empty_word");
CFDIM_DEFINE_ERROR(UndefinedAtZero, "undefined_at_zero");
CFDIM_DEFINE_ERROR(DomainError, "domain_error");
CFDIM_DEFINE_ERROR(ValidationError, "validation_error");
CFDIM_DEFINE_ERROR(NoWitnessFound, "no_witness_found");
CFDIM_DEFINE_ERROR(PathTooShort, "path_too_short");
CFDIM_DEFINE_ERROR(InsufficientData, "insufficient_data");
CFDIM_DEFINE_ERROR(ZeroMassEncountered, "zero_mass");
CFDIM_DEFINE_ERROR(InvalidDigit, "invalid_digit");
CFDIM_DEFINE_ERROR(UndefinedAtBranchEnd, "undefined_at_branch_end");
CFDIM_DEFINE_ERROR(ConditionViolated, "condition_violated");
CFDIM_DEFINE_ERROR(DensityNotPositive, "density_not_positive");
CFDIM_DEFINE_ERROR(BranchOutOfRange, "branch_out_of_range");
CFDIM_DEFINE_ERROR(InfiniteEntropy, "infinite_entropy");
CFDIM_DEFINE_ERROR(InfiniteLogMoment, "infinite_log_moment");

#undef CFDIM_DEFINE_ERROR

// Digit extraction stopped because the orbit hit an exact branch endpoint.
// Carries the digits extracted before termination.
class RationalTermination : public Error {
public:
    RationalTermination(std::vector<std::uint64_t> digits, const std::string& msg)
        : Error("rational_termination", msg), digits_(std::move(digits)) {}
    const std::vector<std::uint64_t>& digits() const { return digits_; }

private:
    std::vector<std::uint64_t> digits_;
};

// The declared precision of the input cannot certify the next digit.
class PrecisionExhausted : public Error {
public:
    PrecisionExhausted(std::vector<std::uint64_t> digits, const std::string& msg)
        : Error("precision_exhausted", msg), digits_(std::move(digits)) {}
    const std::vector<std::uint64_t>& digits() const { return digits_; }

private:
    std::vector<std::uint64_t> digits_;
};

// f-expansion analogue of RationalTermination (digits may include 0).
class OrbitHitsZero : public Error {
public:
    OrbitHitsZero(std::vector<std::int64_t> digits, const std::string& msg)
        : Error("orbit_hits_zero", msg), digits_(std::move(digits)) {}
    const std::vector<std::int64_t>& digits() const { return digits_; }

private:
    std::vector<std::int64_t> digits_;
};

}  // namespace cfdim
