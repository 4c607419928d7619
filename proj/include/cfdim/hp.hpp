#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace cfdim {

// Thin RAII wrapper around an mpfr_t at a fixed working precision.
// Used by the high-precision measure mode; default precision is 192 bits.
class HPReal {
public:
    static constexpr mpfr_prec_t kPrecision = 192;

    HPReal() { mpfr_init2(v_, kPrecision); mpfr_set_zero(v_, 1); }
    explicit HPReal(double x) : HPReal() { mpfr_set_d(v_, x, MPFR_RNDN); }
    explicit HPReal(const mpq_class& q) : HPReal() { mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }
    HPReal(const HPReal& o) : HPReal() { mpfr_set(v_, o.v_, MPFR_RNDN); }
    HPReal(HPReal&& o) noexcept { mpfr_init2(v_, kPrecision); mpfr_swap(v_, o.v_); }
    HPReal& operator=(HPReal o) { mpfr_swap(v_, o.v_); return *this; }
    ~HPReal() { mpfr_clear(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    HPReal operator+(const HPReal& o) const { HPReal r; mpfr_add(r.v_, v_, o.v_, MPFR_RNDN); return r; }
    HPReal operator-(const HPReal& o) const { HPReal r; mpfr_sub(r.v_, v_, o.v_, MPFR_RNDN); return r; }
    HPReal operator*(const HPReal& o) const { HPReal r; mpfr_mul(r.v_, v_, o.v_, MPFR_RNDN); return r; }
    HPReal operator/(const HPReal& o) const { HPReal r; mpfr_div(r.v_, v_, o.v_, MPFR_RNDN); return r; }

    HPReal abs() const { HPReal r; mpfr_abs(r.v_, v_, MPFR_RNDN); return r; }

    // natural log of 1 + x
    HPReal log1p() const { HPReal r; mpfr_log1p(r.v_, v_, MPFR_RNDN); return r; }

    static HPReal ln2() { HPReal r; mpfr_const_log2(r.v_, MPFR_RNDN); return r; }

    std::string str(int digits = 40) const;

private:
    mpfr_t v_;
};

}  // namespace cfdim
