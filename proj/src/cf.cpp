#include "cfdim/cf.hpp"

#include <sstream>

namespace cfdim {

void DigitWord::validate() const {
    for (std::uint64_t d : digits_)
        if (d < 1) throw ValidationError("continued-fraction digits must be >= 1");
}

void DigitWord::push_back(std::uint64_t d) {
    if (d < 1) throw ValidationError("continued-fraction digits must be >= 1");
    digits_.push_back(d);
}

DigitWord DigitWord::parse(const std::string& text) {
    std::vector<std::uint64_t> ds;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        std::istringstream part(token);
        std::uint64_t v;
        while (part >> v) ds.push_back(v);
    }
    return DigitWord(std::move(ds));
}

DigitWord DigitWord::prefix(std::size_t n) const {
    if (n > digits_.size()) n = digits_.size();
    return DigitWord(std::vector<std::uint64_t>(digits_.begin(), digits_.begin() + n));
}

DigitWord DigitWord::suffix(std::size_t from) const {
    if (from > digits_.size()) from = digits_.size();
    return DigitWord(std::vector<std::uint64_t>(digits_.begin() + from, digits_.end()));
}

DigitWord operator+(const DigitWord& a, const DigitWord& b) {
    std::vector<std::uint64_t> ds = a.digits_;
    ds.insert(ds.end(), b.digits_.begin(), b.digits_.end());
    return DigitWord(std::move(ds));
}

DigitWord DigitWord::appended(std::uint64_t d) const {
    DigitWord w = *this;
    w.push_back(d);
    return w;
}

std::string DigitWord::str() const {
    std::string out;
    for (std::size_t i = 0; i < digits_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(digits_[i]);
    }
    return out;
}

void ContinuantPair::advance(std::uint64_t digit) {
    // (p', p) <- (p, a p + p'), same for q
    BigInt np = p_cur, nq = q_cur;
    mpz_mul_ui(np.get_mpz_t(), p_cur.get_mpz_t(), digit);
    np += p_prev;
    mpz_mul_ui(nq.get_mpz_t(), q_cur.get_mpz_t(), digit);
    nq += q_prev;
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = std::move(np);
    q_cur = std::move(nq);
}

BigInt ContinuantPair::unimodular_det() const { return p_cur * q_prev - p_prev * q_cur; }

ContinuantPair continuants(const DigitWord& w) {
    ContinuantPair c;
    for (std::uint64_t d : w) c.advance(d);
    return c;
}

Rational eval_finite_cf(const DigitWord& w) {
    if (w.empty()) throw EmptyWord("eval_finite_cf: word must be nonempty");
    ContinuantPair c = continuants(w);
    Rational r(c.p_cur, c.q_cur);
    r.canonicalize();  // already coprime by unimodularity; cheap no-op
    return r;
}

CylinderInterval cylinder(const DigitWord& w) {
    ContinuantPair c = continuants(w);
    Rational a(c.p_cur, c.q_cur);
    Rational b(c.p_cur + c.p_prev, c.q_cur + c.q_prev);
    a.canonicalize();
    b.canonicalize();
    CylinderInterval out;
    out.depth = w.size();
    out.word = w;
    if (a < b) {
        out.low = std::move(a);
        out.high = std::move(b);
    } else {
        out.low = std::move(b);
        out.high = std::move(a);
    }
    return out;
}

RealPoint RealPoint::exact(const Rational& value) {
    if (value <= 0 || value >= 1)
        throw DomainError("RealPoint must lie strictly inside (0,1)");
    RealPoint p;
    p.low_ = value;
    p.high_ = value;
    p.exact_ = true;
    return p;
}

RealPoint RealPoint::with_precision(const BigInt& mantissa, unsigned bits) {
    if (bits == 0) throw ValidationError("with_precision: bits must be positive");
    Rational scale(1);
    mpq_mul_2exp(scale.get_mpq_t(), scale.get_mpq_t(), bits);  // scale = 2^bits
    RealPoint p;
    p.low_ = Rational(mantissa) / scale;
    p.high_ = Rational(mantissa + 1) / scale;
    p.low_.canonicalize();
    p.high_.canonicalize();
    if (p.low_ <= 0 || p.high_ >= 1)
        throw DomainError("RealPoint must lie strictly inside (0,1)");
    p.exact_ = false;
    p.bits_ = bits;
    return p;
}

Rational gauss_map(const Rational& x) {
    if (x == 0) throw UndefinedAtZero("gauss_map: x = 0");
    if (x < 0 || x >= 1) throw DomainError("gauss_map: x must lie in (0,1)");
    // 1/x mod 1 = (den mod num) / num
    Rational inv = 1 / x;
    BigInt whole = inv.get_num() / inv.get_den();  // floor for positive values
    return inv - Rational(whole);
}

namespace {

// one certified digit step on an exact interval; returns false when the two
// endpoints disagree on the digit
bool interval_digit_step(Rational& lo, Rational& hi, std::uint64_t& digit_out) {
    // 1/x is decreasing, so 1/hi <= 1/lo
    Rational inv_lo = 1 / hi;
    Rational inv_hi = 1 / lo;
    BigInt d_lo = inv_lo.get_num() / inv_lo.get_den();
    BigInt d_hi = inv_hi.get_num() / inv_hi.get_den();
    if (d_lo != d_hi) return false;
    if (!d_lo.fits_ulong_p()) throw DomainError("digit overflows 64 bits");
    digit_out = mpz_get_ui(d_lo.get_mpz_t());
    Rational dr{d_lo};
    lo = inv_lo - dr;
    hi = inv_hi - dr;
    return true;
}

}  // namespace

DigitWord digits_of(const Rational& x, std::size_t n) {
    if (x <= 0 || x >= 1) throw DomainError("digits_of: x must lie in (0,1)");
    if (n < 1) throw ValidationError("digits_of: n must be >= 1");
    DigitWord word;
    Rational r = x;
    for (std::size_t i = 0; i < n; ++i) {
        if (r == 0)
            throw RationalTermination(word.digits(),
                                      "orbit terminated after " + std::to_string(i) + " digits");
        Rational inv = 1 / r;
        BigInt d = inv.get_num() / inv.get_den();
        if (!d.fits_ulong_p()) throw DomainError("digit overflows 64 bits");
        word.push_back(mpz_get_ui(d.get_mpz_t()));
        r = inv - Rational(d);
    }
    return word;
}

DigitWord digits_of(const RealPoint& x, std::size_t n) {
    if (n < 1) throw ValidationError("digits_of: n must be >= 1");
    if (x.is_exact()) return digits_of(x.low(), n);

    const unsigned prec = x.precision_bits();
    // cylinder length must exceed 2^(32-P), i.e. q(q+q') < 2^(P-32)
    if (prec <= 32)
        throw PrecisionExhausted({}, "precision budget allows no digits at " +
                                         std::to_string(prec) + " bits");
    BigInt budget = 1;
    mpz_mul_2exp(budget.get_mpz_t(), budget.get_mpz_t(), prec - 32);

    DigitWord word;
    ContinuantPair cont;
    Rational lo = x.low(), hi = x.high();
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t digit = 0;
        if (lo == 0 || hi == 0 || !interval_digit_step(lo, hi, digit))
            throw PrecisionExhausted(word.digits(),
                                     "cannot certify digit " + std::to_string(i + 1));
        cont.advance(digit);
        if (cont.q_cur * (cont.q_cur + cont.q_prev) >= budget)
            throw PrecisionExhausted(word.digits(),
                                     "precision budget exhausted at digit " +
                                         std::to_string(i + 1));
        word.push_back(digit);
    }
    return word;
}

RealPoint RealPoint::unchecked(Rational lo, Rational hi, bool exact, unsigned bits) {
    RealPoint p;
    p.low_ = std::move(lo);
    p.high_ = std::move(hi);
    p.exact_ = exact;
    p.bits_ = bits;
    return p;
}

RealPoint gauss_map(const RealPoint& x) {
    if (x.is_exact()) {
        if (x.low() == 0) throw UndefinedAtZero("gauss_map: x = 0");
        Rational y = gauss_map(x.low());
        // y == 0 signals a terminating orbit; carried as an exact zero
        return RealPoint::unchecked(y, y, true, 0);
    }
    Rational lo = x.low(), hi = x.high();
    std::uint64_t digit = 0;
    if (!interval_digit_step(lo, hi, digit))
        throw PrecisionExhausted({}, "gauss_map: interval spans a branch boundary");
    // remaining certified bits of the image interval
    Rational width = hi - lo;
    unsigned bits = 0;
    if (width > 0) {
        const std::size_t num_bits = mpz_sizeinbase(width.get_num().get_mpz_t(), 2);
        const std::size_t den_bits = mpz_sizeinbase(width.get_den().get_mpz_t(), 2);
        bits = den_bits > num_bits ? static_cast<unsigned>(den_bits - num_bits) : 1;
    }
    return RealPoint::unchecked(std::move(lo), std::move(hi), false, bits);
}

}  // namespace cfdim
