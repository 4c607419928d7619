#include "cfdim/fexp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cfdim/stats.hpp"

namespace cfdim {

ExpansionScheme ExpansionScheme::continued_fraction() {
    ExpansionScheme s;
    s.builtin_ = Builtin::cf;
    s.dir_ = Direction::decreasing;
    s.m_ = 0;
    s.f_ = [](double y) { return 1.0 / y; };
    s.finv_ = [](double x) { return 1.0 / x; };
    s.name_ = "cf";
    return s;
}

ExpansionScheme ExpansionScheme::base(std::uint64_t m) {
    if (m < 2) throw ValidationError("base expansion needs M >= 2");
    ExpansionScheme s;
    s.builtin_ = Builtin::base_m;
    s.dir_ = Direction::increasing;
    s.m_ = m;
    const double md = static_cast<double>(m);
    s.f_ = [md](double y) { return y / md; };
    s.finv_ = [md](double x) { return x * md; };
    s.name_ = "base-" + std::to_string(m);
    return s;
}

ExpansionScheme ExpansionScheme::custom(Direction dir, std::uint64_t branch_count,
                                        std::function<double(double)> f,
                                        std::function<double(double)> f_inverse,
                                        std::string name) {
    ExpansionScheme s;
    s.builtin_ = Builtin::none;
    s.dir_ = dir;
    s.m_ = branch_count;
    s.f_ = std::move(f);
    s.finv_ = std::move(f_inverse);
    s.name_ = std::move(name);
    if (s.m_ == 0 && dir == Direction::increasing)
        throw ValidationError("increasing schemes need a finite branch count");
    return s;
}

std::uint64_t ExpansionScheme::branch_count() const {
    if (m_ == 0) throw ValidationError(name_ + ": infinite branch count");
    return m_;
}

std::int64_t ExpansionScheme::alphabet_min() const {
    return dir_ == Direction::decreasing ? 1 : 0;
}

std::optional<std::int64_t> ExpansionScheme::alphabet_max() const {
    if (m_ == 0) return std::nullopt;
    return dir_ == Direction::decreasing ? static_cast<std::int64_t>(m_)
                                         : static_cast<std::int64_t>(m_) - 1;
}

bool ExpansionScheme::in_alphabet(std::int64_t a) const {
    if (a < alphabet_min()) return false;
    const auto max = alphabet_max();
    return !max || a <= *max;
}

std::pair<double, double> ExpansionScheme::branch_interval(std::int64_t a) const {
    if (!in_alphabet(a)) throw BranchOutOfRange("branch " + std::to_string(a));
    double lo = f_(static_cast<double>(a));
    double hi = f_(static_cast<double>(a) + 1.0);
    if (lo > hi) std::swap(lo, hi);
    return {lo, hi};
}

std::pair<std::int64_t, Rational> ExpansionScheme::exact_step(const Rational& r) const {
    if (r <= 0 || r >= 1) throw DomainError("exact_step: remainder must lie in (0,1)");
    Rational y;
    if (builtin_ == Builtin::cf) {
        y = 1 / r;
    } else if (builtin_ == Builtin::base_m) {
        y = r * Rational(static_cast<unsigned long>(m_));
    } else {
        throw ValidationError("exact_step: scheme has no exact evaluator");
    }
    BigInt digit = y.get_num() / y.get_den();  // floor, y > 0
    if (!digit.fits_slong_p()) throw DomainError("exact_step: digit overflows");
    return {mpz_get_si(digit.get_mpz_t()), y - Rational(digit)};
}

Rational ExpansionScheme::exact_f(std::int64_t a, const Rational& t) const {
    const Rational arg = Rational(static_cast<long>(a)) + t;
    if (builtin_ == Builtin::cf) {
        if (arg <= 0) throw DomainError("exact_f: argument must be positive");
        return 1 / arg;
    }
    if (builtin_ == Builtin::base_m) return arg / Rational(static_cast<unsigned long>(m_));
    throw ValidationError("exact_f: scheme has no exact evaluator");
}

namespace {

[[noreturn]] void throw_orbit_hits_zero(const FWord& digits, std::size_t step) {
    throw OrbitHitsZero(digits, "expansion orbit hit a branch endpoint after " +
                                    std::to_string(step) + " digits");
}

FWord digits_f_exact(const ExpansionScheme& scheme, const Rational& x, std::size_t n) {
    FWord word;
    Rational r = x;
    for (std::size_t i = 0; i < n; ++i) {
        if (r == 0) throw_orbit_hits_zero(word, i);
        auto [digit, next] = scheme.exact_step(r);
        if (!scheme.in_alphabet(digit))
            throw InvalidDigit("digit " + std::to_string(digit) + " outside the alphabet");
        word.push_back(digit);
        r = next;
    }
    return word;
}

// certified interval step over exact rationals (built-in schemes)
FWord digits_f_interval(const ExpansionScheme& scheme, const RealPoint& x, std::size_t n) {
    FWord word;
    Rational lo = x.low(), hi = x.high();
    const unsigned prec = x.precision_bits();
    if (prec <= 32)
        throw PrecisionExhausted({}, "precision budget allows no digits");
    Rational budget(1);  // cylinder must stay longer than 2^(32-P)
    mpq_div_2exp(budget.get_mpq_t(), budget.get_mpq_t(), prec - 32);

    for (std::size_t i = 0; i < n; ++i) {
        if (lo == 0 || hi == 0) throw_orbit_hits_zero(word, i);
        auto [d_lo, r_lo] = scheme.exact_step(lo);
        auto [d_hi, r_hi] = scheme.exact_step(hi);
        if (d_lo != d_hi)
            throw PrecisionExhausted({}, "cannot certify digit " + std::to_string(i + 1));
        word.push_back(d_lo);
        lo = std::move(r_lo);
        hi = std::move(r_hi);
        if (lo > hi) std::swap(lo, hi);
        // budget rule: the bracket of the emitted prefix must stay long enough
        const FInterval bracket = reconstruct_f(scheme, word, word.size());
        if (bracket.high - bracket.low <= budget)
            throw PrecisionExhausted({}, "precision budget exhausted at digit " +
                                             std::to_string(i + 1));
    }
    return word;
}

// custom schemes: double interval widened a few ulps per step to absorb
// evaluator rounding; a safety margin, not a proof of correctness
FWord digits_f_double(const ExpansionScheme& scheme, double x, std::size_t n) {
    FWord word;
    double lo = x, hi = x;
    for (std::size_t i = 0; i < n; ++i) {
        if (lo <= 0.0 || hi >= 1.0) throw_orbit_hits_zero(word, i);
        double y_lo = scheme.f_inverse(lo);
        double y_hi = scheme.f_inverse(hi);
        if (y_lo > y_hi) std::swap(y_lo, y_hi);
        for (int w = 0; w < 4; ++w) {
            y_lo = std::nextafter(y_lo, -1e308);
            y_hi = std::nextafter(y_hi, 1e308);
        }
        const double d_lo = std::floor(y_lo), d_hi = std::floor(y_hi);
        if (d_lo != d_hi)
            throw PrecisionExhausted({}, "cannot certify digit " + std::to_string(i + 1));
        const auto digit = static_cast<std::int64_t>(d_lo);
        if (!scheme.in_alphabet(digit))
            throw InvalidDigit("digit " + std::to_string(digit) + " outside the alphabet");
        word.push_back(digit);
        lo = y_lo - d_lo;  // ascending since y_lo <= y_hi share the digit
        hi = y_hi - d_hi;
    }
    return word;
}

}  // namespace

FWord digits_f(const ExpansionScheme& scheme, const RealPoint& x, std::size_t n) {
    if (n < 1) throw ValidationError("digits_f: n must be >= 1");
    if (scheme.has_exact_step()) {
        if (x.is_exact()) return digits_f_exact(scheme, x.low(), n);
        return digits_f_interval(scheme, x, n);
    }
    return digits_f_double(scheme, x.approx().get_d(), n);
}

FInterval reconstruct_f(const ExpansionScheme& scheme, const FWord& word, std::size_t n) {
    if (n > word.size()) n = word.size();
    if (n == 0) throw ValidationError("reconstruct_f: need at least one digit");
    for (std::size_t i = 0; i < n; ++i)
        if (!scheme.in_alphabet(word[i]))
            throw InvalidDigit("digit " + std::to_string(word[i]) + " outside the alphabet");

    FInterval out;
    if (scheme.has_exact_step()) {
        Rational lo(0), hi(1);
        for (std::size_t i = n; i-- > 0;) {
            Rational a = scheme.exact_f(word[i], lo);
            Rational b = scheme.exact_f(word[i], hi);
            if (a > b) std::swap(a, b);
            lo = std::move(a);
            hi = std::move(b);
        }
        out.low = std::move(lo);
        out.high = std::move(hi);
        out.exact = true;
        return out;
    }
    double lo = 0.0, hi = 1.0;
    for (std::size_t i = n; i-- > 0;) {
        double a = scheme.f(static_cast<double>(word[i]) + lo);
        double b = scheme.f(static_cast<double>(word[i]) + hi);
        if (a > b) std::swap(a, b);
        lo = a;
        hi = b;
    }
    out.low = Rational(lo);
    out.high = Rational(hi);
    out.exact = false;
    return out;
}

double t_map_f(const ExpansionScheme& scheme, double x) {
    if (x <= 0.0 || x >= 1.0) throw DomainError("t_map_f: x must lie in (0,1)");
    const double y = scheme.f_inverse(x);
    const double d = std::floor(y);
    const double t = y - d;
    if (t == 0.0)
        throw UndefinedAtBranchEnd("t_map_f: x maps to a branch endpoint");
    return t;
}

Rational t_map_f_exact(const ExpansionScheme& scheme, const Rational& x) {
    auto [digit, r] = scheme.exact_step(x);
    (void)digit;
    if (r == 0) throw UndefinedAtBranchEnd("t_map_f: x maps to a branch endpoint");
    return r;
}

namespace {

double central_diff(const std::function<double(double)>& g, double x, double h) {
    return (g(x + h) - g(x - h)) / (2.0 * h);
}

double second_diff(const std::function<double(double)>& g, double x, double h) {
    return (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h);
}

}  // namespace

ConditionReport check_conditions(const ExpansionScheme& scheme, unsigned grid,
                                 unsigned ell_max) {
    if (grid < 8) throw ValidationError("check_conditions: grid must be >= 8");
    if (ell_max < 1) throw ValidationError("check_conditions: ell_max must be >= 1");

    ConditionReport report;
    report.grid = grid;

    // branch list (capped for infinite alphabets)
    std::vector<std::int64_t> branches;
    if (scheme.infinite_branches()) {
        report.branch_cap = 64;
        report.capped = true;
        for (std::int64_t a = scheme.alphabet_min();
             a < scheme.alphabet_min() + static_cast<std::int64_t>(report.branch_cap); ++a)
            branches.push_back(a);
    } else {
        const auto max = *scheme.alphabet_max();
        for (std::int64_t a = scheme.alphabet_min(); a <= max; ++a) branches.push_back(a);
        report.branch_cap = branches.size();
    }

    // T' and T'' agree with the derivatives of f^{-1}, which is smooth across
    // branch boundaries, so differences never straddle a jump of T
    auto finv = [&](double x) { return scheme.f_inverse(x); };

    double q_estimate = 0.0;
    for (std::int64_t a : branches) {
        const auto [lo, hi] = scheme.branch_interval(a);
        const double width = hi - lo;
        const double h = std::max(width * 1e-5, 1e-12);
        ConditionReport::Branch br;
        br.a = a;
        double dmin = 1e308, dmax = 0.0, ddmax = 0.0;
        bool finite = true;
        bool sign_consistent = true;
        double first_sign = 0.0;
        for (unsigned i = 0; i < grid; ++i) {
            const double x = lo + (i + 0.5) * width / grid;
            const double d1 = central_diff(finv, x, h);
            const double d2 = second_diff(finv, x, h);
            if (!std::isfinite(d1) || !std::isfinite(d2)) {
                finite = false;
                break;
            }
            if (i == 0) first_sign = d1 < 0 ? -1.0 : 1.0;
            sign_consistent = sign_consistent && (d1 * first_sign > 0.0);
            dmin = std::min(dmin, std::fabs(d1));
            dmax = std::max(dmax, std::fabs(d1));
            ddmax = std::max(ddmax, std::fabs(d2));
        }
        // smoothness probe: the second difference must converge under step
        // refinement (Richardson consistency); a kink makes it blow up
        bool second_diff_converges = true;
        for (unsigned i = 0; i < grid && finite; i += std::max(1u, grid / 16)) {
            const double x = lo + (i + 0.5) * width / grid;
            const double coarse = second_diff(finv, x, h);
            const double fine = second_diff(finv, x, h / 2.0);
            const double scale = std::max({std::fabs(coarse), std::fabs(fine), 1.0});
            if (std::fabs(fine - coarse) > 0.5 * scale) {
                second_diff_converges = false;
                break;
            }
        }
        br.t_prime_min = dmin;
        br.t_prime_max = dmax;
        br.t_second_max = ddmax;
        br.c2_ok = finite && sign_consistent && dmin > 0.0 && second_diff_converges;
        if (!br.c2_ok)
            throw ConditionViolated("branch " + std::to_string(a) +
                                    " fails the C^2 smoothness check");
        if (dmin > 0.0) q_estimate = std::max(q_estimate, ddmax / (dmin * dmin));
        report.branches.push_back(br);
    }
    report.q_estimate = q_estimate;
    if (!std::isfinite(q_estimate))
        throw ConditionViolated("distortion ratio estimate diverges");

    // condition (2): smallest ell with grid-inf |(T^ell)'| clear of 1
    constexpr double kExpansionMargin = 1.05;
    const double h_global = 1e-7;
    for (unsigned ell = 1; ell <= ell_max; ++ell) {
        double inf_prod = 1e308;
        unsigned valid_points = 0;
        for (unsigned i = 0; i < grid; ++i) {
            double x = (i + 0.5) / grid;
            double prod = 1.0;
            bool valid = true;
            for (unsigned j = 0; j < ell; ++j) {
                const double d1 = central_diff(finv, x, h_global);
                if (!std::isfinite(d1)) {
                    valid = false;
                    break;
                }
                prod *= std::fabs(d1);
                if (j + 1 < ell) {
                    try {
                        x = t_map_f(scheme, x);
                    } catch (const Error&) {
                        valid = false;  // orbit hit a boundary; skip this grid point
                        break;
                    }
                }
            }
            if (valid) {
                inf_prod = std::min(inf_prod, prod);
                ++valid_points;
            }
        }
        if (valid_points >= grid / 2 && inf_prod >= kExpansionMargin) {
            report.ell = ell;
            report.beta = inf_prod;
            return report;
        }
    }
    throw ConditionViolated("no uniformly expanding power found up to ell_max");
}

double InvariantDensity::at(double x) const {
    if (x < 0.0 || x > 1.0) throw DomainError("InvariantDensity::at: x outside [0,1]");
    auto i = static_cast<std::size_t>(x * bins);
    if (i >= values.size()) i = values.size() - 1;
    return values[i];
}

double InvariantDensity::integral() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s / bins;
}

InvariantDensity ulam_invariant_density(const ExpansionScheme& scheme, unsigned bins,
                                        std::uint64_t max_iters, double tol,
                                        std::uint64_t branch_cap) {
    if (bins < 16) throw ValidationError("ulam_invariant_density: bins must be >= 16");
    const double h = 1.0 / bins;

    std::uint64_t cap;
    if (scheme.infinite_branches()) {
        cap = branch_cap ? branch_cap : 8ULL * bins;
    } else {
        cap = scheme.branch_count();
    }

    // row-stochastic matrix: P[i][j] = |bin_i intersect T^{-1} bin_j| / |bin_i|
    std::vector<double> P(static_cast<std::size_t>(bins) * bins, 0.0);
    const std::int64_t a0 = scheme.alphabet_min();
    for (std::uint64_t bi = 0; bi < cap; ++bi) {
        const auto a = a0 + static_cast<std::int64_t>(bi);
        if (!scheme.in_alphabet(a)) break;
        for (unsigned j = 0; j < bins; ++j) {
            // branch preimage of bin_j: x = f(a + y) for y in [j h, (j+1) h]
            double lo = scheme.f(static_cast<double>(a) + j * h);
            double hi = scheme.f(static_cast<double>(a) + (j + 1) * h);
            if (lo > hi) std::swap(lo, hi);
            lo = std::clamp(lo, 0.0, 1.0);
            hi = std::clamp(hi, 0.0, 1.0);
            if (hi <= lo) continue;
            auto i_lo = static_cast<std::size_t>(lo * bins);
            auto i_hi = static_cast<std::size_t>(hi * bins);
            if (i_lo >= bins) i_lo = bins - 1;
            if (i_hi >= bins) i_hi = bins - 1;
            for (std::size_t i = i_lo; i <= i_hi; ++i) {
                const double cell_lo = std::max(lo, i * h);
                const double cell_hi = std::min(hi, (i + 1) * h);
                if (cell_hi > cell_lo) P[i * bins + j] += (cell_hi - cell_lo) / h;
            }
        }
    }
    // branches past the cap: preserve mass by spreading the missing outflow
    // uniformly (their images cover (0,1) almost uniformly at this scale)
    for (unsigned i = 0; i < bins; ++i) {
        double row = 0.0;
        for (unsigned j = 0; j < bins; ++j) row += P[static_cast<std::size_t>(i) * bins + j];
        const double deficit = 1.0 - row;
        if (deficit > 1e-15) {
            const double share = deficit / bins;
            for (unsigned j = 0; j < bins; ++j) P[static_cast<std::size_t>(i) * bins + j] += share;
        }
    }

    std::vector<double> mass(bins, h), next(bins);
    InvariantDensity out;
    out.bins = bins;
    out.branch_cap = cap;
    double residual = 0.0;
    std::uint64_t iter = 0;
    for (; iter < max_iters; ++iter) {
        std::fill(next.begin(), next.end(), 0.0);
        for (unsigned i = 0; i < bins; ++i) {
            const double m = mass[i];
            if (m == 0.0) continue;
            const double* row = &P[static_cast<std::size_t>(i) * bins];
            for (unsigned j = 0; j < bins; ++j) next[j] += m * row[j];
        }
        // kill rounding drift in the total mass
        double total = 0.0;
        for (double v : next) total += v;
        for (double& v : next) v /= total;
        residual = 0.0;
        for (unsigned j = 0; j < bins; ++j) residual += std::fabs(next[j] - mass[j]);
        mass.swap(next);
        if (residual < tol) {
            ++iter;
            break;
        }
    }
    out.iterations = iter;
    out.l1_residual = residual;
    out.converged = residual < tol;
    out.values.resize(bins);
    for (unsigned i = 0; i < bins; ++i) out.values[i] = mass[i] * bins;
    return out;
}

CumulativeMap CumulativeMap::from_density(const InvariantDensity& density) {
    if (density.values.empty()) throw ValidationError("CumulativeMap: empty density");
    for (double v : density.values)
        if (v <= 0.0)
            throw DensityNotPositive("CumulativeMap: density must be strictly positive");
    CumulativeMap map;
    map.dens_ = density.values;
    map.cum_.assign(density.values.size() + 1, 0.0);
    const double h = 1.0 / density.bins;
    for (std::size_t i = 0; i < density.values.size(); ++i)
        map.cum_[i + 1] = map.cum_[i] + density.values[i] * h;
    // force an exact endpoint so F is a bijection of [0,1]
    const double total = map.cum_.back();
    for (double& c : map.cum_) c /= total;
    for (double& d : map.dens_) d /= total;
    return map;
}

CumulativeMap CumulativeMap::gauss_closed_form() {
    CumulativeMap map;
    map.closed_form_ = true;
    return map;
}

double CumulativeMap::F(double t) const {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    if (closed_form_) return std::log1p(t) / std::numbers::ln2;
    const std::size_t bins = dens_.size();
    auto i = static_cast<std::size_t>(t * bins);
    if (i >= bins) i = bins - 1;
    return cum_[i] + dens_[i] * (t - static_cast<double>(i) / bins);
}

double CumulativeMap::F_inv(double y) const {
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return 1.0;
    if (closed_form_) return std::expm1(y * std::numbers::ln2);
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), y);
    std::size_t i = (it == cum_.begin()) ? 0 : static_cast<std::size_t>(it - cum_.begin()) - 1;
    if (i >= dens_.size()) i = dens_.size() - 1;
    return static_cast<double>(i) / dens_.size() + (y - cum_[i]) / dens_[i];
}

double conjugated_map_S(const ExpansionScheme& scheme, const CumulativeMap& cum, double x) {
    if (x <= 0.0 || x >= 1.0) throw DomainError("conjugated_map_S: x must lie in (0,1)");
    return cum.F(t_map_f(scheme, cum.F_inv(x)));
}

double conjugated_map_S(const ExpansionScheme& scheme, const InvariantDensity& density,
                        double x) {
    return conjugated_map_S(scheme, CumulativeMap::from_density(density), x);
}

double markov_obstruction_defect(const ExpansionScheme& scheme, const CumulativeMap& cum,
                                 std::int64_t branch, unsigned probes) {
    if (!scheme.in_alphabet(branch))
        throw BranchOutOfRange("branch " + std::to_string(branch));
    if (probes < 3) throw ValidationError("markov_obstruction_defect: need >= 3 probes");

    const auto [lo, hi] = scheme.branch_interval(branch);
    const double f_lo = cum.F(lo), f_hi = cum.F(hi);
    const double span = f_hi - f_lo;
    if (span <= 0.0) throw DomainError("markov_obstruction_defect: empty branch image");

    std::vector<double> ys(probes), vs(probes);
    for (unsigned t = 0; t < probes; ++t) {
        ys[t] = f_lo + span * (t + 1.0) / (probes + 1.0);
        vs[t] = conjugated_map_S(scheme, cum, ys[t]);
    }
    const LinearFit fit = least_squares(ys, vs);
    double max_resid = 0.0;
    for (unsigned t = 0; t < probes; ++t) {
        const double r = std::fabs(vs[t] - (fit.intercept + fit.slope * ys[t]));
        max_resid = std::max(max_resid, r);
    }
    return max_resid / span;
}

}  // namespace cfdim
