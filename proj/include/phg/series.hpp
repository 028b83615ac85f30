/// @file series.hpp
/// @brief Truncated Laurent series over an exact coefficient ring, 2x2
/// matrices of them, and rational functions with per-chart expansion.
///
/// A TruncSeries tracks coefficients of x^lo .. x^hi and means "known
/// modulo x^(hi+1)". The chart tag names the local variable x:
///   lambda0    -> x = lambda        (expansion at 0)
///   one_minus  -> x = 1 - lambda    (expansion at 1)
///   reciprocal -> x = 1/lambda      (expansion at infinity)
/// Binary operations insist on matching tags; retag() is the deliberate
/// escape hatch for identities that land in the same local variable by
/// different routes.

#pragma once

#include <phg/padic.hpp>
#include <phg/rational.hpp>

#include <algorithm>
#include <vector>

namespace phg {

enum class Chart { lambda0, one_minus, reciprocal };

inline const char* chart_name(Chart c) {
    switch (c) {
        case Chart::lambda0: return "lambda";
        case Chart::one_minus: return "1-lambda";
        case Chart::reciprocal: return "1/lambda";
    }
    return "?";
}

template <class R>
struct ring_ops;

template <>
struct ring_ops<Rational> {
    static Rational zero(const Rational&) { return Rational(0); }
    static bool exactly_zero(const Rational& x) { return x == 0; }
    static Rational scale(const Rational& x, const Rational& q) { return x * q; }
    static Rational inverse(const Rational& x) {
        if (x == 0) throw std::domain_error("inverse of zero coefficient");
        return 1 / x;
    }
};

template <>
struct ring_ops<PadicNumber> {
    static PadicNumber zero(const PadicNumber& proto) {
        return PadicNumber::exact_zero(proto.prime());
    }
    static bool exactly_zero(const PadicNumber& x) { return x.is_exact_zero(); }
    static PadicNumber scale(const PadicNumber& x, const Rational& q) { return x.scale(q); }
    static PadicNumber inverse(const PadicNumber& x) { return x.inverse(); }
};

template <class R>
class TruncSeries {
    using ops = ring_ops<R>;

  public:
    /// Zero-filled series supported on x^lo..x^hi; proto supplies the ring.
    TruncSeries(Chart chart, long lo, long hi, R proto)
        : chart_(chart), lo_(lo), hi_(hi), zero_(ops::zero(proto)) {
        if (hi_ < lo_) throw std::invalid_argument("empty truncation range");
        c_.assign(static_cast<size_t>(hi_ - lo_ + 1), zero_);
    }

    static TruncSeries constant(Chart chart, R value, long hi) {
        TruncSeries s(chart, 0, hi, value);
        s.c_[0] = std::move(value);
        return s;
    }

    static TruncSeries from_coeffs(Chart chart, long lo, std::vector<R> coeffs) {
        if (coeffs.empty()) throw std::invalid_argument("no coefficients");
        TruncSeries s(chart, lo, lo + static_cast<long>(coeffs.size()) - 1, coeffs.front());
        s.c_ = std::move(coeffs);
        return s;
    }

    Chart chart() const { return chart_; }
    long lo() const { return lo_; }
    long hi() const { return hi_; }
    const R& proto() const { return zero_; }

    /// Coefficient of x^k; zero below lo, error above the known range.
    const R& coeff(long k) const {
        if (k > hi_) throw std::out_of_range("coefficient beyond truncation order");
        if (k < lo_) return zero_;
        return c_[static_cast<size_t>(k - lo_)];
    }

    void set_coeff(long k, R v) {
        if (k < lo_ || k > hi_) throw std::out_of_range("coefficient outside stored range");
        c_[static_cast<size_t>(k - lo_)] = std::move(v);
    }

    /// Exponent of the first coefficient that is not exactly zero; hi+1 if none.
    long order() const {
        for (long k = lo_; k <= hi_; ++k)
            if (!ops::exactly_zero(coeff(k))) return k;
        return hi_ + 1;
    }

    bool exactly_zero_to_truncation() const { return order() > hi_; }

    TruncSeries retag(Chart chart) const {
        TruncSeries s = *this;
        s.chart_ = chart;
        return s;
    }

    /// Multiply by x^k.
    TruncSeries shift(long k) const {
        TruncSeries s = *this;
        s.lo_ += k;
        s.hi_ += k;
        return s;
    }

    TruncSeries truncate(long hi) const {
        if (hi >= hi_) return *this;
        long lo = std::min(lo_, hi);
        TruncSeries s(chart_, lo, hi, zero_);
        for (long k = lo; k <= hi; ++k) s.set_coeff(k, coeff(k));
        return s;
    }

    TruncSeries operator-() const {
        TruncSeries s = *this;
        for (auto& x : s.c_) x = ops::scale(x, Rational(-1));
        return s;
    }

    TruncSeries scale(const Rational& q) const {
        TruncSeries s = *this;
        for (auto& x : s.c_) x = ops::scale(x, q);
        return s;
    }

    friend TruncSeries operator+(const TruncSeries& f, const TruncSeries& g) {
        require_same_chart(f, g);
        long hi = std::min(f.hi_, g.hi_);
        long lo = std::min({f.lo_, g.lo_, hi});
        TruncSeries s(f.chart_, lo, hi, f.zero_);
        for (long k = lo; k <= hi; ++k) s.set_coeff(k, f.coeff(k) + g.coeff(k));
        return s;
    }

    friend TruncSeries operator-(const TruncSeries& f, const TruncSeries& g) { return f + (-g); }

    friend TruncSeries operator*(const TruncSeries& f, const TruncSeries& g) {
        require_same_chart(f, g);
        long flo = f.order(), glo = g.order();
        long hi = std::min(f.hi_ + glo, g.hi_ + flo);
        long lo = std::min(flo + glo, hi);
        TruncSeries s(f.chart_, lo, hi, f.zero_);
        for (long i = flo; i <= std::min(f.hi_, hi - glo); ++i) {
            if (ops::exactly_zero(f.coeff(i))) continue;
            for (long j = glo; j <= std::min(g.hi_, hi - i); ++j)
                s.set_coeff(i + j, s.coeff(i + j) + f.coeff(i) * g.coeff(j));
        }
        return s;
    }

    /// Derivative with respect to the local variable.
    TruncSeries derivative() const {
        if (hi_ - 1 < lo_ - 1) throw std::domain_error("nothing left to differentiate");
        TruncSeries s(chart_, lo_ - 1, hi_ - 1, zero_);
        for (long k = lo_; k <= hi_; ++k) {
            if (k == 0) continue;
            s.set_coeff(k - 1, ops::scale(coeff(k), Rational(k)));
        }
        return s;
    }

    /// Laurent inverse: factor x^m off, invert the unit part.
    TruncSeries inverse() const {
        long m = order();
        if (m > hi_) throw std::domain_error("inverse of a series with no visible leading term");
        long n = hi_ - m;  // unit part known to this order
        std::vector<R> b(static_cast<size_t>(n + 1), zero_);
        R a0inv = ops::inverse(coeff(m));
        b[0] = a0inv;
        for (long k = 1; k <= n; ++k) {
            R acc = zero_;
            for (long j = 1; j <= k; ++j) acc = acc + coeff(m + j) * b[static_cast<size_t>(k - j)];
            b[static_cast<size_t>(k)] = ops::scale(acc * a0inv, Rational(-1));
        }
        TruncSeries s(chart_, -m, -m + n, zero_);
        for (long k = 0; k <= n; ++k) s.set_coeff(-m + k, b[static_cast<size_t>(k)]);
        return s;
    }

    /// f(x) -> f(x^p): index dilation, known mod x^(p(hi+1)).
    TruncSeries dilate(long p) const {
        if (p < 1) throw std::invalid_argument("dilation index must be positive");
        TruncSeries s(chart_, lo_ * p, (hi_ + 1) * p - 1, zero_);
        for (long k = lo_; k <= hi_; ++k) s.set_coeff(k * p, coeff(k));
        return s;
    }

    /// Substitute a series with zero constant term (g.order() >= 1), Horner style.
    TruncSeries compose(const TruncSeries& g) const {
        if (lo_ < 0) throw std::domain_error("composition needs a power series");
        if (g.order() < 1) throw std::domain_error("inner series must vanish at 0");
        long hi = std::min(hi_ * std::max(g.order(), 1L), g.hi_);
        TruncSeries acc = TruncSeries::constant(g.chart_, coeff(hi_), hi);
        for (long k = hi_ - 1; k >= 0; --k)
            acc = (acc * g + TruncSeries::constant(g.chart_, coeff(k), hi)).truncate(hi);
        return acc;
    }

    /// Evaluate at an exact rational point of the local variable.
    R evaluate(const Rational& x0) const {
        R acc = zero_;
        if (x0 == 0) {
            if (lo_ > 0) return acc;
            if (order() < 0) throw std::domain_error("pole at the expansion point");
            return lo_ <= 0 ? coeff(0) : acc;
        }
        Rational power = 1;
        for (long i = 0; i < lo_; ++i) power *= x0;
        for (long i = 0; i > lo_; --i) power /= x0;
        for (long k = lo_; k <= hi_; ++k) {
            acc = acc + ops::scale(coeff(k), power);
            power *= x0;
        }
        return acc;
    }

  private:
    static void require_same_chart(const TruncSeries& f, const TruncSeries& g) {
        if (f.chart_ != g.chart_)
            throw std::invalid_argument("series live in different charts");
    }

    Chart chart_;
    long lo_;
    long hi_;
    std::vector<R> c_;
    R zero_;
};

using SeriesQ = TruncSeries<Rational>;
using SeriesP = TruncSeries<PadicNumber>;

/// Largest e such that every coefficient of f-g (over the common known
/// range) is congruent to zero mod p^e.
inline long series_agreement(const TruncSeries<PadicNumber>& f,
                             const TruncSeries<PadicNumber>& g) {
    long hi = std::min(f.hi(), g.hi());
    long lo = std::min(f.lo(), g.lo());
    long best = LONG_MAX;
    for (long k = lo; k <= hi; ++k) best = std::min(best, agreement_exponent(f.coeff(k), g.coeff(k)));
    return best;
}

template <class R>
struct SeriesMatrix2 {
    TruncSeries<R> a, b, c, d;  // [[a, b], [c, d]]

    SeriesMatrix2(TruncSeries<R> a_, TruncSeries<R> b_, TruncSeries<R> c_, TruncSeries<R> d_)
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}

    static SeriesMatrix2 identity(Chart chart, long hi, const R& one_value) {
        TruncSeries<R> one = TruncSeries<R>::constant(chart, one_value, hi);
        TruncSeries<R> zero(chart, 0, hi, one_value);
        return SeriesMatrix2(one, zero, zero, one);
    }

    const TruncSeries<R>& entry(int i, int j) const {
        if (i == 0) return j == 0 ? a : b;
        return j == 0 ? c : d;
    }

    friend SeriesMatrix2 operator+(const SeriesMatrix2& x, const SeriesMatrix2& y) {
        return SeriesMatrix2(x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d);
    }

    friend SeriesMatrix2 operator-(const SeriesMatrix2& x, const SeriesMatrix2& y) {
        return SeriesMatrix2(x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d);
    }

    friend SeriesMatrix2 operator*(const SeriesMatrix2& x, const SeriesMatrix2& y) {
        return SeriesMatrix2(x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                             x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d);
    }

    SeriesMatrix2 scale(const Rational& q) const {
        return SeriesMatrix2(a.scale(q), b.scale(q), c.scale(q), d.scale(q));
    }

    SeriesMatrix2 scale_series(const TruncSeries<R>& s) const {
        return SeriesMatrix2(a * s, b * s, c * s, d * s);
    }

    SeriesMatrix2 transpose() const { return SeriesMatrix2(a, c, b, d); }

    TruncSeries<R> det() const { return a * d - b * c; }

    /// Adjugate over determinant; the determinant must have a visible
    /// leading coefficient.
    SeriesMatrix2 inverse() const {
        TruncSeries<R> dinv = det().inverse();
        return SeriesMatrix2(d * dinv, -(b * dinv), -(c * dinv), a * dinv);
    }

    SeriesMatrix2 truncate(long hi) const {
        return SeriesMatrix2(a.truncate(hi), b.truncate(hi), c.truncate(hi), d.truncate(hi));
    }

    /// Left-multiply by a constant rational 2x2 matrix m (row i of result
    /// = sum_k m[i][k] * row k).
    SeriesMatrix2 left_mul_const(const Rational m[2][2]) const {
        return SeriesMatrix2(a.scale(m[0][0]) + c.scale(m[0][1]), b.scale(m[0][0]) + d.scale(m[0][1]),
                             a.scale(m[1][0]) + c.scale(m[1][1]), b.scale(m[1][0]) + d.scale(m[1][1]));
    }
};

using SeriesMatrixQ = SeriesMatrix2<Rational>;

// ---------------------------------------------------------------------------
// Dense polynomials over Q (index = power of lambda) and rational functions.

using PolyQ = std::vector<Rational>;

inline PolyQ poly_trim(PolyQ p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

inline PolyQ poly_mul(const PolyQ& f, const PolyQ& g) {
    if (f.empty() || g.empty()) return {};
    PolyQ r(f.size() + g.size() - 1, Rational(0));
    for (size_t i = 0; i < f.size(); ++i)
        for (size_t j = 0; j < g.size(); ++j) r[i + j] += f[i] * g[j];
    return poly_trim(std::move(r));
}

inline PolyQ poly_add(PolyQ f, const PolyQ& g) {
    if (f.size() < g.size()) f.resize(g.size(), Rational(0));
    for (size_t i = 0; i < g.size(); ++i) f[i] += g[i];
    return poly_trim(std::move(f));
}

inline PolyQ poly_scale(PolyQ f, const Rational& q) {
    for (auto& c : f) c *= q;
    return poly_trim(std::move(f));
}

inline Rational poly_eval(const PolyQ& f, const Rational& x) {
    Rational acc(0);
    for (size_t i = f.size(); i-- > 0;) acc = acc * x + f[i];
    return acc;
}

/// P(lambda) -> P(1 - t) as a polynomial in t.
inline PolyQ poly_sub_one_minus(const PolyQ& f) {
    PolyQ acc, power{Rational(1)};
    const PolyQ one_minus_t{Rational(1), Rational(-1)};
    for (size_t i = 0; i < f.size(); ++i) {
        acc = poly_add(std::move(acc), poly_scale(power, f[i]));
        if (i + 1 < f.size()) power = poly_mul(power, one_minus_t);
    }
    return acc;
}

/// Coefficients reversed into degree slot D (for lambda -> 1/t).
inline PolyQ poly_reverse(const PolyQ& f, size_t degree) {
    PolyQ r(degree + 1, Rational(0));
    for (size_t i = 0; i < f.size(); ++i) r[degree - i] = f[i];
    return poly_trim(std::move(r));
}

/// Laurent expansion of P/Q at t = 0, coefficients up to t^hi.
inline SeriesQ laurent_divide(PolyQ num, PolyQ den, Chart chart, long hi) {
    num = poly_trim(std::move(num));
    den = poly_trim(std::move(den));
    if (den.empty()) throw std::domain_error("division by the zero polynomial");
    size_t b = 0;
    while (b < den.size() && den[b] == 0) ++b;
    if (num.empty()) return SeriesQ(chart, std::min(0L, hi), hi, Rational(0));
    size_t a = 0;
    while (a < num.size() && num[a] == 0) ++a;
    long lo = static_cast<long>(a) - static_cast<long>(b);
    if (lo > hi) return SeriesQ(chart, hi, hi, Rational(0));
    long terms = hi - lo;
    std::vector<Rational> s(static_cast<size_t>(terms + 1), Rational(0));
    auto nc = [&](long k) { return (a + k < num.size()) ? num[a + k] : Rational(0); };
    auto dc = [&](long k) { return (b + k < den.size()) ? den[b + k] : Rational(0); };
    for (long k = 0; k <= terms; ++k) {
        Rational acc = nc(k);
        for (long j = 0; j < k; ++j) acc -= s[static_cast<size_t>(j)] * dc(k - j);
        s[static_cast<size_t>(k)] = acc / dc(0);
    }
    return SeriesQ::from_coeffs(chart, lo, std::move(s));
}

/// Quotient of two polynomials in lambda, expandable in any chart.
struct RationalFunction {
    PolyQ num, den;

    RationalFunction() : num{}, den{Rational(1)} {}
    RationalFunction(PolyQ n, PolyQ d) : num(poly_trim(std::move(n))), den(poly_trim(std::move(d))) {
        if (den.empty()) throw std::domain_error("zero denominator");
    }

    static RationalFunction constant(const Rational& c) { return RationalFunction({c}, {Rational(1)}); }

    /// c / lambda^k or c * lambda^k depending on the sign of k.
    static RationalFunction monomial(const Rational& c, long k) {
        if (k >= 0) {
            PolyQ n(static_cast<size_t>(k) + 1, Rational(0));
            n.back() = c;
            return RationalFunction(std::move(n), {Rational(1)});
        }
        PolyQ d(static_cast<size_t>(-k) + 1, Rational(0));
        d.back() = 1;
        return RationalFunction({c}, std::move(d));
    }

    /// c / (1 - lambda)^k, k >= 0.
    static RationalFunction over_one_minus(const Rational& c, long k) {
        PolyQ d{Rational(1)};
        for (long i = 0; i < k; ++i) d = poly_mul(d, {Rational(1), Rational(-1)});
        return RationalFunction({c}, std::move(d));
    }

    friend RationalFunction operator+(const RationalFunction& f, const RationalFunction& g) {
        return RationalFunction(poly_add(poly_mul(f.num, g.den), poly_mul(g.num, f.den)),
                                poly_mul(f.den, g.den));
    }

    friend RationalFunction operator*(const RationalFunction& f, const RationalFunction& g) {
        return RationalFunction(poly_mul(f.num, g.num), poly_mul(f.den, g.den));
    }

    Rational evaluate(const Rational& x) const {
        Rational d = poly_eval(den, x);
        if (d == 0) throw std::domain_error("evaluation at a pole");
        return poly_eval(num, x) / d;
    }

    /// Expand in the chart's local variable up to t^hi.
    SeriesQ expand(Chart chart, long hi) const {
        switch (chart) {
            case Chart::lambda0:
                return laurent_divide(num, den, chart, hi);
            case Chart::one_minus:
                return laurent_divide(poly_sub_one_minus(num), poly_sub_one_minus(den), chart, hi);
            case Chart::reciprocal: {
                size_t d = std::max(num.empty() ? 0 : num.size() - 1,
                                    den.empty() ? 0 : den.size() - 1);
                return laurent_divide(poly_reverse(num, d), poly_reverse(den, d), chart, hi);
            }
        }
        throw std::logic_error("unknown chart");
    }
};

}  // namespace phg
