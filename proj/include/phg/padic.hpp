/// @file padic.hpp
/// @brief Capped-precision p-adic numbers and the tamely ramified pi-extension.
///
/// A PadicNumber is p^v * u where u is an integer unit known modulo
/// p^(aprec - v); aprec is the absolute precision ("the value is known
/// mod p^aprec"). Three states:
///   - exact zero: the number 0, infinite precision;
///   - zeroish: relative precision 0, i.e. "certified zero mod p^aprec"
///     (a computation lost all its significant digits);
///   - regular: relative precision > 0, valuation and unit both meaningful.
/// Negative valuations are allowed; aprec can then be <= 0 as well.
///
/// PiElement adjoins pi with pi^(p-1) = -p: a coefficient in Q_p times a
/// pi-power in [0, p-1), folded on every multiplication and division.

#pragma once

#include <phg/rational.hpp>

#include <climits>
#include <ostream>
#include <vector>

namespace phg {

class PadicNumber {
  public:
    static constexpr long kDefaultPrecision = 6;

    /// The exact number 0 (infinite precision).
    static PadicNumber exact_zero(long p) {
        require_odd_prime(p);
        PadicNumber x;
        x.prime_ = p;
        x.exact_zero_ = true;
        return x;
    }

    /// "Zero mod p^aprec": a value whose digits are all used up.
    static PadicNumber zero_at_precision(long p, long aprec) {
        require_odd_prime(p);
        PadicNumber x;
        x.prime_ = p;
        x.val_ = aprec;
        x.aprec_ = aprec;
        x.unit_ = 0;
        return x;
    }

    /// Embed a rational at absolute precision aprec.
    static PadicNumber from_rational(const Rational& q, long p, long aprec = kDefaultPrecision) {
        require_odd_prime(p);
        if (q == 0) return exact_zero(p);
        long v = vp(q, p);
        if (v >= aprec) return zero_at_precision(p, aprec);
        Integer num = remove_p(q.get_num(), p);
        Integer den = remove_p(q.get_den(), p);
        Integer mod = int_pow(static_cast<unsigned long>(p), static_cast<unsigned long>(aprec - v));
        Integer u = (num % mod) * mod_inverse(den, mod) % mod;
        if (u < 0) u += mod;
        return PadicNumber(p, v, aprec, u);
    }

    static PadicNumber from_integer(long n, long p, long aprec = kDefaultPrecision) {
        return from_rational(Rational(n), p, aprec);
    }

    /// Assemble from parts: value = p^v * u known mod p^aprec.
    PadicNumber(long p, long v, long aprec, Integer u) : prime_(p), val_(v), aprec_(aprec) {
        require_odd_prime(p);
        long rel = aprec_ - val_;
        if (rel < 0) throw std::invalid_argument("absolute precision below valuation");
        Integer mod = int_pow(static_cast<unsigned long>(p), static_cast<unsigned long>(rel));
        unit_ = u % mod;
        if (unit_ < 0) unit_ += mod;
        if (rel > 0 && unit_ % p == 0)
            throw std::invalid_argument("unit part must be coprime to p");
        if (rel == 0) unit_ = 0;
    }

    long prime() const { return prime_; }
    bool is_exact_zero() const { return exact_zero_; }
    /// True when no nonzero digit is certified (exact zero or zeroish).
    bool is_zero() const { return exact_zero_ || aprec_ == val_; }
    bool is_unit() const { return !is_zero() && val_ == 0; }

    /// Valuation. For zeroish values this is a lower bound (= aprec).
    long valuation() const {
        if (exact_zero_) throw std::domain_error("valuation of exact zero is +infinity");
        return val_;
    }

    long abs_precision() const {
        if (exact_zero_) throw std::domain_error("exact zero has infinite precision");
        return aprec_;
    }

    long rel_precision() const {
        if (exact_zero_) throw std::domain_error("exact zero has infinite precision");
        return aprec_ - val_;
    }

    /// Unit part, in [0, p^rel). Zero iff zeroish.
    const Integer& unit() const {
        if (exact_zero_) throw std::domain_error("exact zero has no unit part");
        return unit_;
    }

    /// Residue of the whole value mod p^k, for 0 < k <= aprec - needs v >= 0.
    Integer residue(long k) const {
        if (exact_zero_) return 0;
        if (k > aprec_) throw std::domain_error("residue beyond certified precision");
        if (val_ < 0) throw std::domain_error("residue of a non-integral value");
        Integer mod = int_pow(static_cast<unsigned long>(prime_), static_cast<unsigned long>(k));
        if (val_ >= k) return 0;
        return unit_ % mod * int_pow(static_cast<unsigned long>(prime_),
                                     static_cast<unsigned long>(val_)) %
               mod;
    }

    PadicNumber operator-() const {
        if (exact_zero_ || is_zero()) return *this;
        Integer mod = int_pow(static_cast<unsigned long>(prime_),
                              static_cast<unsigned long>(aprec_ - val_));
        return PadicNumber(prime_, val_, aprec_, mod - unit_);
    }

    friend PadicNumber operator+(const PadicNumber& x, const PadicNumber& y) {
        check_same_prime(x, y);
        if (x.exact_zero_) return y;
        if (y.exact_zero_) return x;
        long aprec = std::min(x.aprec_, y.aprec_);
        long v = std::min(x.val_, y.val_);
        long rel = aprec - v;
        if (rel <= 0) return zero_at_precision(x.prime_, aprec);
        Integer mod =
            int_pow(static_cast<unsigned long>(x.prime_), static_cast<unsigned long>(rel));
        Integer s = x.unit_ * int_pow(static_cast<unsigned long>(x.prime_),
                                      static_cast<unsigned long>(x.val_ - v)) +
                    y.unit_ * int_pow(static_cast<unsigned long>(x.prime_),
                                      static_cast<unsigned long>(y.val_ - v));
        s %= mod;
        if (s < 0) s += mod;
        if (s == 0) return zero_at_precision(x.prime_, aprec);
        long shift = vp(s, x.prime_);
        return PadicNumber(x.prime_, v + shift, aprec, remove_p(s, x.prime_));
    }

    friend PadicNumber operator-(const PadicNumber& x, const PadicNumber& y) { return x + (-y); }

    friend PadicNumber operator*(const PadicNumber& x, const PadicNumber& y) {
        check_same_prime(x, y);
        if (x.exact_zero_ || y.exact_zero_) return exact_zero(x.prime_);
        long rel = std::min(x.aprec_ - x.val_, y.aprec_ - y.val_);
        long v = x.val_ + y.val_;
        if (rel == 0) return zero_at_precision(x.prime_, v + rel);
        return PadicNumber(x.prime_, v, v + rel, x.unit_ * y.unit_);
    }

    PadicNumber inverse() const {
        if (is_zero()) throw std::domain_error("inverse of a (certified) zero");
        long rel = aprec_ - val_;
        Integer mod =
            int_pow(static_cast<unsigned long>(prime_), static_cast<unsigned long>(rel));
        return PadicNumber(prime_, -val_, -val_ + rel, mod_inverse(unit_, mod));
    }

    friend PadicNumber operator/(const PadicNumber& x, const PadicNumber& y) {
        return x * y.inverse();
    }

    /// Multiply by an exact nonzero rational: relative precision is preserved.
    PadicNumber scale(const Rational& q) const {
        if (q == 0) return exact_zero(prime_);
        if (exact_zero_) return *this;
        long vq = vp(q, prime_);
        long rel = aprec_ - val_;
        if (rel == 0) return zero_at_precision(prime_, aprec_ + vq);
        Integer mod =
            int_pow(static_cast<unsigned long>(prime_), static_cast<unsigned long>(rel));
        Integer num = remove_p(q.get_num(), prime_) % mod;
        Integer den = remove_p(q.get_den(), prime_);
        Integer u = unit_ * num % mod * mod_inverse(den, mod);
        return PadicNumber(prime_, val_ + vq, aprec_ + vq, u);
    }

    PadicNumber pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        PadicNumber r = from_integer(1, prime_, exact_zero_ ? kDefaultPrecision : aprec_ - val_);
        PadicNumber base = *this;
        // Exponentiation by squaring; relative precision is flat under mul.
        while (e > 0) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    /// Forget digits: lower the absolute precision to aprec.
    PadicNumber truncate_abs(long aprec) const {
        if (exact_zero_) return *this;
        if (aprec >= aprec_) return *this;
        if (aprec <= val_) return zero_at_precision(prime_, aprec);
        return PadicNumber(prime_, val_, aprec, unit_);
    }

    /// Largest e with x == y mod p^e that this precision can certify;
    /// LONG_MAX when the difference is exactly zero.
    friend long agreement_exponent(const PadicNumber& x, const PadicNumber& y) {
        PadicNumber d = x - y;
        if (d.is_exact_zero()) return LONG_MAX;
        if (d.is_zero()) return d.abs_precision();
        return d.valuation();
    }

    bool agrees(const PadicNumber& y, long e) const { return agreement_exponent(*this, y) >= e; }

    /// Base-p digits of the unit part, little-endian, rel_precision of them.
    std::vector<long> unit_digits() const {
        if (exact_zero_) throw std::domain_error("exact zero has no digit expansion");
        std::vector<long> ds;
        Integer u = unit_;
        for (long i = 0; i < aprec_ - val_; ++i) {
            Integer d = u % prime_;
            ds.push_back(d.get_si());
            u /= prime_;
        }
        return ds;
    }

    friend std::ostream& operator<<(std::ostream& os, const PadicNumber& x) {
        if (x.exact_zero_) return os << "0 (exact)";
        if (x.is_zero()) return os << "O(" << x.prime_ << "^" << x.aprec_ << ")";
        os << x.unit_ << "*" << x.prime_ << "^" << x.val_;
        return os << " + O(" << x.prime_ << "^" << x.aprec_ << ")";
    }

  private:
    PadicNumber() = default;

    static void check_same_prime(const PadicNumber& x, const PadicNumber& y) {
        if (x.prime_ != y.prime_) throw std::invalid_argument("mixed primes");
    }

    long prime_ = 3;
    long val_ = 0;
    long aprec_ = 0;
    Integer unit_ = 0;
    bool exact_zero_ = false;
};

/// coeff * pi^e with 0 <= e < p-1 and pi^(p-1) = -p.
class PiElement {
  public:
    PiElement(PadicNumber coeff, long pi_exp) : coeff_(std::move(coeff)), pi_exp_(0) {
        long span = coeff_.prime() - 1;
        // Fold pi^(p-1) -> -p until the exponent lands in [0, p-1).
        long k = (pi_exp >= 0) ? pi_exp / span : -((-pi_exp + span - 1) / span);
        pi_exp_ = pi_exp - k * span;
        if (k != 0) {
            Rational scalar(1);
            for (long i = 0; i < (k > 0 ? k : -k); ++i) scalar *= Rational(-coeff_.prime());
            if (k < 0) scalar = 1 / scalar;
            coeff_ = coeff_.scale(scalar);
        }
    }

    static PiElement from_padic(PadicNumber x) { return PiElement(std::move(x), 0); }

    static PiElement from_rational(const Rational& q, long p, long aprec = PadicNumber::kDefaultPrecision) {
        return from_padic(PadicNumber::from_rational(q, p, aprec));
    }

    const PadicNumber& coeff() const { return coeff_; }
    long pi_exp() const { return pi_exp_; }
    long prime() const { return coeff_.prime(); }
    bool is_zero() const { return coeff_.is_zero(); }

    /// Valuation in units of v(pi) = 1/(p-1): returns (p-1)*v_p(coeff) + pi_exp.
    long ramified_valuation() const {
        return (coeff_.prime() - 1) * coeff_.valuation() + pi_exp_;
    }

    friend PiElement operator*(const PiElement& x, const PiElement& y) {
        return PiElement(x.coeff_ * y.coeff_, x.pi_exp_ + y.pi_exp_);
    }

    friend PiElement operator*(const PiElement& x, const PadicNumber& c) {
        return PiElement(x.coeff_ * c, x.pi_exp_);
    }

    PiElement inverse() const { return PiElement(coeff_.inverse(), -pi_exp_); }

    friend PiElement operator/(const PiElement& x, const PiElement& y) {
        return x * y.inverse();
    }

    PiElement scale(const Rational& q) const { return PiElement(coeff_.scale(q), pi_exp_); }

    PiElement operator-() const { return PiElement(-coeff_, pi_exp_); }

    /// The underlying p-adic number; only valid when no pi remains.
    const PadicNumber& as_padic() const {
        if (pi_exp_ != 0 && !coeff_.is_zero())
            throw std::domain_error("value has a fractional pi-power, not in Q_p");
        return coeff_;
    }

    friend std::ostream& operator<<(std::ostream& os, const PiElement& x) {
        return os << "pi^" << x.pi_exp_ << " * (" << x.coeff_ << ")";
    }

  private:
    PadicNumber coeff_;
    long pi_exp_;
};

/// Agreement of two pi-elements, measured in p-power digits of the
/// coefficients. Mismatched pi-powers agree only if a side is zeroish.
inline long agreement_exponent(const PiElement& x, const PiElement& y) {
    if (x.pi_exp() == y.pi_exp()) return agreement_exponent(x.coeff(), y.coeff());
    if (x.is_zero() && y.is_zero())
        return std::min(x.coeff().abs_precision(), y.coeff().abs_precision());
    return 0;
}

}  // namespace phg
