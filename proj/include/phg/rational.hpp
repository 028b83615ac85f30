/// @file rational.hpp
/// @brief Exact rational scalars on top of GMP, with p-adic valuation helpers.
///
/// mpq_class is used directly as the rational carrier: it is canonical
/// (reduced, positive denominator) by construction, which is exactly the
/// RationalScalar contract. Everything here is a small free function.

#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace phg {

using Rational = mpq_class;
using Integer = mpz_class;

/// p^e as an arbitrary-precision integer, e >= 0.
inline Integer int_pow(unsigned long base, unsigned long e) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, e);
    return r;
}

inline bool is_small_prime(long p) {
    if (p < 2) return false;
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

/// Check the working-prime contract (odd prime, p >= 3).
inline void require_odd_prime(long p) {
    if (p < 3 || p % 2 == 0 || !is_small_prime(p))
        throw std::invalid_argument("prime must be an odd prime >= 3: " + std::to_string(p));
}

/// v_p of a nonzero integer.
inline long vp(const Integer& n, long p) {
    if (n == 0) throw std::domain_error("v_p(0) is undefined");
    Integer cofactor;
    return static_cast<long>(
        mpz_remove(cofactor.get_mpz_t(), n.get_mpz_t(), Integer(p).get_mpz_t()));
}

/// v_p of a nonzero rational: v_p(num) - v_p(den).
inline long vp(const Rational& q, long p) {
    if (q == 0) throw std::domain_error("v_p(0) is undefined");
    long v = 0;
    if (q.get_num() != 0) v += vp(q.get_num(), p);
    v -= vp(q.get_den(), p);
    return v;
}

/// Strip all factors of p from a nonzero integer.
inline Integer remove_p(const Integer& n, long p) {
    Integer cofactor;
    mpz_remove(cofactor.get_mpz_t(), n.get_mpz_t(), Integer(p).get_mpz_t());
    return cofactor;
}

/// Modular inverse; throws if not invertible.
inline Integer mod_inverse(const Integer& a, const Integer& modulus) {
    Integer r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), modulus.get_mpz_t()) == 0)
        throw std::domain_error("modular inverse does not exist");
    return r;
}

/// (-1)^e for any integer e.
inline int sign_pow(long e) { return (e % 2 == 0) ? 1 : -1; }

/// Parse "n" or "n/d" into a canonical rational.
inline Rational parse_rational(const std::string& text) {
    Rational q;
    if (q.set_str(text, 10) != 0)
        throw std::invalid_argument("cannot parse rational: " + text);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Rising factorial (x)_m = x(x+1)...(x+m-1), (x)_0 = 1.
inline Rational pochhammer(const Rational& x, long m) {
    if (m < 0) throw std::invalid_argument("pochhammer needs m >= 0");
    Rational r(1);
    for (long j = 0; j < m; ++j) r *= x + j;
    return r;
}

}  // namespace phg
