/// @file gamma.hpp
/// @brief Morita's p-adic Gamma function, the pi-twisted gamma symbol, and
/// the prime-to-p residue map on Z_p-rationals.
///
/// gamma_p(x, p, P) evaluates the Morita Gamma at x in Z_p cap Q to absolute
/// precision P, through the integer approximant m = x mod p^P: Gamma_p is
/// 1-Lipschitz, so Gamma_p(m) mod p^P is the answer. Small moduli get a full
/// residue table (cached per (p, P)); mid-size moduli are scanned directly;
/// beyond 2^31 the evaluation refuses rather than approximate.
///
/// gamma_pi(x, y) is the symbol attached to a pair x, y in Z_p with
/// p*y - x = mu in Z. In the window 0 <= mu < p it equals pi^mu * Gamma_p(x);
/// outside, the argument is shifted into the window and the shift is paid
/// for with an exact rational Gamma factor.

#pragma once

#include <phg/padic.hpp>
#include <phg/rational.hpp>

#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

namespace phg {

namespace detail {

constexpr std::uint64_t kGammaTableMax = 1ull << 24;
constexpr std::uint64_t kGammaScanMax = 1ull << 31;

inline std::uint64_t gamma_modulus(long p, long P) {
    if (P < 1) throw std::invalid_argument("gamma precision must be >= 1");
    Integer big = int_pow(static_cast<unsigned long>(p), static_cast<unsigned long>(P));
    if (big > Integer(static_cast<unsigned long>(kGammaScanMax)))
        throw std::domain_error("p^P exceeds the 2^31 evaluation capacity of gamma_p");
    return mpz_get_ui(big.get_mpz_t());
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

/// Residues Gamma_p(k) mod p^P for all k < p^P, by the recurrence
/// Gamma_p(k+1) = Gamma_p(k) * (-k) when p does not divide k, else
/// -Gamma_p(k).
inline const std::vector<std::uint32_t>& gamma_table(long p, long P, std::uint64_t mod) {
    static std::map<std::pair<long, long>, std::vector<std::uint32_t>> cache;
    auto key = std::make_pair(p, P);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<std::uint32_t> t(static_cast<size_t>(mod));
    std::uint64_t acc = 1;
    for (std::uint64_t k = 0;; ++k) {
        t[static_cast<size_t>(k)] = static_cast<std::uint32_t>(acc);
        if (k + 1 == mod) break;
        std::uint64_t f = (k % p == 0) ? mod - 1 : mod - k;  // -1 or -k mod p^P
        acc = mulmod(acc, f, mod);
    }
    return cache.emplace(key, std::move(t)).first->second;
}

inline std::uint64_t gamma_residue_scan(std::uint64_t m, long p, std::uint64_t mod) {
    std::uint64_t acc = 1;
    for (std::uint64_t j = 1; j < m; ++j)
        if (j % p != 0) acc = mulmod(acc, j, mod);
    if (m % 2 == 1) acc = (mod - acc) % mod;
    return acc;
}

}  // namespace detail

/// Morita Gamma at x in Z_p cap Q, as a p-adic unit mod p^P.
inline PadicNumber gamma_p(const Rational& x, long p, long P = PadicNumber::kDefaultPrecision) {
    require_odd_prime(p);
    if (x != 0 && vp(x.get_den(), p) != 0)
        throw std::domain_error("gamma_p needs an argument in Z_p");
    using Key = std::tuple<long, long, Rational>;
    static std::map<Key, PadicNumber> memo;
    Key key(p, P, x);
    auto hit = memo.find(key);
    if (hit != memo.end()) return hit->second;

    std::uint64_t mod = detail::gamma_modulus(p, P);
    Integer modz(static_cast<unsigned long>(mod));
    Integer mz = x.get_num() % modz * mod_inverse(x.get_den(), modz) % modz;
    if (mz < 0) mz += modz;
    std::uint64_t m = mpz_get_ui(mz.get_mpz_t());

    std::uint64_t r = (mod <= detail::kGammaTableMax)
                          ? detail::gamma_table(p, P, mod)[static_cast<size_t>(m)]
                          : detail::gamma_residue_scan(m, p, mod);
    PadicNumber value(p, 0, P, Integer(static_cast<unsigned long>(r)));
    memo.emplace(std::move(key), value);
    return value;
}

/// Value of Gamma_p(x) * Gamma_p(1-x): equal to -(-1)^t with t = -x mod p.
inline int gamma_reflection_sign(const Rational& x, long p) {
    require_odd_prime(p);
    Integer pz(p);
    Integer r = x.get_num() % pz * mod_inverse(x.get_den(), pz) % pz;
    if (r < 0) r += pz;
    long t = (p - r.get_si()) % p;
    return -sign_pow(t);
}

// ---------------------------------------------------------------------------
// Prime map a -> a' with p*a' - a = mu_a in {0, ..., p-1}.

struct PrimeStep {
    Rational next;
    long mu;
};

inline PrimeStep prime_step(const Rational& a, long p) {
    require_odd_prime(p);
    if (a != 0 && vp(a.get_den(), p) != 0)
        throw std::domain_error("prime map needs a point of Z_p");
    Integer pz(p);
    Integer r = a.get_num() % pz * mod_inverse(a.get_den(), pz) % pz;
    if (r < 0) r += pz;
    long mu = (p - r.get_si()) % p;
    Rational next = (a + mu) / p;
    next.canonicalize();
    return {next, mu};
}

/// One full cycle of the prime map; errors out when the orbit does not
/// return to its start within f_max steps.
struct Orbit {
    std::vector<Rational> points;  // points[i] is the i-th iterate, points[0] = a
    std::vector<long> mus;         // mus[i] belongs to the step points[i] -> points[i+1]

    long length() const { return static_cast<long>(points.size()); }
};

inline Orbit orbit(const Rational& a, long p, long f_max = 8) {
    Orbit o;
    Rational cur = a;
    for (long i = 0; i < f_max; ++i) {
        PrimeStep st = prime_step(cur, p);
        o.points.push_back(cur);
        o.mus.push_back(st.mu);
        cur = st.next;
        if (cur == a) return o;
    }
    throw std::domain_error("prime-map orbit did not close within f_max steps");
}

// ---------------------------------------------------------------------------
// The gamma symbol.

/// gamma_pi(x, y): requires x, y in Z_p and mu = p*y - x in Z. Reduction to
/// the window 0 <= mu < p shifts x by the multiple-of-p part m of mu:
///   gamma(x, y) = (-1)^m * (Gamma(x)/Gamma(x+m)) * pi^m * [pi^(mu-m) Gamma_p(x+m)]
/// where the classical Gamma ratio is an exact rational (a Pochhammer
/// product). A zero factor in that product means the symbol degenerates.
inline PiElement gamma_pi(const Rational& x, const Rational& y, long p,
                          long P = PadicNumber::kDefaultPrecision) {
    require_odd_prime(p);
    if ((y != 0 && vp(y.get_den(), p) != 0) || (x != 0 && vp(x.get_den(), p) != 0))
        throw std::domain_error("gamma symbol needs both arguments in Z_p");
    Rational mu_q = Rational(p) * y - x;
    if (mu_q.get_den() != 1)
        throw std::invalid_argument("gamma symbol needs p*y - x to be a rational integer");
    if (!mu_q.get_num().fits_slong_p())
        throw std::invalid_argument("gamma symbol shift is out of range");
    long mu = mu_q.get_num().get_si();
    long mu_t = ((mu % p) + p) % p;
    long m = mu - mu_t;

    Rational factor;
    if (m >= 0) {
        Rational poch = pochhammer(x, m);
        if (poch == 0) throw std::domain_error("gamma symbol reduction hits a Gamma pole");
        factor = 1 / poch;
    } else {
        factor = pochhammer(x + m, -m);
        if (factor == 0) throw std::domain_error("gamma symbol reduction hits a Gamma pole");
    }
    PadicNumber coeff = gamma_p(x + m, p, P).scale(factor * sign_pow(m));
    return PiElement(std::move(coeff), mu);
}

}  // namespace phg
