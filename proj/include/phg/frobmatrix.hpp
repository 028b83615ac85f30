/// @file frobmatrix.hpp
/// @brief The Frobenius matrix of the hypergeometric crystal as a truncated
/// series at the origin, with its splitting diagnostics.
///
/// For the standard lifting lambda -> lambda^p the Frobenius acts on the
/// local solution basis through
///   T(lambda) = U_b(lambda^p)^{-1} diag(xi_1, xi_2 lambda^{mu_3}) U_a(lambda),
/// where (a, b) is a parameter pair with mu = p b - a integral and the xi are
/// the eigenvalue closed forms at the origin. Everything on the right except
/// the xi is exact rational, so the series is assembled from two exact
/// rational series per entry and the xi are embedded p-adically only at the
/// end, at a precision padded by the worst denominator valuation seen. The
/// mu in {0..p-1}^3 classification of the valuation shape of T and the mod-p
/// supersingular polynomial live here as well.

#pragma once

#include <phg/contiguity.hpp>

namespace phg {

using SeriesMatrixP = SeriesMatrix2<PadicNumber>;

/// A lifting of Frobenius on the lambda line. Every kind reduces to
/// lambda^p modulo p; the kinds differ in which singular points they pull
/// back with full multiplicity p.
enum class LiftingKind { standard, one_adapted, zero_one_adapted, infinity_adapted };

struct FrobeniusLifting {
    LiftingKind kind;
    long p;
    RationalFunction phi;

    /// lambda^p; adapted at 0 and infinity.
    static FrobeniusLifting standard(long p) {
        require_odd_prime(p);
        return {LiftingKind::standard, p, RationalFunction::monomial(Rational(1), p)};
    }

    /// 1 - (1-lambda)^p; adapted at 1 and infinity.
    static FrobeniusLifting one_adapted(long p) {
        require_odd_prime(p);
        PolyQ num(static_cast<size_t>(p) + 1, Rational(0));
        for (long k = 1; k <= p; ++k) num[static_cast<size_t>(k)] = -binomial_signed(p, k);
        return {LiftingKind::one_adapted, p, RationalFunction(std::move(num), {Rational(1)})};
    }

    /// lambda^p / ((1-lambda)^p + lambda^p), i.e. theta^{-1}(theta(lambda)^p)
    /// for theta(lambda) = lambda/(1-lambda); adapted at 0 and 1.
    static FrobeniusLifting zero_one_adapted(long p) {
        require_odd_prime(p);
        PolyQ num(static_cast<size_t>(p) + 1, Rational(0));
        num.back() = 1;
        PolyQ den(static_cast<size_t>(p) + 1, Rational(0));
        for (long k = 0; k <= p; ++k) den[static_cast<size_t>(k)] = binomial_signed(p, k);
        den.back() += 1;
        return {LiftingKind::zero_one_adapted, p, RationalFunction(std::move(num), std::move(den))};
    }

    /// lambda^p again, tagged for use around infinity.
    static FrobeniusLifting infinity_adapted(long p) {
        require_odd_prime(p);
        return {LiftingKind::infinity_adapted, p, RationalFunction::monomial(Rational(1), p)};
    }

  private:
    static Rational binomial_signed(long n, long k) {
        Integer b;
        mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
        Rational r(b);
        if (k % 2 != 0) r = -r;
        return r;
    }
};

/// True when phi(lambda) - lambda^p has all coefficients divisible by p
/// through the given order.
inline bool lifting_close_to_frobenius(const FrobeniusLifting& L, long order) {
    SeriesQ s = L.phi.expand(Chart::lambda0, order);
    for (long k = s.lo(); k <= s.hi(); ++k) {
        Rational d = s.coeff(k);
        if (k == L.p) d -= 1;
        if (d != 0 && vp(d, L.p) < 1) return false;
    }
    return true;
}

/// Order of vanishing of phi at the singular point z (0, 1, or 2 for
/// infinity), i.e. the pullback multiplicity of that point.
inline long lifting_adapted_multiplicity(const FrobeniusLifting& L, int z) {
    long probe = 2 * L.p + 2;
    SeriesQ s = [&] {
        switch (z) {
            case 0:
                return L.phi.expand(Chart::lambda0, probe);
            case 1: {
                RationalFunction g = RationalFunction::constant(Rational(1)) +
                                     L.phi * RationalFunction::constant(Rational(-1));
                return g.expand(Chart::one_minus, probe);
            }
            case 2: {
                RationalFunction inv(L.phi.den, L.phi.num);
                return inv.expand(Chart::reciprocal, probe);
            }
            default:
                throw std::invalid_argument("singular point must be 0, 1, or 2 (infinity)");
        }
    }();
    for (long k = s.lo(); k <= s.hi(); ++k)
        if (s.coeff(k) != 0) return k;
    return probe + 1;
}

struct FrobeniusMatrix {
    SeriesMatrixP T;
    std::array<long, 3> mu;
    long certified;  // least absolute precision among stored coefficients
    PadicNumber xi1, xi2;
};

namespace detail {

/// Smallest p-valuation among the nonzero coefficients; 0 for a zero series.
inline long min_coeff_valuation(const SeriesQ& f, long p) {
    long best = 0;
    for (long k = f.lo(); k <= f.hi(); ++k)
        if (f.coeff(k) != 0) best = std::min(best, vp(f.coeff(k), p));
    return best;
}

}  // namespace detail

/// Embed an exact rational series coefficientwise at the given precision.
inline SeriesP embed_series(const SeriesQ& f, long p, long prec) {
    std::vector<PadicNumber> c;
    c.reserve(static_cast<size_t>(f.hi() - f.lo() + 1));
    for (long k = f.lo(); k <= f.hi(); ++k) c.push_back(PadicNumber::from_rational(f.coeff(k), p, prec));
    return SeriesP::from_coeffs(f.chart(), f.lo(), std::move(c));
}

/// Frobenius matrix series through lambda^M with coefficients known mod
/// p^{N - loss}; the realized floor is reported in `certified`.
inline FrobeniusMatrix frobenius_matrix_series(const Triple& a, const Triple& b, long p, long M,
                                               long N = PadicNumber::kDefaultPrecision) {
    std::array<long, 3> mu = pair_mus(a, b, p);

    SeriesMatrixQ W = u_matrix(a, 0, M).U;
    long inner = M / p + 1;
    SeriesMatrixQ Vb = u_matrix(b, 0, inner).U.inverse();
    SeriesMatrixQ V(Vb.a.dilate(p).truncate(M), Vb.b.dilate(p).truncate(M),
                    Vb.c.dilate(p).truncate(M), Vb.d.dilate(p).truncate(M));

    // Exact rational carrier series: entry (i,j) of T is
    //   xi_1 * (V_i1 W_1j) + xi_2 * lambda^{mu_3} (V_i2 W_2j).
    const SeriesQ* vrow[2][2] = {{&V.a, &V.b}, {&V.c, &V.d}};
    const SeriesQ* wcol[2][2] = {{&W.a, &W.b}, {&W.c, &W.d}};
    std::vector<SeriesQ> carrier1, carrier2;  // row-major (i,j)
    long loss = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            carrier1.push_back((*vrow[i][0] * *wcol[0][j]).truncate(M));
            carrier2.push_back((*vrow[i][1] * *wcol[1][j]).shift(mu[2]).truncate(M));
            loss = std::min({loss, detail::min_coeff_valuation(carrier1.back(), p),
                             detail::min_coeff_valuation(carrier2.back(), p)});
        }

    long prec = N - loss;
    PiElement x1 = xi_closed_form(a, b, 0, 1, p, prec);
    PiElement x2 = xi_closed_form(a, b, 0, 2, p, prec);
    if (x1.pi_exp() != 0 || x2.pi_exp() != 0)
        throw std::logic_error("eigenvalue carries an unreduced ramified factor");
    PadicNumber xi1 = x1.as_padic();
    PadicNumber xi2 = x2.as_padic();

    auto assemble = [&](const SeriesQ& c1, const SeriesQ& c2) {
        long lo = std::min(c1.lo(), c2.lo());
        long hi = std::min(M, std::min(c1.hi(), c2.hi()));
        std::vector<PadicNumber> out;
        for (long k = lo; k <= hi; ++k) {
            PadicNumber t1 = (c1.coeff(k) == 0) ? PadicNumber::exact_zero(p) : xi1.scale(c1.coeff(k));
            PadicNumber t2 = (c2.coeff(k) == 0) ? PadicNumber::exact_zero(p) : xi2.scale(c2.coeff(k));
            out.push_back(t1 + t2);
        }
        return SeriesP::from_coeffs(Chart::lambda0, lo, std::move(out));
    };
    SeriesMatrixP T(assemble(carrier1[0], carrier2[0]), assemble(carrier1[1], carrier2[1]),
                    assemble(carrier1[2], carrier2[2]), assemble(carrier1[3], carrier2[3]));

    long certified = prec;
    for (const SeriesP* e : {&T.a, &T.b, &T.c, &T.d})
        for (long k = e->lo(); k <= e->hi(); ++k)
            if (!e->coeff(k).is_exact_zero()) certified = std::min(certified, e->coeff(k).abs_precision());
    return {std::move(T), mu, certified, std::move(xi1), std::move(xi2)};
}

/// Valuation-shape classification of T for mu in {0..p-1}^3: 1 when
/// mu_3 < min(mu_1, mu_2), 2 when mu_3 > max(mu_1, mu_2), 0 otherwise.
inline int splitting_case(const std::array<long, 3>& mu, long p) {
    for (long m : mu)
        if (m < 0 || m >= p) throw std::invalid_argument("mu component outside {0,...,p-1}");
    if (mu[2] < std::min(mu[0], mu[1])) return 1;
    if (mu[2] > std::max(mu[0], mu[1])) return 2;
    return 0;
}

/// Mod-p truncation F(lambda) of the hypergeometric series with parameters
/// read from mu: coefficients follow the one-step recurrence
///   c_{s+1} = c_s (A+s)(B+s) / ((C+s)(1+s)) mod p,  A = p - mu_1 (or 0), ...
/// and stop at the first vanishing factor. Degree is at most p-1.
inline std::vector<long> supersingular_poly(const std::array<long, 3>& mu, long p) {
    for (long m : mu)
        if (m < 0 || m >= p) throw std::invalid_argument("mu component outside {0,...,p-1}");
    auto bar = [&](long m) { return m >= 1 ? p - m : 0; };
    long A = bar(mu[0]), B = bar(mu[1]), C = bar(mu[2]);
    std::vector<long> f{1};
    Integer c(1);
    for (long s = 0; s < p - 1; ++s) {
        long n1 = (A + s) % p, n2 = (B + s) % p;
        long d1 = (C + s) % p, d2 = (1 + s) % p;
        if (n1 == 0 || n2 == 0 || d1 == 0 || d2 == 0) break;
        c = c * n1 * n2 % p * mod_inverse(Integer(d1) * d2 % p, p) % p;
        f.push_back(c.get_si());
    }
    return f;
}

/// First order where the Frobenius-contiguity compatibility
///   T(a,b) B(a,a+e_1)^t = B(b,b+v)^t(lambda^p) T(a+e_1, b+v)
/// fails beyond the certified precision, or M+1 when it holds throughout.
/// v must be 0 or e_1.
inline long contiguity_frobenius_compat_check(const Triple& a, const Triple& b, bool shift_b,
                                              long p, long M,
                                              long N = PadicNumber::kDefaultPrecision) {
    Triple a1{Rational(a.a1 + 1), a.a2, a.a3};
    Triple b1 = shift_b ? Triple{Rational(b.a1 + 1), b.a2, b.a3} : b;

    FrobeniusMatrix Ta = frobenius_matrix_series(a, b, p, M, N);
    FrobeniusMatrix Tn = frobenius_matrix_series(a1, b1, p, M, N);

    RationalFunctionMatrix bta = contiguity_b_e1(a);
    auto expand_emb = [&](const RationalFunction& f, bool dilate) {
        SeriesQ s = dilate ? f.expand(Chart::lambda0, M / p + 1).dilate(p).truncate(M)
                           : f.expand(Chart::lambda0, M);
        return embed_series(s, p, N + 2);
    };
    SeriesMatrixP Ba(expand_emb(bta[0][0], false), expand_emb(bta[0][1], false),
                     expand_emb(bta[1][0], false), expand_emb(bta[1][1], false));

    SeriesMatrixP lhs = Ta.T * Ba;
    SeriesMatrixP rhs = Tn.T;
    if (shift_b) {
        RationalFunctionMatrix btb = contiguity_b_e1(b);
        SeriesMatrixP Bb(expand_emb(btb[0][0], true), expand_emb(btb[0][1], true),
                         expand_emb(btb[1][0], true), expand_emb(btb[1][1], true));
        rhs = Bb * rhs;
    }

    SeriesMatrixP diff = lhs - rhs;
    long top = std::min({static_cast<long>(M), diff.a.hi(), diff.b.hi(), diff.c.hi(), diff.d.hi()});
    for (long k = std::min(diff.a.lo(), diff.c.lo()); k <= top; ++k)
        for (const SeriesP* e : {&diff.a, &diff.b, &diff.c, &diff.d})
            if (!e->coeff(k).is_zero()) return k;
    return top + 1;
}

}  // namespace phg
