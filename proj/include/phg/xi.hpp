/// @file xi.hpp
/// @brief Frobenius eigenvalues xi_j^(z) at the three singular points, as
/// products of gamma symbols.
///
/// A parameter pair (a, b) with p*b_i - a_i = mu_i in Z feeds every formula;
/// b is usually the prime-map image of a (then mu_i is the residue digit),
/// but any integral shift is accepted. Two independent routes are exposed
/// for z = 1 and z = infinity: the direct gamma-product closed form, and
/// the pullback through the Kummer map to z = 0 paid for with the h-sign.
/// They must agree; the test suites verify this at scale.

#pragma once

#include <phg/kummer.hpp>

namespace phg {

/// The integer vector mu_i = p*b_i - a_i; throws unless all are integers.
inline std::array<long, 3> pair_mus(const Triple& a, const Triple& b, long p) {
    std::array<long, 3> mu{};
    const Rational* as[3] = {&a.a1, &a.a2, &a.a3};
    const Rational* bs[3] = {&b.a1, &b.a2, &b.a3};
    for (int i = 0; i < 3; ++i) {
        Rational m = Rational(p) * *bs[i] - *as[i];
        if (m.get_den() != 1 || !m.get_num().fits_slong_p())
            throw std::invalid_argument("parameter pair needs p*b - a integral and small");
        mu[static_cast<size_t>(i)] = m.get_num().get_si();
    }
    return mu;
}

/// Closed form for xi_j^(z)(a, b), j in {1, 2}, z in {0, 1, 2=infinity}.
inline PiElement xi_closed_form(const Triple& a, const Triple& b, int z, int j, long p,
                                long P = PadicNumber::kDefaultPrecision) {
    auto mu = pair_mus(a, b, p);
    auto g = [&](const Rational& xa, const Rational& xb) { return gamma_pi(xa, xb, p, P); };
    const Rational &a1 = a.a1, &a2 = a.a2, &a3 = a.a3;
    const Rational &b1 = b.a1, &b2 = b.a2, &b3 = b.a3;

    if (z == 0 && j == 1)
        return (g(a2, b2) * g(a3 - a2, b3 - b2) / g(a3 + 1, b3 + 1));
    if (z == 0 && j == 2)
        return (g(a3 - 1, b3 - 1) * g(1 - a1, 1 - b1) / g(a3 - a1 + 1, b3 - b1 + 1))
            .scale(sign_pow(mu[1] - mu[2]));
    if (z == 1 && j == 1)
        return (g(a2, b2) * g(a1 - a3, b1 - b3) / g(a1 + a2 - a3 + 1, b1 + b2 - b3 + 1))
            .scale(sign_pow(mu[1]));
    if (z == 1 && j == 2)
        return (g(a1 + a2 - a3 - 1, b1 + b2 - b3 - 1) * g(a3 - a2, b3 - b2) / g(a1, b1));
    if (z == 2 && j == 1)
        return (g(a3 - a2, b3 - b2) * g(a1 - a3, b1 - b3) / g(a1 - a2 + 1, b1 - b2 + 1))
            .scale(sign_pow(mu[0] + mu[1] + mu[2]));
    if (z == 2 && j == 2)
        return (g(a1 - a2 - 1, b1 - b2 - 1) * g(a2, b2) / g(a1, b1)).scale(sign_pow(mu[1]));
    throw std::invalid_argument("xi wants z in {0,1,2} and j in {1,2}");
}

/// Alternate expression for xi_2^(0); equal to the primary one through the
/// symplectic relation, kept as an independent cross-check.
inline PiElement xi2_lambda0_variant(const Triple& a, const Triple& b, long p,
                                     long P = PadicNumber::kDefaultPrecision) {
    auto mu = pair_mus(a, b, p);
    auto g = [&](const Rational& xa, const Rational& xb) { return gamma_pi(xa, xb, p, P); };
    return (g(a.a1 - a.a3, b.a1 - b.a3) * g(a.a3 - 1, b.a3 - 1) / g(a.a1, b.a1))
        .scale(sign_pow(mu[1]));
}

/// xi_j at z = 1 or z = infinity through the Kummer pullback to z = 0.
inline PiElement xi_via_pullback(const Triple& a, const Triple& b, int z, int j, long p,
                                 long P = PadicNumber::kDefaultPrecision) {
    auto mu = pair_mus(a, b, p);
    int m;
    switch (z) {
        case 1: m = 5; break;
        case 2: m = 9; break;
        default: throw std::invalid_argument("pullback applies at z = 1 or z = infinity");
    }
    Triple ma = kummer_map(m, a);
    Triple mb = kummer_map(m, b);
    int sign = kummer_pair_sign(m, mu);
    return xi_closed_form(ma, mb, 0, j, p, P).scale(sign);
}

}  // namespace phg
