/// @file contiguity.hpp
/// @brief Contiguity data for the local solution bases: the alpha scalars,
/// their classical-Gamma generating ratios, and the base-change matrices B.
///
/// Shifting a parameter triple by a standard basis vector e_k rescales the
/// local solutions by a rational alpha and conjugates the basis by a matrix
/// B(a, a+e_k; lambda) of low-degree rational functions:
///   U_{a+u}^(z)(t) = diag(alpha_1, alpha_2) * l_z^{-D_z(u)} * U_a^(z)(t) * B^t.
/// The alpha table for all three points and all three shifts is pinned here
/// verbatim; each entry is the ratio phi(a+e_k)/phi(a) of a fixed product of
/// classical Gamma values, which reduces to a rational number through
/// Gamma(x+1) = x Gamma(x) alone. B is pinned for e_1 and derived for the
/// other shifts by solving the display above as truncated series and
/// recognizing the entries as rational functions.

#pragma once

#include <phg/xi.hpp>

#include <optional>

namespace phg {

/// Table value alpha_i^(z)(a, e_k); z in {0, 1, 2=infinity}, i in {1, 2},
/// k in {1, 2, 3}. Throws on a pole of the entry.
inline Rational alpha(int z, int i, const Triple& a, int k) {
    if (z < 0 || z > 2 || i < 1 || i > 2 || k < 1 || k > 3)
        throw std::invalid_argument("alpha wants z in {0,1,2}, i in {1,2}, k in {1,2,3}");
    const Rational &x = a.a1, &y = a.a2, &w = a.a3;
    auto frac = [](const Rational& n, const Rational& d) {
        if (d == 0) throw std::domain_error("alpha table entry has a pole at this triple");
        return Rational(n / d);
    };
    switch (z * 100 + i * 10 + k) {
        case 11: return Rational(1);
        case 12: return frac(w - y - 1, y);
        case 13: return frac(w + 1, w - y);
        case 21: return frac(x, x - w);
        case 22: return Rational(-1);
        case 23: return frac(x - w - 1, w - 1);
        case 111: return frac(x + y - w + 1, x - w);
        case 112: return frac(w - x - y - 1, y);
        case 113: return frac(x - w - 1, x + y - w);
        case 121: return frac(x, x + y - w - 1);
        case 122: return frac(y - w + 1, w - x - y + 1);
        case 123: return frac(x + y - w - 2, w - y);
        case 211: return frac(x - y + 1, w - x);
        case 212: return frac(w - y - 1, y - x);
        case 213: return frac(w - x + 1, w - y);
        case 221: return frac(x, x - y - 1);
        case 222: return frac(y - x + 2, y);
        case 223: return Rational(1);
    }
    throw std::logic_error("unreachable alpha case");
}

// ---------------------------------------------------------------------------
// The classical-Gamma products phi_i^(z) behind the alpha table.

/// A Gamma argument c1*a1 + c2*a2 + c3*a3 + k with integer variable
/// coefficients, so any integer parameter shift moves it by an integer.
struct GammaArg {
    long c[3];
    Rational k;

    Rational at(const Triple& a) const {
        return Rational(c[0] * a.a1 + c[1] * a.a2 + c[2] * a.a3 + k);
    }
    long shift_by(const std::array<long, 3>& delta) const {
        return c[0] * delta[0] + c[1] * delta[1] + c[2] * delta[2];
    }
};

/// phi = (-)^(s . a) * Gamma(num) / (Gamma(den[0]) Gamma(den[1])); only
/// integer differences of the formal sign exponent are ever evaluated.
struct PhiRecord {
    long sign[3];
    GammaArg num;
    GammaArg den[2];
};

inline const PhiRecord& phi_record(int z, int i) {
    static const PhiRecord table[3][2] = {
        {{{0, 0, 0}, {{0, 0, 1}, Rational(1)}, {{{0, 1, 0}, Rational(0)}, {{0, -1, 1}, Rational(0)}}},
         {{0, 1, 0}, {{1, 0, 0}, Rational(0)}, {{{1, 0, -1}, Rational(0)}, {{0, 0, 1}, Rational(-1)}}}},
        {{{0, 1, 0}, {{1, 1, -1}, Rational(1)}, {{{0, 1, 0}, Rational(0)}, {{1, 0, -1}, Rational(0)}}},
         {{0, 0, 0}, {{1, 0, 0}, Rational(0)}, {{{1, 1, -1}, Rational(-1)}, {{0, -1, 1}, Rational(0)}}}},
        {{{1, 1, 1}, {{1, -1, 0}, Rational(1)}, {{{0, -1, 1}, Rational(0)}, {{1, 0, -1}, Rational(0)}}},
         {{0, 1, 0}, {{1, 0, 0}, Rational(0)}, {{{1, -1, 0}, Rational(-1)}, {{0, 1, 0}, Rational(0)}}}}};
    if (z < 0 || z > 2 || i < 1 || i > 2)
        throw std::invalid_argument("phi_record wants z in {0,1,2} and i in {1,2}");
    return table[z][i - 1];
}

/// phi_i^(z)(a + delta) / phi_i^(z)(a) as an exact rational, reduced through
/// Gamma(x+1) = x Gamma(x). Throws when a denominator Gamma ratio vanishes.
inline Rational phi_ratio(int z, int i, const Triple& a, const std::array<long, 3>& delta) {
    const PhiRecord& rec = phi_record(z, i);
    auto gamma_shift_ratio = [&](const GammaArg& g) {
        // Gamma(x + m) / Gamma(x) for x = g(a), m the induced integer shift.
        long m = g.shift_by(delta);
        if (m >= 0) return pochhammer(g.at(a), m);
        Rational q = pochhammer(g.at(a) + m, -m);
        if (q == 0) throw std::domain_error("Gamma ratio pole in phi");
        return Rational(1 / q);
    };
    long sdiff = rec.sign[0] * delta[0] + rec.sign[1] * delta[1] + rec.sign[2] * delta[2];
    Rational r = gamma_shift_ratio(rec.num) * sign_pow(sdiff);
    for (const GammaArg& g : rec.den) {
        Rational q = gamma_shift_ratio(g);
        if (q == 0) throw std::domain_error("Gamma ratio pole in phi");
        r /= q;
    }
    return r;
}

/// Table alpha extended to arbitrary integer shifts by the cocycle rule
/// alpha(a, u + v) = alpha(a + u, v) * alpha(a, u), one unit step at a time.
inline Rational alpha_extended(int z, int i, Triple a, std::array<long, 3> u) {
    auto bump = [](Triple& t, int k, int dir) {
        if (k == 0) t.a1 += dir;
        if (k == 1) t.a2 += dir;
        if (k == 2) t.a3 += dir;
    };
    Rational acc(1);
    for (int k = 0; k < 3; ++k) {
        while (u[k] > 0) {
            acc *= alpha(z, i, a, k + 1);
            bump(a, k, +1);
            --u[k];
        }
        while (u[k] < 0) {
            bump(a, k, -1);
            Rational step = alpha(z, i, a, k + 1);
            if (step == 0) throw std::domain_error("alpha step vanishes; shift not invertible");
            acc /= step;
            ++u[k];
        }
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Base-change matrices.

using RationalFunctionMatrix = std::array<std::array<RationalFunction, 2>, 2>;

/// B(a, a+e_1; lambda)^t, pinned:
///   (1/a1) [[a1-a3, (a1-a3) lambda/(lambda-1)], [a3-a2, (a1-lambda(a3-a2))/(1-lambda)]].
inline RationalFunctionMatrix contiguity_b_e1(const Triple& a) {
    if (a.a1 == 0) throw std::domain_error("B(a, a+e_1) needs a1 nonzero");
    Rational inv_a1 = 1 / a.a1;
    auto sc = [&](RationalFunction f) { return f * RationalFunction::constant(inv_a1); };
    RationalFunctionMatrix b;
    b[0][0] = sc(RationalFunction::constant(Rational(a.a1 - a.a3)));
    b[0][1] = sc(RationalFunction::monomial(Rational(a.a3 - a.a1), 1) *
                 RationalFunction::over_one_minus(Rational(1), 1));
    b[1][0] = sc(RationalFunction::constant(Rational(a.a3 - a.a2)));
    b[1][1] = sc((RationalFunction::constant(a.a1) +
                  RationalFunction::monomial(Rational(a.a2 - a.a3), 1)) *
                 RationalFunction::over_one_minus(Rational(1), 1));
    return b;
}

/// Change of the exponent diagonal D_z under the shift e_k, as two integers.
inline std::array<long, 2> exponent_shift(int z, int k) {
    // D_0 = diag(0, -a3); D_1 = diag(0, a3-a1-a2); D_inf = diag(a1, a2).
    switch (z * 10 + k) {
        case 1: case 2: return {0, 0};
        case 3: return {0, -1};
        case 11: case 12: return {0, -1};
        case 13: return {0, 1};
        case 21: return {1, 0};
        case 22: return {0, 1};
        case 23: return {0, 0};
    }
    throw std::invalid_argument("exponent_shift wants z in {0,1,2} and k in {1,2,3}");
}

/// Solve the contiguity display for B^t as a truncated series matrix:
///   B^t = U_a^{-1} * l^{D_z(e_k)} * diag(alpha)^{-1} * U_{a+e_k}.
inline SeriesMatrixQ derive_b_series(const Triple& a, int k, int z, long order) {
    Triple shifted = a;
    if (k == 1) shifted.a1 += 1;
    if (k == 2) shifted.a2 += 1;
    if (k == 3) shifted.a3 += 1;
    Rational a1 = alpha(z, 1, a, k);
    Rational a2 = alpha(z, 2, a, k);
    if (a1 == 0 || a2 == 0) throw std::domain_error("alpha vanishes; B is singular here");

    LocalSolution base = u_matrix(a, z, order);
    LocalSolution next = u_matrix(shifted, z, order);
    SeriesMatrixQ m = next.U;
    m = SeriesMatrixQ(m.a.scale(1 / a1), m.b.scale(1 / a1), m.c.scale(1 / a2), m.d.scale(1 / a2));
    std::array<long, 2> d = exponent_shift(z, k);
    m = SeriesMatrixQ(m.a.shift(d[0]), m.b.shift(d[0]), m.c.shift(d[1]), m.d.shift(d[1]));
    return base.U.inverse() * m;
}

namespace detail {

/// Exact solve of a square rational linear system by Gaussian elimination;
/// nullopt when singular.
inline std::optional<std::vector<Rational>> solve_linear(std::vector<std::vector<Rational>> m,
                                                         std::vector<Rational> rhs) {
    size_t n = rhs.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(m[piv], m[col]);
        std::swap(rhs[piv], rhs[col]);
        for (size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col] == 0) continue;
            Rational f = m[r][col] / m[col][col];
            for (size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<Rational> x(n);
    for (size_t i = 0; i < n; ++i) x[i] = rhs[i] / m[i][i];
    return x;
}

}  // namespace detail

/// Recognize a truncated series as num/den of degree at most (dnum, dden) in
/// the chart variable; every available coefficient is checked, and nullopt is
/// returned when no such rational function fits.
inline std::optional<RationalFunction> pade_reconstruct(const SeriesQ& f, long dnum, long dden) {
    long lo = f.lo();
    while (lo <= f.hi() && f.coeff(lo) == 0) ++lo;
    if (lo > f.hi()) return RationalFunction();
    long len = f.hi() - lo + 1;
    auto g = [&](long k) { return (k < 0 || k >= len) ? Rational(0) : Rational(f.coeff(lo + k)); };
    if (len < dnum + dden + 2) return std::nullopt;  // nothing left to verify

    for (long dd = 0; dd <= dden; ++dd) {
        // Denominator 1 + d_1 t + ... + d_dd t^dd from the window past dnum.
        std::vector<std::vector<Rational>> m(static_cast<size_t>(dd),
                                             std::vector<Rational>(static_cast<size_t>(dd)));
        std::vector<Rational> rhs(static_cast<size_t>(dd));
        for (long r = 0; r < dd; ++r) {
            long k = dnum + 1 + r;
            for (long j = 1; j <= dd; ++j) m[static_cast<size_t>(r)][static_cast<size_t>(j - 1)] = g(k - j);
            rhs[static_cast<size_t>(r)] = -g(k);
        }
        std::vector<Rational> den{Rational(1)};
        if (dd > 0) {
            auto sol = detail::solve_linear(std::move(m), std::move(rhs));
            if (!sol) continue;
            for (auto& c : *sol) den.push_back(c);
        }
        PolyQ num;
        bool fits = true;
        for (long k = 0; k < len; ++k) {
            Rational acc(0);
            for (long j = 0; j <= dd && j <= k; ++j) acc += den[static_cast<size_t>(j)] * g(k - j);
            if (k <= dnum) {
                num.push_back(acc);
            } else if (acc != 0) {
                fits = false;
                break;
            }
        }
        if (!fits) continue;
        RationalFunction rf(std::move(num), std::move(den));
        return rf * RationalFunction::monomial(Rational(1), lo);
    }
    return std::nullopt;
}

struct DerivedB {
    bool reconstructed;          // all four entries recognized
    RationalFunctionMatrix rf;   // valid when reconstructed
    SeriesMatrixQ series;        // the solve, always present
};

/// Derive B(a, a+e_k)^t at the point z and recognize the entries as rational
/// functions of the chart variable with degrees at most 2.
inline DerivedB derive_B(const Triple& a, int k, int z, long order) {
    SeriesMatrixQ s = derive_b_series(a, k, z, order);
    DerivedB out{true, {}, s};
    const SeriesQ* entries[2][2] = {{&s.a, &s.b}, {&s.c, &s.d}};
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            auto rf = pade_reconstruct(*entries[r][c], 2, 2);
            if (!rf) {
                out.reconstructed = false;
                return out;
            }
            out.rf[static_cast<size_t>(r)][static_cast<size_t>(c)] = std::move(*rf);
        }
    return out;
}

/// Agreement precision of the modular relation
///   xi_i^(z)(a+u, b+v) * alpha_i^(z)(a, u) = xi_i^(z)(a, b) * alpha_i^(z)(b, v).
inline long xi_modular_check(int z, int i, const Triple& a, const Triple& b,
                             const std::array<long, 3>& u, const std::array<long, 3>& v, long p,
                             long N = PadicNumber::kDefaultPrecision) {
    Rational au = alpha_extended(z, i, a, u);
    Rational bv = alpha_extended(z, i, b, v);
    if (au == 0 || bv == 0) throw std::domain_error("alpha vanishes; modular check undefined");
    Triple a2{Rational(a.a1 + u[0]), Rational(a.a2 + u[1]), Rational(a.a3 + u[2])};
    Triple b2{Rational(b.a1 + v[0]), Rational(b.a2 + v[1]), Rational(b.a3 + v[2])};
    PiElement lhs = xi_closed_form(a2, b2, z, i, p, N).scale(au);
    PiElement rhs = xi_closed_form(a, b, z, i, p, N).scale(bv);
    return agreement_exponent(lhs, rhs);
}

}  // namespace phg
