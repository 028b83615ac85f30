/// @file hypergeo.hpp
/// @brief The rank-two hypergeometric system: truncated 2F1 series, the
/// connection matrix G, Frobenius-basis solutions at the three singular
/// points, an ODE residual checker, and power-series solutions at ordinary
/// points.
///
/// Conventions. Row vectors: dY/dlambda = Y * G(lambda) with
///   G = [ -a3/lambda              (a3-a1)/(1-lambda)      ]
///       [ (a3-a2)/lambda          (a1+a2-a3)/(1-lambda)   ]
/// At each singular point z the solution matrix factors as l^D * U where
/// l is the local uniformizer (lambda, 1-lambda, 1/lambda), D is a constant
/// diagonal, and U is a matrix of power series with an invertible constant
/// term in the non-resonant case.

#pragma once

#include <phg/gamma.hpp>
#include <phg/series.hpp>

#include <array>
#include <sstream>

namespace phg {

struct Triple {
    Rational a1, a2, a3;

    bool operator==(const Triple& o) const { return a1 == o.a1 && a2 == o.a2 && a3 == o.a3; }
};

inline std::string to_string(const Triple& t) {
    std::ostringstream os;
    os << t.a1 << "," << t.a2 << "," << t.a3;
    return os.str();
}

inline Triple parse_triple(const std::string& text) {
    std::istringstream is(text);
    std::string part;
    std::array<Rational, 3> vals;
    for (int i = 0; i < 3; ++i) {
        if (!std::getline(is, part, ','))
            throw std::invalid_argument("triple needs three comma-separated rationals");
        vals[static_cast<size_t>(i)] = parse_rational(part);
    }
    if (std::getline(is, part, ','))
        throw std::invalid_argument("triple has trailing input");
    return {vals[0], vals[1], vals[2]};
}

inline bool in_zp(const Rational& x, long p) { return x == 0 || vp(x.get_den(), p) == 0; }

inline bool in_zp(const Triple& t, long p) {
    return in_zp(t.a1, p) && in_zp(t.a2, p) && in_zp(t.a3, p);
}

/// Elementwise prime map on a parameter triple.
struct TripleStep {
    Triple next;
    std::array<long, 3> mu;
};

inline TripleStep triple_step(const Triple& t, long p) {
    PrimeStep s1 = prime_step(t.a1, p);
    PrimeStep s2 = prime_step(t.a2, p);
    PrimeStep s3 = prime_step(t.a3, p);
    return {{s1.next, s2.next, s3.next}, {s1.mu, s2.mu, s3.mu}};
}

// ---------------------------------------------------------------------------
// Truncated Gauss series.

/// 2F1(a, b; c) as a series in the chart's local variable, up to t^hi.
/// Throws when c + k vanishes for some k < hi (a genuine pole of the
/// coefficient recurrence inside the truncation range).
inline SeriesQ hyper_series(const Rational& a, const Rational& b, const Rational& c, Chart chart,
                            long hi) {
    std::vector<Rational> coeffs;
    coeffs.reserve(static_cast<size_t>(hi) + 1);
    Rational cur(1);
    coeffs.push_back(cur);
    for (long k = 0; k < hi; ++k) {
        Rational denom = (c + k) * (1 + k);
        if (denom == 0)
            throw std::domain_error("hypergeometric lower parameter hit a nonpositive integer");
        cur *= (a + k) * (b + k) / denom;
        coeffs.push_back(cur);
    }
    return SeriesQ::from_coeffs(chart, 0, std::move(coeffs));
}

// ---------------------------------------------------------------------------
// The system matrix G.

struct SystemMatrix {
    RationalFunction g[2][2];
};

inline SystemMatrix system_matrix(const Triple& t) {
    SystemMatrix m;
    m.g[0][0] = RationalFunction::monomial(-t.a3, -1);
    m.g[0][1] = RationalFunction::over_one_minus(t.a3 - t.a1, 1);
    m.g[1][0] = RationalFunction::monomial(t.a3 - t.a2, -1);
    m.g[1][1] = RationalFunction::over_one_minus(t.a1 + t.a2 - t.a3, 1);
    return m;
}

// ---------------------------------------------------------------------------
// Local solutions at the singular points.

/// Chart of the singular point z in {0, 1, infinity}.
inline Chart chart_of_point(int z) {
    switch (z) {
        case 0: return Chart::lambda0;
        case 1: return Chart::one_minus;
        case 2: return Chart::reciprocal;
    }
    throw std::invalid_argument("singular point index must be 0, 1, or 2 (for infinity)");
}

/// Exponent diagonal D_z = diag(d1, d2) of the factor l^D.
inline std::pair<Rational, Rational> exponent_diagonal(const Triple& t, int z) {
    switch (z) {
        case 0: return {Rational(0), -t.a3};
        case 1: return {Rational(0), t.a3 - t.a1 - t.a2};
        case 2: return {t.a1, t.a2};
    }
    throw std::invalid_argument("singular point index must be 0, 1, or 2 (for infinity)");
}

/// True when the triple resonates at one of the singular points within the
/// truncation order M: one of a3, a3-a1-a2, a2-a1 is an integer of
/// magnitude <= M.
inline bool resonance_guard_rejects(const Triple& t, long M) {
    const std::array<Rational, 3> keys{t.a3, Rational(t.a3 - t.a1 - t.a2),
                                       Rational(t.a2 - t.a1)};
    for (const Rational& q : keys) {
        if (q.get_den() != 1) continue;
        Integer n = q.get_num() < 0 ? Integer(-q.get_num()) : q.get_num();
        if (n <= M) return true;
    }
    return false;
}

struct LocalSolution {
    SeriesMatrixQ U;   // series parts, rows scaled to the pinned constant term
    Rational d1, d2;   // the exponent diagonal
    Chart chart;
};

/// The 2x2 matrix U^(z) of series parts at the singular point z.
inline LocalSolution u_matrix(const Triple& t, int z, long hi) {
    Chart ch = chart_of_point(z);
    auto [d1, d2] = exponent_diagonal(t, z);
    const Rational &a1 = t.a1, &a2 = t.a2, &a3 = t.a3;
    switch (z) {
        case 0: {
            SeriesQ u1 = hyper_series(a1, a2, a3 + 1, ch, hi).scale(a3 - a2);
            SeriesQ u2 = hyper_series(a1, a2, a3, ch, hi).scale(a3);
            SeriesQ u3 = hyper_series(a2 - a3, a1 - a3, 1 - a3, ch, hi).scale(1 - a3);
            SeriesQ u4 = hyper_series(1 + a2 - a3, 1 + a1 - a3, 2 - a3, ch, hi - 1)
                             .scale(a3 - a1)
                             .shift(1);
            return {SeriesMatrixQ(u1, u2, u3, u4), d1, d2, ch};
        }
        case 1: {
            SeriesQ u1 = hyper_series(a1, a2, a1 + a2 - a3, ch, hi).scale(a1 + a2 - a3);
            SeriesQ u2 = hyper_series(a1, a2, a1 + a2 - a3 + 1, ch, hi).scale(a1 - a3);
            SeriesQ u3 = hyper_series(a3 - a1 + 1, a3 - a2 + 1, a3 - a1 - a2 + 2, ch, hi - 1)
                             .scale(a3 - a2)
                             .shift(1);
            SeriesQ u4 = hyper_series(a3 - a1, a3 - a2, a3 - a1 - a2 + 1, ch, hi)
                             .scale(a1 + a2 - a3 - 1);
            return {SeriesMatrixQ(u1, u2, u3, u4), d1, d2, ch};
        }
        case 2: {
            SeriesQ u1 = hyper_series(a1, a1 - a3, a1 - a2 + 1, ch, hi).scale(a3 - a2);
            SeriesQ u2 = hyper_series(a1, a1 - a3 + 1, a1 - a2 + 1, ch, hi).scale(a3 - a1);
            SeriesQ u3 = hyper_series(a2 - a3, a2, a2 - a1 + 1, ch, hi).scale(a2 - a1 + 1);
            SeriesQ u4 = hyper_series(a2 - a3 + 1, a2, a2 - a1 + 1, ch, hi).scale(a2 - a1 + 1);
            return {SeriesMatrixQ(u1, u2, u3, u4), d1, d2, ch};
        }
    }
    throw std::invalid_argument("singular point index must be 0, 1, or 2 (for infinity)");
}

/// Residual of l^D U against the system, poles cleared: exactly zero
/// through order M iff U solves the ODE there.
inline bool check_ode(const Triple& t, int z, long M) {
    LocalSolution L = u_matrix(t, z, M + 2);
    Chart ch = L.chart;
    SystemMatrix G = system_matrix(t);

    // Assemble the pole-cleared coefficient matrix H in the local variable:
    //   z=0:  D U + t U' - U H = 0 with H = lambda G
    //   z=1:  D U + t U' + U H = 0 with H = (1-lambda) G
    //   zoo:  D U + t U' + U H = 0 with H = G / t, t = 1/lambda
    auto expand_h = [&](int i, int j) -> SeriesQ {
        switch (z) {
            case 0:
                return (RationalFunction::monomial(Rational(1), 1) * G.g[i][j]).expand(ch, M + 1);
            case 1:
                return (RationalFunction({Rational(1), Rational(-1)}, {Rational(1)}) * G.g[i][j])
                    .expand(ch, M + 1);
            default:
                return G.g[i][j].expand(ch, M + 2).shift(-1);
        }
    };
    SeriesMatrixQ H(expand_h(0, 0), expand_h(0, 1), expand_h(1, 0), expand_h(1, 1));
    if (z != 0) H = H.scale(Rational(-1));

    const Rational diag[2][2] = {{L.d1, Rational(0)}, {Rational(0), L.d2}};
    SeriesMatrixQ DU = L.U.left_mul_const(diag);
    SeriesMatrixQ tUd(L.U.a.derivative().shift(1), L.U.b.derivative().shift(1),
                      L.U.c.derivative().shift(1), L.U.d.derivative().shift(1));
    SeriesMatrixQ R = DU + tUd - L.U * H;

    for (const SeriesQ* e : {&R.a, &R.b, &R.c, &R.d}) {
        long top = std::min(e->hi(), M);
        for (long k = e->lo(); k <= top; ++k)
            if (e->coeff(k) != 0) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Ordinary points.

/// P(z0 + s) as a polynomial in s.
inline PolyQ poly_shift(const PolyQ& f, const Rational& z0) {
    PolyQ acc, power{Rational(1)};
    const PolyQ shift{z0, Rational(1)};
    for (size_t i = 0; i < f.size(); ++i) {
        acc = poly_add(std::move(acc), poly_scale(power, f[i]));
        if (i + 1 < f.size()) power = poly_mul(power, shift);
    }
    return acc;
}

/// Expansion of a rational function at lambda = z0 + s, up to s^hi.
inline SeriesQ expand_at(const RationalFunction& f, const Rational& z0, long hi) {
    return laurent_divide(poly_shift(f.num, z0), poly_shift(f.den, z0), Chart::lambda0, hi);
}

/// Fundamental solution C(lambda, z0) = I + O(s) at an ordinary point z0
/// (z0 not 0 or 1), as series in s = lambda - z0 tagged with the lambda0
/// chart: (k+1) Y_{k+1} = sum_{j<=k} Y_j G_{k-j}.
inline SeriesMatrixQ local_solution_at_ordinary(const Triple& t, const Rational& z0, long hi) {
    if (z0 == 0 || z0 == 1)
        throw std::invalid_argument("expansion point must be ordinary (not 0 or 1)");
    SystemMatrix G = system_matrix(t);
    std::array<std::array<SeriesQ, 2>, 2> g{
        {{expand_at(G.g[0][0], z0, hi), expand_at(G.g[0][1], z0, hi)},
         {expand_at(G.g[1][0], z0, hi), expand_at(G.g[1][1], z0, hi)}}};

    // Y[k][i][j]: coefficient matrices of the solution.
    std::vector<std::array<std::array<Rational, 2>, 2>> Y(static_cast<size_t>(hi) + 1);
    Y[0] = {{{Rational(1), Rational(0)}, {Rational(0), Rational(1)}}};
    for (long k = 0; k < hi; ++k) {
        std::array<std::array<Rational, 2>, 2> next{};
        for (long j = 0; j <= k; ++j)
            for (int r = 0; r < 2; ++r)
                for (int m = 0; m < 2; ++m)
                    for (int c = 0; c < 2; ++c)
                        next[static_cast<size_t>(r)][static_cast<size_t>(c)] +=
                            Y[static_cast<size_t>(j)][static_cast<size_t>(r)][static_cast<size_t>(m)] *
                            g[static_cast<size_t>(m)][static_cast<size_t>(c)].coeff(k - j);
        for (auto& row : next)
            for (auto& v : row) v /= k + 1;
        Y[static_cast<size_t>(k + 1)] = next;
    }

    auto entry = [&](int r, int c) {
        std::vector<Rational> coeffs(static_cast<size_t>(hi) + 1);
        for (long k = 0; k <= hi; ++k)
            coeffs[static_cast<size_t>(k)] =
                Y[static_cast<size_t>(k)][static_cast<size_t>(r)][static_cast<size_t>(c)];
        return SeriesQ::from_coeffs(Chart::lambda0, 0, std::move(coeffs));
    };
    return SeriesMatrixQ(entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1));
}

}  // namespace phg
