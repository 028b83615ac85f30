/// @file kummer.hpp
/// @brief The three degree-one Kummer transformations that permute the
/// singular points, as checkable records.
///
/// Each record couples the solution basis at one singular point of the
/// system with parameters a to the basis at another singular point of the
/// system with mapped parameters M(a). The local variables agree as
/// functions of lambda, so the identity is an equality of power series
///   U_a^(from)(t) = Delta * U_{Ma}^(to)(t) * N^T
/// with a constant diagonal Delta that the checker solves for and returns
/// (the expected values are pinned in the tests). The h factors record the
/// scalar and lambda-power bookkeeping that relates the full l^D U objects;
/// the mu-form of h is the piece that enters Frobenius pullbacks.

#pragma once

#include <phg/hypergeo.hpp>

namespace phg {

struct KummerRecord {
    int m;                  // catalog label
    const char* theta;      // the Moebius substitution
    int from_z, to_z;       // singular-point indices (0, 1, 2=infinity)
    Rational N[2][2];
    const char* h_single;   // h_m(a; lambda)
    const char* h_pair;     // h_m(a, b; lambda)
};

inline const KummerRecord& kummer_record(int m) {
    static const KummerRecord r9{9,
                                 "1/lambda",
                                 2,
                                 0,
                                 {{Rational(1), Rational(0)}, {Rational(1), Rational(-1)}},
                                 "(-)^(a3-a1-a2) lambda^(-a1)",
                                 "(-)^(mu1+mu2-mu3) lambda^(-mu1)"};
    static const KummerRecord r5{5,
                                 "1-lambda",
                                 1,
                                 0,
                                 {{Rational(0), Rational(1)}, {Rational(1), Rational(0)}},
                                 "(-)^(a2)",
                                 "(-)^(-mu2)"};
    static const KummerRecord r11{11,
                                  "1/(1-lambda)",
                                  1,
                                  2,
                                  {{Rational(1), Rational(-1)}, {Rational(1), Rational(0)}},
                                  "(-)^(a3-a2) (1-lambda)^(-a1)",
                                  "(-)^(mu2-mu3) (1-lambda^p)^(b1) (1-lambda)^(-a1)"};
    switch (m) {
        case 9: return r9;
        case 5: return r5;
        case 11: return r11;
    }
    throw std::invalid_argument("no Kummer record with label " + std::to_string(m));
}

inline Triple kummer_map(int m, const Triple& t) {
    switch (m) {
        case 9: return {t.a1, Rational(t.a1 - t.a3), Rational(t.a1 - t.a2)};
        case 5: return {t.a1, t.a2, Rational(t.a1 + t.a2 - t.a3)};
        case 11: return {t.a1, Rational(t.a3 - t.a2), Rational(t.a1 - t.a2)};
    }
    throw std::invalid_argument("no Kummer record with label " + std::to_string(m));
}

/// Sign of h_m(a, b; lambda) given the mu vector of the pair.
inline int kummer_pair_sign(int m, const std::array<long, 3>& mu) {
    switch (m) {
        case 9: return sign_pow(mu[0] + mu[1] - mu[2]);
        case 5: return sign_pow(-mu[1]);
        case 11: return sign_pow(mu[1] - mu[2]);
    }
    throw std::invalid_argument("no Kummer record with label " + std::to_string(m));
}

struct KummerCheck {
    bool ok;
    Rational diag1, diag2;  // the solved left diagonal
};

/// Verify U_a^(from)(t) = Delta * U_{Ma}^(to)(t) * N^T through t^order and
/// report the diagonal.
inline KummerCheck check_kummer(const Triple& a, int m, long order) {
    const KummerRecord& rec = kummer_record(m);
    Triple b = kummer_map(m, a);
    LocalSolution lhs = u_matrix(a, rec.from_z, order + 1);
    LocalSolution rhs = u_matrix(b, rec.to_z, order + 1);

    // Right-multiply by N^T: U N^T = (N U^T)^T.
    SeriesMatrixQ mixed = rhs.U.transpose().left_mul_const(rec.N).transpose();
    mixed = SeriesMatrixQ(mixed.a.retag(lhs.chart), mixed.b.retag(lhs.chart),
                          mixed.c.retag(lhs.chart), mixed.d.retag(lhs.chart));

    auto solve_row = [&](const SeriesQ& l1, const SeriesQ& l2, const SeriesQ& r1,
                         const SeriesQ& r2) -> Rational {
        if (r1.coeff(0) != 0) return l1.coeff(0) / r1.coeff(0);
        if (r2.coeff(0) != 0) return l2.coeff(0) / r2.coeff(0);
        throw std::domain_error("degenerate constant row in Kummer check");
    };
    Rational d1 = solve_row(lhs.U.a, lhs.U.b, mixed.a, mixed.b);
    Rational d2 = solve_row(lhs.U.c, lhs.U.d, mixed.c, mixed.d);

    const Rational delta[2][2] = {{d1, Rational(0)}, {Rational(0), d2}};
    SeriesMatrixQ diff = lhs.U - mixed.left_mul_const(delta);
    bool ok = true;
    for (const SeriesQ* e : {&diff.a, &diff.b, &diff.c, &diff.d})
        for (long k = e->lo(); k <= std::min(e->hi(), order); ++k)
            if (e->coeff(k) != 0) ok = false;
    return {ok, d1, d2};
}

}  // namespace phg
