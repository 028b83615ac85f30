#pragma once

// Dwork's unit-root ratio F(lambda) = F(a; lambda) / F(a'; lambda^p) as an
// exact rational certificate, the special-value laws it satisfies at
// lambda = 1 and lambda = -1, the bounded-solution class eta at the singular
// points, and the fixed-point iteration that recovers the unit root of the
// Frobenius action.

#include <algorithm>
#include <array>
#include <climits>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <phg/frobmatrix.hpp>

namespace phg {

// ---------------------------------------------------------------------------
// Orbits of the prime map on parameter triples and pairs.

struct TripleOrbit {
    std::vector<Triple> points;
    std::vector<std::array<long, 3>> mus;
    long preperiod = 0;
    long period = 0;

    long length() const { return static_cast<long>(points.size()); }
};

inline TripleOrbit triple_orbit(const Triple& t, long p, long f_max = 64) {
    require_odd_prime(p);
    if (!in_zp(t, p)) throw std::invalid_argument("parameters must be p-adic integers");
    TripleOrbit orb;
    Triple cur = t;
    while (static_cast<long>(orb.points.size()) <= f_max) {
        for (size_t i = 0; i < orb.points.size(); ++i) {
            if (orb.points[i] == cur) {
                orb.preperiod = static_cast<long>(i);
                orb.period = static_cast<long>(orb.points.size()) - orb.preperiod;
                return orb;
            }
        }
        TripleStep st = triple_step(cur, p);
        orb.points.push_back(cur);
        orb.mus.push_back(st.mu);
        cur = st.next;
    }
    throw std::domain_error("parameter orbit did not close within the step budget");
}

namespace detail {

struct PairOrbit {
    std::vector<std::array<Rational, 2>> points;
    std::vector<std::array<long, 2>> mus;
    long preperiod = 0;
    long period = 0;
};

inline PairOrbit pair_orbit(const Rational& a, const Rational& b, long p, long f_max) {
    require_odd_prime(p);
    if (!in_zp(a, p) || !in_zp(b, p))
        throw std::invalid_argument("parameters must be p-adic integers");
    PairOrbit orb;
    std::array<Rational, 2> cur{a, b};
    while (static_cast<long>(orb.points.size()) <= f_max) {
        for (size_t i = 0; i < orb.points.size(); ++i) {
            if (orb.points[i][0] == cur[0] && orb.points[i][1] == cur[1]) {
                orb.preperiod = static_cast<long>(i);
                orb.period = static_cast<long>(orb.points.size()) - orb.preperiod;
                return orb;
            }
        }
        PrimeStep sa = prime_step(cur[0], p);
        PrimeStep sb = prime_step(cur[1], p);
        orb.points.push_back(cur);
        orb.mus.push_back({sa.mu, sb.mu});
        cur = {sa.next, sb.next};
    }
    throw std::domain_error("parameter orbit did not close within the step budget");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Exact partial sums of 2F1 by binary splitting.

namespace detail {

/// Integer data of the term ratio t_{j+1}/t_j = A(j)/B(j) for
/// F(a1, a2; a3; z):  A(j) = (pa + j qa)(pb + j qb) qc lu,
///                    B(j) = qa qb (pc + j qc)(j + 1) lv.
struct TermRatio {
    Integer pa, qa, pb, qb, pc, qc, lu, lv;
};

struct SplitPQR {
    Integer P, Q, R;
};

inline SplitPQR split_range(const TermRatio& r, long lo, long hi) {
    if (hi - lo == 1) {
        Integer A = (r.pa + lo * r.qa) * (r.pb + lo * r.qb) * r.qc * r.lu;
        Integer B = r.qa * r.qb * (r.pc + lo * r.qc) * (lo + 1) * r.lv;
        return {A, B, A};
    }
    long mid = lo + (hi - lo) / 2;
    SplitPQR left = split_range(r, lo, mid);
    SplitPQR right = split_range(r, mid, hi);
    return {left.P * right.Q + left.R * right.P, left.Q * right.Q, left.R * right.R};
}

}  // namespace detail

/// Partial sums of F(a1, a2; a3; lambda0) over the term ranges j < cut, one
/// per entry of cuts (positive, nondecreasing). Exact rationals.
inline std::vector<Rational> hyper_partial_sums(const Triple& t, const Rational& lambda0,
                                                const std::vector<long>& cuts) {
    if (cuts.empty()) return {};
    for (size_t i = 0; i < cuts.size(); ++i)
        if (cuts[i] < 1 || (i > 0 && cuts[i] < cuts[i - 1]))
            throw std::invalid_argument("cuts must be positive and nondecreasing");

    detail::TermRatio r{t.a1.get_num(), t.a1.get_den(), t.a2.get_num(), t.a2.get_den(),
                        t.a3.get_num(), t.a3.get_den(), lambda0.get_num(), lambda0.get_den()};
    long top = cuts.back();
    if (r.qc == 1 && r.pc <= 0 && -r.pc <= top - 2)
        throw std::domain_error("hypergeometric lower parameter hit a nonpositive integer");

    std::vector<Rational> sums;
    Integer P = 0, Q = 1, R = 1;
    long covered = 0;
    for (long cut : cuts) {
        long need = cut - 1;
        if (need > covered) {
            detail::SplitPQR ext = detail::split_range(r, covered, need);
            Integer grown = P * ext.Q + R * ext.P;
            P = grown;
            Q *= ext.Q;
            R *= ext.R;
            covered = need;
        }
        Rational s(Integer(P + Q), Q);
        s.canonicalize();
        sums.push_back(s);
    }
    return sums;
}

// ---------------------------------------------------------------------------
// The unit-root ratio with a precision certificate.

struct RatioCertificate {
    long p;
    Rational lambda0;
    std::vector<long> level_s;           // s = 1, ..., s_max
    std::vector<Rational> level_values;  // exact R_s = F_{<p^s}(a; x) / F_{<p^{s-1}}(a'; x^p)
    std::vector<PadicNumber> levels;     // the same, embedded at precision N
    std::vector<long> agreements;        // v_p(R_{s+1} - R_s), clamped to [0, N]
    long agreement_exponent;             // certified congruence exponent
    PadicNumber certified_value;         // R_{s_max} at the certified precision
};

/// Dwork's ratio F(a; lambda0) / F(a'; lambda0^p) evaluated through the
/// truncation levels p^1, ..., p^s_max. The levels stabilize p-adically and
/// the certificate records how fast.
inline RatioCertificate dwork_ratio(const Triple& a, const Rational& lambda0, long p,
                                    long s_max = 4, long N = 6) {
    require_odd_prime(p);
    if (s_max < 1) throw std::invalid_argument("at least one truncation level is needed");
    if (N < 1) throw std::invalid_argument("precision must be positive");
    if (!in_zp(a, p)) throw std::invalid_argument("parameters must be p-adic integers");
    if (!in_zp(lambda0, p)) throw std::invalid_argument("sample point must be a p-adic integer");
    if (std::pow(static_cast<double>(p), static_cast<double>(s_max)) > 5.0e6)
        throw std::domain_error("p^s_max exceeds the partial-sum budget");

    Triple next = triple_step(a, p).next;

    std::vector<long> num_cuts, den_cuts;
    long ps = 1;
    for (long s = 0; s < s_max; ++s) {
        den_cuts.push_back(ps);
        ps *= p;
        num_cuts.push_back(ps);
    }

    Rational lam_p;
    {
        Integer nup, dep;
        mpz_pow_ui(nup.get_mpz_t(), Integer(lambda0.get_num()).get_mpz_t(),
                   static_cast<unsigned long>(p));
        mpz_pow_ui(dep.get_mpz_t(), Integer(lambda0.get_den()).get_mpz_t(),
                   static_cast<unsigned long>(p));
        lam_p = Rational(nup, dep);
        lam_p.canonicalize();
    }

    std::vector<Rational> nums = hyper_partial_sums(a, lambda0, num_cuts);
    std::vector<Rational> dens = hyper_partial_sums(next, lam_p, den_cuts);

    std::vector<long> level_s;
    std::vector<Rational> values;
    std::vector<PadicNumber> levels;
    for (long s = 0; s < s_max; ++s) {
        if (dens[static_cast<size_t>(s)] == 0)
            throw std::domain_error("denominator partial sum vanished at the sample point");
        level_s.push_back(s + 1);
        values.push_back(Rational(nums[static_cast<size_t>(s)] / dens[static_cast<size_t>(s)]));
        levels.push_back(PadicNumber::from_rational(values.back(), p, N));
    }

    std::vector<long> agreements;
    for (size_t s = 0; s + 1 < values.size(); ++s) {
        Rational diff(values[s + 1] - values[s]);
        if (diff == 0)
            agreements.push_back(N);
        else
            agreements.push_back(std::clamp(vp(diff, p), 0L, N));
    }

    // The congruence pattern v_p(R_{s+1} - R_s) >= s certifies R_{s_max} to
    // s_max digits; an observed last-step agreement beyond that extends the
    // window. A level pair below the pattern floor caps the claim instead.
    long exponent = 0;
    if (!agreements.empty()) {
        bool floor_holds = true;
        for (size_t i = 0; i < agreements.size(); ++i)
            floor_holds = floor_holds && agreements[i] >= static_cast<long>(i) + 1;
        if (floor_holds)
            exponent = std::min(N, std::max(s_max, agreements.back()));
        else
            exponent = *std::min_element(agreements.begin(), agreements.end());
    }

    long cert_prec = exponent >= 1 ? exponent : N;
    PadicNumber certified = PadicNumber::from_rational(values.back(), p, cert_prec);
    return RatioCertificate{p,      lambda0,    std::move(level_s), std::move(values),
                            levels, agreements, exponent,           certified};
}

// ---------------------------------------------------------------------------
// Orbit-wide digit conditions for the special-value laws.

struct ConditionReport {
    bool pass = true;
    long failing_index = -1;
    std::string reason;
    long preperiod = 0;
    long period = 0;
};

/// Strict regime: every orbit step has both upper digits positive and the
/// lower digit strictly above their sum.
inline ConditionReport kd_conditions_modified(const Triple& t, long p, long f_max = 64) {
    TripleOrbit orb = triple_orbit(t, p, f_max);
    ConditionReport rep;
    rep.preperiod = orb.preperiod;
    rep.period = orb.period;
    for (size_t i = 0; i < orb.mus.size(); ++i) {
        long m1 = orb.mus[i][0], m2 = orb.mus[i][1], m3 = orb.mus[i][2];
        if (std::min(m1, m2) <= 0) {
            rep.pass = false;
            rep.failing_index = static_cast<long>(i);
            rep.reason = "an upper-parameter digit vanishes at orbit step " + std::to_string(i);
            return rep;
        }
        if (m3 <= m1 + m2) {
            rep.pass = false;
            rep.failing_index = static_cast<long>(i);
            rep.reason = "the lower digit does not exceed the upper digit sum at orbit step " +
                         std::to_string(i);
            return rep;
        }
    }
    return rep;
}

/// Weak regime: the lower parameter stays a unit and its digit is at least
/// the upper digit sum at every orbit step.
inline ConditionReport kd_conditions_intro(const Triple& t, long p, long f_max = 64) {
    TripleOrbit orb = triple_orbit(t, p, f_max);
    ConditionReport rep;
    rep.preperiod = orb.preperiod;
    rep.period = orb.period;
    for (size_t i = 0; i < orb.mus.size(); ++i) {
        long m1 = orb.mus[i][0], m2 = orb.mus[i][1], m3 = orb.mus[i][2];
        if (m3 == 0) {
            rep.pass = false;
            rep.failing_index = static_cast<long>(i);
            rep.reason = "the lower parameter is not a unit at orbit step " + std::to_string(i);
            return rep;
        }
        if (m3 < m1 + m2) {
            rep.pass = false;
            rep.failing_index = static_cast<long>(i);
            rep.reason = "the lower digit falls below the upper digit sum at orbit step " +
                         std::to_string(i);
            return rep;
        }
    }
    return rep;
}

/// Digit conditions for the lambda = -1 law on the pair (a, b): at every
/// orbit step the digit of a is even, at most the digit of b, the digit of b
/// stays below p - 1, and the spread 2 mu_b - mu_a stays below p.
inline ConditionReport young_conditions(const Rational& a, const Rational& b, long p,
                                        long f_max = 64) {
    detail::PairOrbit orb = detail::pair_orbit(a, b, p, f_max);
    ConditionReport rep;
    rep.preperiod = orb.preperiod;
    rep.period = orb.period;
    for (size_t i = 0; i < orb.mus.size(); ++i) {
        long ma = orb.mus[i][0], mb = orb.mus[i][1];
        if (ma % 2 != 0) {
            rep.pass = false;
            rep.failing_index = static_cast<long>(i);
            rep.reason = "the first digit is odd at orbit step " + std::to_string(i);
            return rep;
        }
        if (ma > mb) {
            rep.pass = false;
            rep.failing_index = static_cast<long>(i);
            rep.reason = "the digits are out of order at orbit step " + std::to_string(i);
            return rep;
        }
        if (mb > p - 2) {
            rep.pass = false;
            rep.failing_index = static_cast<long>(i);
            rep.reason = "the second digit reaches p - 1 at orbit step " + std::to_string(i);
            return rep;
        }
        if (2 * mb - ma > p - 1) {
            rep.pass = false;
            rep.failing_index = static_cast<long>(i);
            rep.reason = "the digit spread exceeds p - 1 at orbit step " + std::to_string(i);
            return rep;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Right-hand sides of the special-value laws.

/// Gamma_p(c) Gamma_p(c-a-b) / (Gamma_p(c-a) Gamma_p(c-b)) for t = (a, b, c).
inline PadicNumber kd_rhs(const Triple& t, long p, long N = 6) {
    const Rational &a = t.a1, &b = t.a2, &c = t.a3;
    PadicNumber num = gamma_p(c, p, N) * gamma_p(Rational(c - a - b), p, N);
    PadicNumber den = gamma_p(Rational(c - a), p, N) * gamma_p(Rational(c - b), p, N);
    return num * den.inverse();
}

/// (-1)^(mu_a/2) Gamma_p(a/2) Gamma_p(b-a/2) / (Gamma_p(a) Gamma_p(b-a)).
inline PadicNumber young_rhs(const Rational& a, const Rational& b, long p, long N = 6) {
    long mu_a = prime_step(a, p).mu;
    if (mu_a % 2 != 0) throw std::domain_error("the leading digit of a must be even");
    PadicNumber num = gamma_p(Rational(a / 2), p, N) * gamma_p(Rational(b - a / 2), p, N);
    PadicNumber den = gamma_p(a, p, N) * gamma_p(Rational(b - a), p, N);
    return (num * den.inverse()).scale(Rational(sign_pow(mu_a / 2)));
}

// ---------------------------------------------------------------------------
// Verification drivers: every member of the parameter orbit is checked and
// the composite over a full cycle is compared as well.

enum class Verdict { pass, fail, not_applicable };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::not_applicable: return "not-applicable";
    }
    return "unknown";
}

struct MemberCheck {
    Triple triple;
    RatioCertificate ratio;
    PadicNumber rhs;
    long agreement;
};

struct SpecialValueReport {
    long p = 0;
    Triple triple;
    Rational lambda0;
    ConditionReport conditions;  // the regime that governs the verdict
    ConditionReport intro;       // the weaker regime, reported for context
    bool intro_checked = false;
    std::vector<MemberCheck> members;
    long composite_agreement = 0;
    long threshold = 0;
    Verdict verdict = Verdict::not_applicable;
    std::string error;
};

namespace detail {

inline void close_report(SpecialValueReport& rep) {
    if (!rep.members.empty()) {
        PadicNumber lhs = rep.members.front().ratio.certified_value;
        PadicNumber rhs = rep.members.front().rhs;
        for (size_t i = 1; i < rep.members.size(); ++i) {
            lhs = lhs * rep.members[i].ratio.certified_value;
            rhs = rhs * rep.members[i].rhs;
        }
        rep.composite_agreement = agreement_exponent(lhs, rhs);
    }
    if (!rep.conditions.pass) {
        rep.verdict = Verdict::not_applicable;
    } else if (!rep.error.empty() || rep.members.empty()) {
        rep.verdict = Verdict::fail;
    } else {
        bool ok = true;
        for (const MemberCheck& m : rep.members) ok = ok && m.agreement >= rep.threshold;
        rep.verdict = ok ? Verdict::pass : Verdict::fail;
    }
}

}  // namespace detail

/// Check dwork_ratio(t; 1) against kd_rhs for every triple on the cycle of
/// the prime-map orbit of a. The strict digit regime governs the verdict;
/// the weak regime is evaluated alongside for the report.
inline SpecialValueReport kd_verify(const Triple& a, long p, long N = 6, long s_max = 4,
                                    long f_max = 64, long threshold = 4) {
    SpecialValueReport rep;
    rep.p = p;
    rep.triple = a;
    rep.lambda0 = 1;
    rep.threshold = std::min(threshold, N);

    try {
        TripleOrbit orb = triple_orbit(a, p, f_max);
        rep.conditions = kd_conditions_modified(a, p, f_max);
        rep.intro = kd_conditions_intro(a, p, f_max);
        rep.intro_checked = true;

        std::vector<Triple> targets;
        if (rep.conditions.pass) {
            for (long i = orb.preperiod; i < orb.preperiod + orb.period; ++i)
                targets.push_back(orb.points[static_cast<size_t>(i)]);
        } else {
            targets.push_back(a);
        }
        for (const Triple& t : targets) {
            RatioCertificate cert = dwork_ratio(t, Rational(1), p, s_max, N);
            PadicNumber rhs = kd_rhs(t, p, N);
            long agree = agreement_exponent(cert.certified_value, rhs);
            rep.members.push_back(MemberCheck{t, std::move(cert), std::move(rhs), agree});
        }
    } catch (const std::exception& e) {
        rep.error = e.what();
    }

    detail::close_report(rep);
    return rep;
}

/// Check dwork_ratio((a, b, 1+a-b); -1) against young_rhs for every pair on
/// the cycle of the componentwise prime-map orbit of (a, b).
inline SpecialValueReport young_verify(const Rational& a, const Rational& b, long p, long N = 6,
                                       long s_max = 4, long f_max = 64, long threshold = 4) {
    SpecialValueReport rep;
    rep.p = p;
    rep.triple = Triple{a, b, Rational(1 + a - b)};
    rep.lambda0 = -1;
    rep.threshold = std::min(threshold, N);

    try {
        detail::PairOrbit orb = detail::pair_orbit(a, b, p, f_max);
        rep.conditions = young_conditions(a, b, p, f_max);

        std::vector<std::array<Rational, 2>> targets;
        if (rep.conditions.pass) {
            for (long i = orb.preperiod; i < orb.preperiod + orb.period; ++i)
                targets.push_back(orb.points[static_cast<size_t>(i)]);
        } else {
            targets.push_back({a, b});
        }
        for (const auto& pr : targets) {
            Triple t{pr[0], pr[1], Rational(1 + pr[0] - pr[1])};
            RatioCertificate cert = dwork_ratio(t, Rational(-1), p, s_max, N);
            PadicNumber rhs = young_rhs(pr[0], pr[1], p, N);
            long agree = agreement_exponent(cert.certified_value, rhs);
            rep.members.push_back(MemberCheck{t, std::move(cert), std::move(rhs), agree});
        }
    } catch (const std::exception& e) {
        rep.error = e.what();
    }

    detail::close_report(rep);
    return rep;
}

// ---------------------------------------------------------------------------
// The bounded solution class at a singular point.

/// eta^{(z)} = u_1^{(z)} / u_2^{(z)} as a series in the chart of z, for
/// z = 0 or z = 1. The ratio of the bounded row of the local solution
/// matrix; its value at the point is (a3-a2)/a3 resp. (a1+a2-a3)/(a1-a3).
inline SeriesQ eta_singular_class(int z, const Triple& a, long M) {
    if (z != 0 && z != 1) throw std::invalid_argument("the bounded class lives at 0 or 1");
    LocalSolution sol = u_matrix(a, z, M);
    if (sol.U.b.coeff(0) == 0)
        throw std::domain_error("the bounded class has a vanishing denominator");
    return (sol.U.a * sol.U.b.inverse()).truncate(M);
}

// ---------------------------------------------------------------------------
// Unit root by fixed-point iteration.

struct FixedPointTable {
    SeriesP omega;                    // the fixed point, to the working order
    std::vector<Rational> points;     // sample points used for the stop rule
    std::vector<PadicNumber> values;  // omega at the sample points
    long iterations;
    std::vector<long> step_gains;  // valuation of omega_{k+1} - omega_k per step
};

/// Iterate omega -> (p A phi*omega + C) / (p B phi*omega + D) to its fixed
/// point. A, B, C, D are the blocks of the Frobenius matrix with the top row
/// divided by p, so the map contracts with factor |p|; phi* is pullback
/// along the given lifting. Stops when the sample values stop moving at full
/// precision.
inline FixedPointTable unit_root_fixed_point(const SeriesP& A, const SeriesP& B, const SeriesP& C,
                                             const SeriesP& D, const FrobeniusLifting& lifting,
                                             long N, long max_iter = 24,
                                             std::vector<Rational> points = {}) {
    long p = lifting.p;
    long M = std::min(std::min(A.hi(), B.hi()), std::min(C.hi(), D.hi()));
    if (points.empty()) points = {Rational(0), Rational(p)};

    SeriesP pA = A.scale(Rational(p)).truncate(M);
    SeriesP pB = B.scale(Rational(p)).truncate(M);
    SeriesP Ct = C.truncate(M);
    SeriesP Dt = D.truncate(M);

    bool monomial_lift = lifting.kind == LiftingKind::standard ||
                         lifting.kind == LiftingKind::infinity_adapted;
    SeriesP phi = monomial_lift
                      ? SeriesP::constant(Chart::lambda0, PadicNumber::exact_zero(p), 0)
                      : embed_series(lifting.phi.expand(Chart::lambda0, M), p, N);
    auto pullback = [&](const SeriesP& w) -> SeriesP {
        if (monomial_lift) return w.dilate(p).truncate(M);
        return w.compose(phi).truncate(M);
    };

    auto eval_all = [&](const SeriesP& w) {
        std::vector<PadicNumber> vals;
        for (const Rational& x : points) vals.push_back(w.evaluate(x));
        return vals;
    };
    auto full_agreement = [&](const PadicNumber& x, const PadicNumber& y) {
        long floor_prec = N;
        if (!x.is_exact_zero()) floor_prec = std::min(floor_prec, x.abs_precision());
        if (!y.is_exact_zero()) floor_prec = std::min(floor_prec, y.abs_precision());
        return agreement_exponent(x, y) >= floor_prec;
    };
    auto min_gain = [&](const SeriesP& x, const SeriesP& y) -> long {
        SeriesP d = x - y;
        long best = LONG_MAX, floor_prec = LONG_MAX;
        for (long k = d.lo(); k <= d.hi(); ++k) {
            const PadicNumber& c = d.coeff(k);
            if (c.is_exact_zero()) continue;
            if (c.is_zero())
                floor_prec = std::min(floor_prec, c.abs_precision());
            else
                best = std::min(best, c.valuation());
        }
        if (best != LONG_MAX) return best;
        return floor_prec != LONG_MAX ? floor_prec : N;
    };

    SeriesP omega = (Ct * Dt.inverse()).truncate(M);
    std::vector<PadicNumber> prev_vals = eval_all(omega);
    std::vector<long> gains;

    for (long iter = 1; iter <= max_iter; ++iter) {
        SeriesP pw = pullback(omega);
        SeriesP next = ((pA * pw + Ct) * (pB * pw + Dt).inverse()).truncate(M);
        gains.push_back(min_gain(next, omega));
        std::vector<PadicNumber> cur_vals = eval_all(next);
        omega = next;

        bool settled = true;
        for (size_t i = 0; i < points.size(); ++i)
            settled = settled && full_agreement(cur_vals[i], prev_vals[i]);
        prev_vals = std::move(cur_vals);
        if (settled)
            return FixedPointTable{std::move(omega), std::move(points), std::move(prev_vals),
                                   iter, std::move(gains)};
    }
    throw std::domain_error("unit-root iteration did not converge within the step budget");
}

// ---------------------------------------------------------------------------
// Searching the low-denominator rationals for admissible parameters.

namespace detail {

struct CandidateOrbit {
    Rational x;
    std::vector<long> mus;  // digit sequence over one period
};

inline std::vector<CandidateOrbit> candidate_orbits(long p, long max_den, long f_max) {
    std::vector<CandidateOrbit> out;
    for (long d = 1; d <= max_den; ++d) {
        if (d % p == 0) continue;
        for (long n = 1; n <= d; ++n) {
            if (std::gcd(n, d) != 1) continue;
            Rational x(n, d);
            x.canonicalize();
            try {
                Orbit orb = orbit(x, p, f_max);
                out.push_back(CandidateOrbit{x, orb.mus});
            } catch (const std::domain_error&) {
                // Orbit longer than the step budget: not usable in any triple.
            }
        }
    }
    return out;
}

}  // namespace detail

/// All triples with component denominators at most max_den (coprime to p,
/// components in (0, 1], first two in nondecreasing order) whose full orbits
/// pass the strict digit conditions.
inline std::vector<Triple> kd_candidate_search(long p, long max_den, long f_max = 64) {
    std::vector<detail::CandidateOrbit> cands = detail::candidate_orbits(p, max_den, f_max);
    std::vector<Triple> found;
    for (size_t i = 0; i < cands.size(); ++i) {
        for (size_t j = i; j < cands.size(); ++j) {
            long f12 = std::lcm(static_cast<long>(cands[i].mus.size()),
                                static_cast<long>(cands[j].mus.size()));
            for (size_t k = 0; k < cands.size(); ++k) {
                long period = std::lcm(f12, static_cast<long>(cands[k].mus.size()));
                if (period > f_max) continue;
                bool pass = true;
                for (long s = 0; pass && s < period; ++s) {
                    long m1 = cands[i].mus[static_cast<size_t>(s) % cands[i].mus.size()];
                    long m2 = cands[j].mus[static_cast<size_t>(s) % cands[j].mus.size()];
                    long m3 = cands[k].mus[static_cast<size_t>(s) % cands[k].mus.size()];
                    pass = std::min(m1, m2) > 0 && m3 > m1 + m2;
                }
                if (pass) found.push_back(Triple{cands[i].x, cands[j].x, cands[k].x});
            }
        }
    }
    return found;
}

/// All pairs (a, b) with denominators at most max_den whose orbits pass the
/// lambda = -1 digit conditions.
inline std::vector<std::array<Rational, 2>> young_candidate_search(long p, long max_den,
                                                                   long f_max = 64) {
    std::vector<detail::CandidateOrbit> cands = detail::candidate_orbits(p, max_den, f_max);
    std::vector<std::array<Rational, 2>> found;
    for (const detail::CandidateOrbit& ca : cands) {
        for (const detail::CandidateOrbit& cb : cands) {
            long period = std::lcm(static_cast<long>(ca.mus.size()),
                                   static_cast<long>(cb.mus.size()));
            if (period > f_max) continue;
            bool pass = true;
            for (long s = 0; pass && s < period; ++s) {
                long ma = ca.mus[static_cast<size_t>(s) % ca.mus.size()];
                long mb = cb.mus[static_cast<size_t>(s) % cb.mus.size()];
                pass = ma % 2 == 0 && ma <= mb && mb <= p - 2 && 2 * mb - ma <= p - 1;
            }
            if (pass) found.push_back({ca.x, cb.x});
        }
    }
    return found;
}

// ---------------------------------------------------------------------------
// The eigenvalue-ratio identity at lambda = 1, replayed step by step.

struct ChainStep {
    std::string name;
    long agreement;
};

struct XiRatioReport {
    long p;
    Triple triple;
    std::array<long, 3> mu;
    bool t2_pass;
    bool kd_pass;
    long pi_exponent;
    PadicNumber xi_ratio_value;
    PadicNumber kd_value;
    PadicNumber dwork_value;
    long dwork_agreement;
    long agree_xi_kd;
    long agree_dwork_kd;
    long agree_dwork_xi;
    std::vector<ChainStep> chain;
    bool verdict;
};

/// Replay the reduction of the eigenvalue ratio
///   (b3/a3) ((a1-a3)/(b1-b3)) xi_1^{(1)} / xi_1^{(0)}
/// down to the Gamma_p special-value expression, recording the agreement of
/// each consecutive pair of forms, and cross-check the result against the
/// analytic ratio at lambda = 1. Needs the splitting and strict digit
/// conditions along the whole orbit.
inline XiRatioReport xi_ratio_identity_check(const Triple& a, long p, long N = 6, long s_max = 4) {
    require_odd_prime(p);
    Triple b = triple_step(a, p).next;
    std::array<long, 3> mu = pair_mus(a, b, p);

    TripleOrbit orb = triple_orbit(a, p, 64);
    bool t2 = true;
    for (const auto& m : orb.mus) t2 = t2 && m[2] > std::max(m[0], m[1]);
    bool kdc = kd_conditions_modified(a, p, 64).pass;
    if (!t2 || !kdc)
        throw std::domain_error("the ratio identity needs the splitting and digit conditions");

    const Rational &a1 = a.a1, &a2 = a.a2, &a3 = a.a3;
    const Rational &b1 = b.a1, &b2 = b.a2, &b3 = b.a3;

    // Digit-window exponents of the four reduced gamma symbols.
    long e1 = mu[0] - mu[2] + p - 1;
    long e2 = mu[2];
    long e3 = mu[0] + mu[1] - mu[2] + p - 1;
    long e4 = mu[2] - mu[1];
    for (long e : {e1, e2, e3, e4})
        if (e < 0 || e >= p) throw std::logic_error("a reduced gamma exponent left the window");
    if (e1 + e2 - e3 - e4 != 0) throw std::logic_error("the pi exponents failed to cancel");

    auto gp = [&](const Rational& x, const Rational& y) { return gamma_pi(x, y, p, N); };
    Rational pre = Rational(b3 / a3) * Rational((a1 - a3) / (b1 - b3));
    int sgn = sign_pow(mu[1]);

    PiElement xi1_0 = xi_closed_form(a, b, 0, 1, p, N);
    PiElement xi1_1 = xi_closed_form(a, b, 1, 1, p, N);
    PiElement f0 = (xi1_1 / xi1_0).scale(pre);

    Triple a5 = kummer_map(5, a), b5 = kummer_map(5, b);
    PiElement f1 =
        (xi_closed_form(a5, b5, 0, 1, p, N) / xi1_0).scale(Rational(pre * sgn));

    PiElement num2 = gp(a2, b2) * gp(Rational(a1 - a3), Rational(b1 - b3)) *
                     gp(Rational(a3 + 1), Rational(b3 + 1));
    PiElement den2 = gp(Rational(a1 + a2 - a3 + 1), Rational(b1 + b2 - b3 + 1)) * gp(a2, b2) *
                     gp(Rational(a3 - a2), Rational(b3 - b2));
    PiElement f2 = (num2 / den2).scale(Rational(pre * sgn));

    PiElement num3 = gp(Rational(a1 - a3 + 1), Rational(b1 - b3 + 1)) * gp(a3, b3);
    PiElement den3 = gp(Rational(a1 + a2 - a3 + 1), Rational(b1 + b2 - b3 + 1)) *
                     gp(Rational(a3 - a2), Rational(b3 - b2));
    PiElement f3 = (num3 / den3).scale(Rational(sgn));

    PiElement num4 = PiElement(gamma_p(Rational(a1 - a3 + 1), p, N), e1) *
                     PiElement(gamma_p(a3, p, N), e2);
    PiElement den4 = PiElement(gamma_p(Rational(a1 + a2 - a3 + 1), p, N), e3) *
                     PiElement(gamma_p(Rational(a3 - a2), p, N), e4);
    PiElement f4 = (num4 / den4).scale(Rational(sgn));

    PadicNumber v5 = gamma_p(Rational(a1 - a3 + 1), p, N) * gamma_p(a3, p, N) *
                     (gamma_p(Rational(a1 + a2 - a3 + 1), p, N) *
                      gamma_p(Rational(a3 - a2), p, N))
                         .inverse();
    PiElement f5 = PiElement::from_padic(v5.scale(Rational(sgn)));

    int s1 = gamma_reflection_sign(Rational(a1 - a3 + 1), p);
    int s2 = gamma_reflection_sign(Rational(a1 + a2 - a3 + 1), p);
    PadicNumber v6 = gamma_p(Rational(a3 - a1 - a2), p, N) * gamma_p(a3, p, N) *
                     (gamma_p(Rational(a3 - a1), p, N) * gamma_p(Rational(a3 - a2), p, N))
                         .inverse();
    PiElement f6 = PiElement::from_padic(v6.scale(Rational(sgn * s1 * s2)));

    PadicNumber kd_value = kd_rhs(a, p, N);
    PiElement f7 = PiElement::from_padic(kd_value);

    std::vector<PiElement> forms{f0, f1, f2, f3, f4, f5, f6, f7};
    const char* names[] = {"pullback",        "gamma-expansion", "translation", "pi-display",
                           "pi-cancellation", "reflection",      "special-value-display"};
    std::vector<ChainStep> chain;
    for (size_t i = 0; i + 1 < forms.size(); ++i)
        chain.push_back(ChainStep{names[i], agreement_exponent(forms[i], forms[i + 1])});

    if (f0.pi_exp() != 0) throw std::logic_error("the xi ratio kept an unreduced pi factor");
    PadicNumber xi_ratio_value = f0.as_padic();

    RatioCertificate cert = dwork_ratio(a, Rational(1), p, s_max, N);
    long agree_xi_kd = agreement_exponent(xi_ratio_value, kd_value);
    long agree_dwork_kd = agreement_exponent(cert.certified_value, kd_value);
    long agree_dwork_xi = agreement_exponent(cert.certified_value, xi_ratio_value);

    long bar = std::min(4L, N);
    bool verdict = true;
    for (const ChainStep& st : chain) verdict = verdict && st.agreement >= bar;
    verdict = verdict && agree_xi_kd >= bar && agree_dwork_kd >= bar && agree_dwork_xi >= bar;

    return XiRatioReport{p,
                         a,
                         mu,
                         t2,
                         kdc,
                         f0.pi_exp(),
                         std::move(xi_ratio_value),
                         std::move(kd_value),
                         cert.certified_value,
                         cert.agreement_exponent,
                         agree_xi_kd,
                         agree_dwork_kd,
                         agree_dwork_xi,
                         std::move(chain),
                         verdict};
}

}  // namespace phg
