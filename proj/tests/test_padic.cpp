#include <catch2/catch_amalgamated.hpp>

#include <phg/padic.hpp>
#include <phg/rational.hpp>

#include <random>

using phg::agreement_exponent;
using phg::PadicNumber;
using phg::PiElement;
using phg::Rational;

TEST_CASE("rational helpers") {
    CHECK(phg::vp(Rational(7, 2), 7) == 1);
    CHECK(phg::vp(Rational(2, 49), 7) == -2);
    CHECK(phg::vp(phg::Integer(250), 5) == 3);
    CHECK(phg::parse_rational("-3/6") == Rational(-1, 2));
    CHECK(phg::parse_rational("12") == Rational(12));
    CHECK_THROWS_AS(phg::parse_rational("x"), std::invalid_argument);
    CHECK(phg::pochhammer(Rational(1, 2), 3) == Rational(15, 8));
    CHECK(phg::pochhammer(Rational(-2), 3) == Rational(0));
    CHECK(phg::sign_pow(-3) == -1);
    CHECK(phg::sign_pow(4) == 1);
    CHECK_THROWS_AS(phg::require_odd_prime(9), std::invalid_argument);
    CHECK_THROWS_AS(phg::require_odd_prime(2), std::invalid_argument);
    CHECK_NOTHROW(phg::require_odd_prime(13));
}

TEST_CASE("embedding fixed values") {
    // 1/2 in Z_7 mod 7^3: the inverse of 2 mod 343.
    auto half = PadicNumber::from_rational(Rational(1, 2), 7, 3);
    CHECK(half.valuation() == 0);
    CHECK(half.unit() == 172);
    CHECK(half.abs_precision() == 3);

    auto x = PadicNumber::from_rational(Rational(7, 2), 7, 3);
    CHECK(x.valuation() == 1);
    CHECK(x.rel_precision() == 2);
    CHECK(x.unit() == 25);  // 1/2 mod 7^2

    auto inv7 = PadicNumber::from_rational(Rational(1, 7), 7, 3);
    CHECK(inv7.valuation() == -1);
    CHECK(inv7.rel_precision() == 4);
    CHECK(inv7.unit() == 1);

    auto z = PadicNumber::from_rational(Rational(0), 7, 3);
    CHECK(z.is_exact_zero());

    // v_p(r) >= N collapses to a certified zero at N.
    auto tiny = PadicNumber::from_rational(Rational(2401), 7, 3);
    CHECK(tiny.is_zero());
    CHECK_FALSE(tiny.is_exact_zero());
    CHECK(tiny.abs_precision() == 3);
}

TEST_CASE("addition tracks carries and cancellation") {
    auto a = PadicNumber::from_integer(3, 7, 6);
    auto b = PadicNumber::from_integer(4, 7, 6);
    auto s = a + b;
    CHECK(s.valuation() == 1);
    CHECK(s.unit() == 1);
    CHECK(s.abs_precision() == 6);

    auto diff = a + (-a);
    CHECK(diff.is_zero());
    CHECK_FALSE(diff.is_exact_zero());
    CHECK(diff.abs_precision() == 6);

    // Differing absolute precisions: min wins.
    auto c = PadicNumber::from_integer(1, 7, 4);
    CHECK((a + c).abs_precision() == 4);

    // Negative valuations mix with nonnegative ones.
    auto inv7 = PadicNumber::from_rational(Rational(1, 7), 7, 3);
    auto sum = inv7 + PadicNumber::from_integer(1, 7, 3);
    CHECK(sum.valuation() == -1);
    CHECK(sum.unit() == 8);  // (1 + 7)/7 = 8/7

    auto cancel = inv7 + PadicNumber::from_rational(Rational(-1, 7), 7, 3);
    CHECK(cancel.is_zero());
    CHECK(cancel.abs_precision() == 3);

    // Exact zero is the additive identity at full precision.
    auto ez = PadicNumber::exact_zero(7);
    CHECK((a + ez).abs_precision() == 6);
    CHECK((ez + ez).is_exact_zero());
}

TEST_CASE("multiplication, inversion, division") {
    auto x = PadicNumber::from_rational(Rational(3, 2), 7, 6);
    auto y = PadicNumber::from_rational(Rational(14), 7, 6);
    auto xy = x * y;
    CHECK(xy.valuation() == 1);
    CHECK(xy.rel_precision() == 5);  // min of the two relative precisions
    CHECK(agreement_exponent(xy, PadicNumber::from_integer(21, 7, 8)) >= 6);

    auto xinv = x.inverse();
    CHECK(agreement_exponent(xinv, PadicNumber::from_rational(Rational(2, 3), 7, 8)) >= 6);
    auto prod = x * xinv;
    CHECK(prod.valuation() == 0);
    CHECK(prod.unit() == 1);

    CHECK_THROWS_AS(PadicNumber::exact_zero(7).inverse(), std::domain_error);
    CHECK_THROWS_AS(PadicNumber::zero_at_precision(7, 2).inverse(), std::domain_error);

    auto q = y / x;
    CHECK(agreement_exponent(q, PadicNumber::from_rational(Rational(28, 3), 7, 8)) >= 5);

    // Multiplying by a certified zero keeps track of how small the result is.
    auto zish = PadicNumber::zero_at_precision(7, 2);
    auto m = zish * PadicNumber::from_integer(49, 7, 6);
    CHECK(m.is_zero());
    CHECK(m.abs_precision() == 4);

    // Exact scalar multiplication keeps the relative precision.
    auto scaled = x.scale(Rational(7, 3));
    CHECK(scaled.valuation() == 1);
    CHECK(scaled.abs_precision() == 7);
    CHECK(agreement_exponent(scaled, PadicNumber::from_rational(Rational(7, 2), 7, 9)) >= 7);
}

TEST_CASE("powers") {
    auto x = PadicNumber::from_integer(3, 7, 6);
    CHECK(agreement_exponent(x.pow(4), PadicNumber::from_integer(81, 7, 8)) >= 6);
    CHECK(agreement_exponent(x.pow(-2), PadicNumber::from_rational(Rational(1, 9), 7, 8)) >= 6);
    CHECK(x.pow(0).unit() == 1);
    auto p7 = PadicNumber::from_integer(7, 7, 6).pow(3);
    CHECK(p7.valuation() == 3);
    CHECK(p7.unit() == 1);
}

TEST_CASE("precision bookkeeping utilities") {
    auto x = PadicNumber::from_rational(Rational(50), 5, 6);  // 2*5^2
    CHECK(x.valuation() == 2);
    CHECK(x.residue(3) == 50 % 125);
    CHECK(x.residue(2) == 0);
    auto t = x.truncate_abs(4);
    CHECK(t.abs_precision() == 4);
    CHECK(t.unit() == 2);
    CHECK(x.truncate_abs(2).is_zero());

    auto digits = PadicNumber::from_integer(38, 5, 4).unit_digits();
    REQUIRE(digits.size() == 4);  // 38 = 3 + 2*5 + 1*25
    CHECK(digits[0] == 3);
    CHECK(digits[1] == 2);
    CHECK(digits[2] == 1);
    CHECK(digits[3] == 0);
}

TEST_CASE("agreement exponent semantics") {
    auto x = PadicNumber::from_integer(10, 7, 6);
    auto y = PadicNumber::from_integer(10 + 343, 7, 6);
    CHECK(agreement_exponent(x, y) == 3);
    CHECK(x.agrees(y, 3));
    CHECK_FALSE(x.agrees(y, 4));
    CHECK(agreement_exponent(x, x) == 6);  // difference certified zero at 6
    auto ez = PadicNumber::exact_zero(7);
    CHECK(agreement_exponent(ez, ez) == LONG_MAX);
    CHECK(agreement_exponent(x, PadicNumber::from_integer(10, 7, 9)) == 6);
}

TEST_CASE("pi extension folds pi^(p-1) = -p") {
    auto one5 = PadicNumber::from_integer(1, 5, 6);
    PiElement u(one5, 2), v(one5, 2);
    auto w = u * v;
    CHECK(w.pi_exp() == 0);
    CHECK(w.coeff().valuation() == 1);
    CHECK(agreement_exponent(w.coeff(), PadicNumber::from_integer(-5, 5, 8)) >= 6);

    auto one7 = PadicNumber::from_integer(1, 7, 6);
    PiElement a(one7, 3), b(one7, 5);
    auto c = a * b;
    CHECK(c.pi_exp() == 2);
    CHECK(agreement_exponent(c.coeff(), PadicNumber::from_integer(-7, 7, 8)) >= 6);
    CHECK(c.ramified_valuation() == 1 * 6 + 2);

    // Division folds in the other direction: pi^3 / pi^5 = pi^4 * (-7)^(-1).
    auto q = a / b;
    CHECK(q.pi_exp() == 4);
    CHECK(q.coeff().valuation() == -1);
    CHECK(q.coeff().rel_precision() == 6);
    CHECK(agreement_exponent(q.coeff(), PadicNumber::from_rational(Rational(-1, 7), 7, 8)) >= 5);

    // Round trip: (a/b)*b recovers a.
    auto rt = q * b;
    CHECK(rt.pi_exp() == a.pi_exp());
    CHECK(agreement_exponent(rt.coeff(), a.coeff()) >= 6);

    CHECK(PiElement(one7, 0).as_padic().unit() == 1);
    CHECK_THROWS_AS(a.as_padic(), std::domain_error);
}

namespace {

Rational random_rational(std::mt19937& rng, long p) {
    std::uniform_int_distribution<long> num(-40, 40);
    std::uniform_int_distribution<long> den(1, 40);
    std::uniform_int_distribution<long> shift(-2, 2);
    Rational q(num(rng), den(rng));
    q.canonicalize();
    long s = shift(rng);
    for (long i = 0; i < std::abs(s); ++i) {
        if (s > 0)
            q *= p;
        else
            q /= p;
    }
    return q;
}

}  // namespace

TEST_CASE("embedding is a ring homomorphism") {
    std::mt19937 rng(20240817);
    for (long p : {5L, 7L, 13L}) {
        const long N = 8;
        for (int trial = 0; trial < 60; ++trial) {
            Rational q1 = random_rational(rng, p);
            Rational q2 = random_rational(rng, p);
            auto x = PadicNumber::from_rational(q1, p, N);
            auto y = PadicNumber::from_rational(q2, p, N);
            auto sum = PadicNumber::from_rational(q1 + q2, p, N + 4);
            auto prod = PadicNumber::from_rational(q1 * q2, p, N + 4);
            auto s = x + y;
            auto m = x * y;
            INFO("p=" << p << " q1=" << q1 << " q2=" << q2);
            CHECK(agreement_exponent(s, sum) >= (s.is_exact_zero() ? N : s.abs_precision()));
            long mp = m.is_exact_zero() ? N : m.abs_precision();
            CHECK(agreement_exponent(m, prod) >= mp);
        }
    }
}

TEST_CASE("ring axioms hold to certified precision") {
    std::mt19937 rng(5);
    for (long p : {5L, 7L, 13L}) {
        for (int trial = 0; trial < 40; ++trial) {
            auto x = PadicNumber::from_rational(random_rational(rng, p), p, 8);
            auto y = PadicNumber::from_rational(random_rational(rng, p), p, 8);
            auto z = PadicNumber::from_rational(random_rational(rng, p), p, 8);
            if (x.is_exact_zero() || y.is_exact_zero() || z.is_exact_zero()) continue;

            auto lhs = (x + y) + z;
            auto rhs = x + (y + z);
            CHECK(agreement_exponent(lhs, rhs) >=
                  std::min(lhs.is_exact_zero() ? 8 : lhs.abs_precision(),
                           rhs.is_exact_zero() ? 8 : rhs.abs_precision()));

            auto dl = x * (y + z);
            auto dr = x * y + x * z;
            long cert = std::min(dl.is_exact_zero() ? 8 : dl.abs_precision(),
                                 dr.is_exact_zero() ? 8 : dr.abs_precision());
            CHECK(agreement_exponent(dl, dr) >= cert);

            auto cm = x * y;
            auto cm2 = y * x;
            CHECK(agreement_exponent(cm, cm2) >= (cm.is_exact_zero() ? 8 : cm.abs_precision()));
        }
    }
}
