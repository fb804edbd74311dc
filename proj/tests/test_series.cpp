#include "iwg/cyclo.hpp"
#include "iwg/literal.hpp"
#include "iwg/poly.hpp"
#include "iwg/series.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace iwg;

namespace {

/// (1+pi)^c by repeated multiplication
TruncatedSeries power_one_plus_pi(unsigned long p, unsigned c, size_t M, long N)
{
    TruncatedSeries base(p, Coeffs{1, 1}, M, N), r = TruncatedSeries::one(p, M, N);
    for (unsigned i = 0; i < c; i++)
        r = r * base;
    return r;
}

mpz_class binom(unsigned n, unsigned k)
{
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

}  // namespace

TEST_CASE("phi on pi, constants and q")
{
    for (unsigned long p : {3ul, 5ul, 7ul}) {
        TruncatedSeries f = phi(TruncatedSeries::variable(p, 12, 10));
        CHECK(f.coeff(0) == 0);
        for (unsigned i = 1; i <= p; i++)
            CHECK(f.coeff(i) == binom((unsigned) p, i));
        for (size_t i = p + 1; i < 12; i++)
            CHECK(f.coeff(i) == 0);
        CHECK(phi(TruncatedSeries::one(p, 12, 10)).same_as(TruncatedSeries::one(p, 12, 10)));
        CHECK(q_element(p, 12, 10).coeff(0) == p);
    }
}

TEST_CASE("phi is a ring homomorphism")
{
    std::mt19937_64 rng(test::kSeed);
    for (int t = 0; t < 10; t++) {
        unsigned long p = t % 2 ? 3 : 5;
        TruncatedSeries a = test::random_series(p, 30, 12, rng), b = test::random_series(p, 30, 12, rng);
        CHECK(phi(a * b).congruent(phi(a) * phi(b)));
        CHECK(phi(a + b).congruent(phi(a) + phi(b)));
    }
}

TEST_CASE("psi worked values")
{
    for (unsigned long p : {3ul, 5ul}) {
        TruncatedSeries one = TruncatedSeries::one(p, 40, 10);
        TruncatedSeries r = psi(one);
        CHECK(r.coeff(0) == 1);
        for (size_t i = 1; i < r.M(); i++)
            CHECK(r.coeff(i) == 0);
        CHECK(psi(TruncatedSeries(p, Coeffs{1, 1}, 40, 10)).is_zero());
    }
}

TEST_CASE("psi is a left inverse of phi and phi psi is idempotent")
{
    std::mt19937_64 rng(test::kSeed + 2);
    for (int t = 0; t < 10; t++) {
        unsigned long p = t % 2 ? 3 : 5;
        size_t M = 60;
        TruncatedSeries f = test::random_series(p, M, 12, rng);
        TruncatedSeries back = psi(phi(f));
        CHECK(back.M() >= 1);
        CHECK(back.congruent(f.truncated(back.M())));

        TruncatedSeries g = test::random_series(p, M, 12, rng);
        TruncatedSeries pg = phi(psi(g));
        TruncatedSeries ppg = phi(psi(pg));
        size_t Mc = std::min(pg.M(), ppg.M());
        CHECK(ppg.truncated(Mc).congruent(pg.truncated(Mc)));
    }
}

TEST_CASE("gamma action")
{
    std::mt19937_64 rng(test::kSeed + 3);
    const unsigned long p = 5;
    const size_t M = 20;
    const long N = 10;
    TruncatedSeries f = test::random_series(p, M, N, rng);
    CHECK(gamma_act(f, 1).congruent(f));

    TruncatedSeries base(p, Coeffs{1, 1}, M, N);
    CHECK(gamma_act(base, 6).congruent(power_one_plus_pi(p, 6, M, N)));
    CHECK(gamma_act(base, 7).congruent(power_one_plus_pi(p, 7, M, N)));

    for (auto [c1, c2] : {std::pair<long, long>{6, 11}, {2, 3}, {4, 21}}) {
        TruncatedSeries lhs = gamma_act(gamma_act(f, c1), c2);
        CHECK(lhs.congruent(gamma_act(f, c1 * c2)));
    }
}

TEST_CASE("psi commutes with the gamma action")
{
    std::mt19937_64 rng(test::kSeed + 4);
    for (long c : {2l, 6l, 1 + 5l * 7}) {
        TruncatedSeries f = test::random_series(5, 60, 12, rng);
        TruncatedSeries a = psi(gamma_act(f, c)), b = gamma_act(psi(f), c);
        size_t Mc = std::min(a.M(), b.M());
        CHECK(a.truncated(Mc).congruent(b.truncated(Mc)));
    }
}

TEST_CASE("q and delta")
{
    for (unsigned long p : {3ul, 5ul, 7ul}) {
        const size_t M = 16;
        const long N = 12;
        TruncatedSeries q = q_element(p, M, N), d = delta_element(p, M, N);
        CHECK(q.coeff(0) == p);
        CHECK(q.coeff(p - 1) == 1);
        CHECK(d.coeff(0) == 1);
        Coeffs pi_pow(p);
        pi_pow[p - 1] = 1;
        TruncatedSeries lhs = d * (q - TruncatedSeries(p, pi_pow, M, N));
        CHECK(lhs.congruent(TruncatedSeries::constant(p, p, M, N).with_precision(lhs.N())));
    }
}

TEST_CASE("iwasawa invariants worked values")
{
    auto inv = [](Coeffs c) { return iwasawa_invariants(TruncatedSeries(5, c, 10, 20)); };
    IwasawaInvariants a = inv({5, 0, 1});
    CHECK(a.mu == 0);
    CHECK(a.lambda == 2);
    IwasawaInvariants b = inv({0, 5});
    CHECK(b.mu == 1);
    CHECK(b.lambda == 1);
    IwasawaInvariants c = inv({3, 10, 7});
    CHECK(c.mu == 0);
    CHECK(c.lambda == 0);
    CHECK_THROWS(inv({0, 0}));
}

TEST_CASE("iwasawa invariants under unit and series multiplication")
{
    std::mt19937_64 rng(test::kSeed + 5);
    for (int t = 0; t < 30; t++) {
        unsigned long p = t % 2 ? 3 : 5;
        const size_t M = 24;
        const long N = 20;
        auto make = [&](long mu, long lambda) {
            Coeffs c = test::random_coeffs((size_t) lambda + 3, p, N - mu - 1, rng);
            for (long i = 0; i < lambda; i++)
                c[i] *= p;
            if (mpz_divisible_ui_p(c[lambda].get_mpz_t(), p))
                c[lambda] += 1;
            for (auto& x : c)
                x *= ppow(p, mu);
            return TruncatedSeries(p, c, M, N);
        };
        long m1 = (long) (rng() % 3), l1 = (long) (rng() % 5);
        long m2 = (long) (rng() % 3), l2 = (long) (rng() % 5);
        TruncatedSeries f = make(m1, l1), g = make(m2, l2);
        IwasawaInvariants fi = iwasawa_invariants(f);
        CHECK(fi.mu == m1);
        CHECK(fi.lambda == l1);
        IwasawaInvariants ui = iwasawa_invariants(f * test::random_unit(p, M, N, rng));
        CHECK(ui.mu == m1);
        CHECK(ui.lambda == l1);
        IwasawaInvariants fg = iwasawa_invariants(f * g);
        CHECK(fg.mu == m1 + m2);
        CHECK(fg.lambda == l1 + l2);
    }
}

TEST_CASE("newton bound worked values")
{
    NewtonBound a = newton_lower_bound({0, 2, 1}, ExtValuation(1, 4));
    CHECK(a.value == ExtValuation(1, 2));
    CHECK(a.exact);
    NewtonBound b = newton_lower_bound({3, 0, 1}, ExtValuation(7, 3));
    CHECK(b.value == ExtValuation(3));
    NewtonBound c = newton_lower_bound({1, 1, 1}, ExtValuation(1, 20));
    CHECK(c.value == ExtValuation(21, 20));

    /* oracle: p (X + p (1 + X)) at eps_2, p = 5, where ord(eps_2) = 1/20 */
    Coeffs f = {25, 5 + 25};
    CHECK(exact_valuation(evaluate_poly_at_eps(f, 5, 2, 20)) == ExtValuation(21, 20));
    CHECK_THROWS_AS(newton_lower_bound({0, 1, 1}, ExtValuation(0)), DomainError);
}

TEST_CASE("newton bound is attained at eps_n in the equality range")
{
    std::mt19937_64 rng(test::kSeed + 6);
    int checked = 0;
    for (int t = 0; t < 20; t++) {
        unsigned long p = t % 2 ? 3 : 5;
        const long N = 20;
        long mu = (long) (rng() % 3), lambda = (long) (rng() % 6);
        Coeffs c = test::random_coeffs((size_t) lambda + 4, p, N - 4, rng);
        for (long i = 0; i < lambda; i++)
            c[i] *= p;
        if (mpz_divisible_ui_p(c[lambda].get_mpz_t(), p))
            c[lambda] += 1;
        for (auto& x : c)
            x *= ppow(p, mu);
        IwasawaInvariants inv = iwasawa_invariants(TruncatedSeries(p, c, c.size() + 1, N));
        for (int n = 1; n <= 3; n++) {
            ExtValuation ordx(mpq_class(1, (p - 1) * ppow(p, n - 1).get_ui()));
            NewtonBound nb = newton_lower_bound(inv, ordx);
            ExtValuation ex = exact_valuation(evaluate_poly_at_eps(c, p, n, N));
            CHECK(nb.value <= ex);
            if (nb.exact) {
                CHECK(nb.value == ex);
                checked++;
            }
        }
    }
    CHECK(checked >= 20);
}

TEST_CASE("series literal parser")
{
    TruncatedSeries a = parse_series_literal("X^2 + p", 5, 8, 10);
    CHECK(a.coeff(0) == 5);
    CHECK(a.coeff(1) == 0);
    CHECK(a.coeff(2) == 1);

    TruncatedSeries b = parse_series_literal("p^2 * (1 - 3*X + X^4)", 5, 8, 10);
    mpz_class m = ppow(5, 10);
    CHECK(b.coeff(0) == 25);
    CHECK(b.coeff(1) == m - 75);
    CHECK(b.coeff(4) == 25);

    TruncatedSeries c = parse_series_literal("p^3^-1 * (p*X + 2)", 5, 8, 10);
    CHECK(c.B() == 3);
    CHECK(c.coeff(0) == 2);
    CHECK(c.coeff(1) == 5);

    TruncatedSeries d = parse_series_literal("pi^2*(1+pi)", 3, 8, 10);
    CHECK(d.coeff(2) == 1);
    CHECK(d.coeff(3) == 1);

    CHECK_THROWS_AS(parse_series_literal("X^", 5, 8, 10), DomainError);
    CHECK_THROWS_AS(parse_series_literal("(X + 1", 5, 8, 10), DomainError);
    CHECK_THROWS_AS(parse_series_literal("Y", 5, 8, 10), DomainError);
    CHECK_THROWS_AS(parse_series_literal("", 5, 8, 10), DomainError);
}

TEST_CASE("series literal round trip")
{
    std::mt19937_64 rng(test::kSeed + 7);
    for (int t = 0; t < 20; t++) {
        TruncatedSeries f = test::random_series(5, 12, 15, rng, 1 + rng() % 12);
        if (t % 3 == 0)
            f = f.div_p_power(2);
        TruncatedSeries g = parse_series_literal(format_series_literal(f), 5, 12, 15);
        CHECK(g.same_as(f));
    }
}
