#include "iwg/cyclo.hpp"
#include "iwg/iwasawa.hpp"
#include "iwg/logmatrix.hpp"
#include "iwg/poly.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace iwg;

namespace {

const ExtValuation inf = ExtValuation::infinity();

CyclotomicElement one_at(unsigned long p, int n, long N)
{
    return evaluate_poly_at_eps(Coeffs{1}, p, n, N);
}

}  // namespace

TEST_CASE("minimal polynomial of eps_n")
{
    const long N = 12;
    Coeffs q5 = min_poly_eps(5, 1, N);
    CHECK(q5 == Coeffs{5, 10, 10, 5, 1});
    CHECK(min_poly_eps(3, 2, N).size() == 7);
    for (unsigned long p : {3ul, 5ul, 7ul})
        for (int n = 1; n <= 3; n++) {
            if (p == 7 && n == 3)
                continue;
            Coeffs f = min_poly_eps(p, n, N);
            CHECK(f.size() == (p - 1) * ppow(p, n - 1).get_ui() + 1);
            CHECK(f.back() == 1);
            CHECK(valuation(evaluate_poly_at_eps(f, p, n, N)).zero_within_precision);
            Coeffs prod = poly::mul(f, omega(p, n - 1, N), ppow(p, N));
            poly::trim(prod);
            CHECK(prod == omega(p, n, N));
        }
}

TEST_CASE("valuations of basic elements")
{
    const long N = 20;
    TruncatedSeries pi = TruncatedSeries::variable(5, 40, N);
    CHECK(valuation(evaluate_at_eps(pi, 1)).value == ExtValuation(1, 4));

    CyclotomicElement x(5, 1, Coeffs{5, 1}, N);
    CHECK(valuation(x).value == ExtValuation(1, 4));

    for (size_t j = 0; j < 20; j++)
        CHECK(valuation(CyclotomicElement::eps_power(5, 2, j, N)).value == ExtValuation((long) j, 20));

    /* ω_1(eps_2) = zeta_5 - 1 */
    CHECK(valuation(evaluate_poly_at_eps(omega(5, 1, N), 5, 2, N)).value == ExtValuation(1, 4));
}

TEST_CASE("phi(pi) at eps_2 against direct expansion")
{
    const long N = 20;
    TruncatedSeries f = phi(TruncatedSeries::variable(5, 400, N));
    CyclotomicElement viaseries = evaluate_at_eps(f, 2);

    CyclotomicElement e = CyclotomicElement::eps_power(5, 2, 1, N), one = one_at(5, 2, N);
    CyclotomicElement t = one + e, acc = one;
    for (int i = 0; i < 5; i++)
        acc = acc * t;
    CyclotomicElement direct = acc - one;
    CHECK(valuation(direct).value == ExtValuation(1, 4));
    CHECK(valuation(viaseries).value == ExtValuation(1, 4));
    CHECK(valuation(viaseries - direct).zero_within_precision);
}

TEST_CASE("phi^i(q) at eps_n")
{
    const long N = 20;
    for (unsigned long p : {3ul, 5ul})
        for (int n = 3; n <= 4; n++)
            for (int i = 1; i <= n - 2; i++) {
                if (p == 5 && n == 4)
                    continue;
                Coeffs phiq = min_poly_eps(p, i + 1, N);
                ExtValuation v = valuation(evaluate_poly_at_eps(phiq, p, n, N)).value;
                CHECK(v == ExtValuation(mpq_class(1, ppow(p, n - i - 1).get_ui())));
            }
}

TEST_CASE("evaluation is a ring homomorphism")
{
    std::mt19937_64 rng(test::kSeed + 20);
    for (int t = 0; t < 10; t++) {
        unsigned long p = t % 2 ? 3 : 5;
        int n = 1 + t % 3;
        const long N = 15;
        Coeffs a = test::random_coeffs(12, p, N, rng), b = test::random_coeffs(9, p, N, rng);
        mpz_class m = ppow(p, N);
        CyclotomicElement ea = evaluate_poly_at_eps(a, p, n, N), eb = evaluate_poly_at_eps(b, p, n, N);
        CHECK((ea * eb).coords() == evaluate_poly_at_eps(poly::mul(a, b, m), p, n, N).coords());
        CHECK((ea + eb).coords() == evaluate_poly_at_eps(poly::add(a, b, m), p, n, N).coords());
    }
}

TEST_CASE("d times the valuation of an integral element is an integer")
{
    std::mt19937_64 rng(test::kSeed + 21);
    for (int t = 0; t < 30; t++) {
        unsigned long p = t % 2 ? 3 : 5;
        int n = 1 + t % 3;
        const long N = 15;
        CyclotomicElement x = evaluate_poly_at_eps(test::random_coeffs(6, p, N, rng), p, n, N);
        CycloValuation v = valuation(x);
        if (v.zero_within_precision)
            continue;
        mpq_class d((long) ((p - 1) * ppow(p, n - 1).get_ui()));
        mpq_class s = v.value.value() * d;
        s.canonicalize();
        CHECK(s.get_den() == 1);
    }
}

TEST_CASE("truncation guard is recorded")
{
    TruncatedSeries f(5, Coeffs{0, 1}, 40, 20);
    CycloValuation v = valuation(evaluate_at_eps(f, 2));
    CHECK(v.value == ExtValuation(1, 20));
    CHECK(v.cap == ExtValuation(2));
    CHECK(v.guard == ExtValuation(39, 20));
    CHECK_THROWS_AS(exact_valuation(evaluate_at_eps(f, 2), 2), PrecisionError);
}

TEST_CASE("matrix evaluations")
{
    const long N = 20;
    SeriesMatrix id = series_identity(5, 200, N);
    CHECK(matrix_evaluate_at_eps(id, 2).ord().same_values(ValMatrix::from(0, inf, inf, 0)));

    FormParams fp;
    fp.N = N;
    for (int n = 1; n <= 3; n++) {
        SeriesMatrix Pinv = build_P_inverse(fp, 8 * ppow(5, n).get_ui(), N);
        ValMatrix o = matrix_evaluate_at_eps(Pinv, n).ord();
        CHECK(o(0, 0) == ExtValuation(1));
        CHECK(o(0, 1) == ExtValuation(0));
        CHECK(o(1, 1).is_inf());
        ExtValuation vq = valuation(evaluate_poly_at_eps(min_poly_eps(5, 1, N), 5, n, N)).value;
        if (n == 1)
            CHECK(o(1, 0).is_inf());
        else
            CHECK(o(1, 0) == vq * mpq_class(2));
    }

    /* H_2 = phi(P^-1) carries one factor; the two-factor table [[2/5, 1], ...]
     * belongs to H_3(eps_3) = P^-1(eps_1) P^-1(eps_2) */
    ValMatrix h2 = matrix_evaluate_at_eps(compute_Hn(fp, 2, 400, N), 2).ord();
    CHECK(h2.same_values(ValMatrix::from(1, 0, inf, inf)));
    ValMatrix h3 = matrix_evaluate_at_eps(compute_Hn(fp, 3, 2000, N), 3).ord();
    CHECK(h3.same_values(ValMatrix::from(ExtValuation(2, 5), 1, inf, inf)));
}
