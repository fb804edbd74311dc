#include "iwg/growth.hpp"
#include "iwg/poly.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace iwg;

namespace {

GrowthParams worked()
{
    GrowthParams gp;
    gp.p = 5;
    gp.k = 3;
    gp.j = 1;
    gp.v = ExtValuation(1);
    return gp;
}

CharacterInvariants chars(long mu1, long mu2, long l1, long l2, long kappa = 0, long r_inf = 0)
{
    CharacterInvariants c;
    c.mu1 = mu1;
    c.mu2 = mu2;
    c.lambda1 = l1;
    c.lambda2 = l2;
    c.kappa1 = c.kappa2 = kappa;
    c.r_inf = r_inf;
    return c;
}

mpq_class oracle(const Coeffs& f, int n, unsigned long p)
{
    TruncatedSeries F(p, f, f.size(), 40);
    return kobayashi_rank_oracle(F, n, p, 40, true).value;
}

}  // namespace

TEST_CASE("kobayashi rank closed forms")
{
    GrowthParams gp = worked();
    CHECK(kobayashi_rank_closed(2, 1, 0, gp, KobVariant::c).value == 20);
    CHECK(kobayashi_rank_closed(1, 0, 3, gp, KobVariant::b).value == 3);
    CHECK(kobayashi_rank_closed(3, 0, 2, gp, KobVariant::c).value == 2);
    gp.e = 2;
    gp.d = 2;
    CHECK(kobayashi_rank_closed(2, 1, 3, gp, KobVariant::b).value == 26);
    CHECK(kobayashi_rank_closed(2, 1, 3, gp, KobVariant::c).value == 23);
}

TEST_CASE("kobayashi threshold")
{
    CHECK(kobayashi_threshold(5, 0) == 1);
    CHECK(kobayashi_threshold(5, 3) == 1);
    CHECK(kobayashi_threshold(5, 4) == 2);
    CHECK(kobayashi_threshold(3, 5) == 2);
    CHECK(kobayashi_threshold(3, 6) == 3);
}

TEST_CASE("kobayashi oracle on small towers")
{
    for (unsigned long p : {3ul, 5ul})
        for (int n = 1; n <= 3; n++)
            CHECK(oracle(Coeffs{0, 1}, n, p) == 1);
    CHECK(oracle(Coeffs{5}, 2, 5) == 20);
    CHECK(oracle(Coeffs{5, 0, 1}, 1, 5) == 2);
    CHECK(oracle(Coeffs{5, 0, 1}, 2, 5) == 2);
}

TEST_CASE("kobayashi oracle equals the closed form above the threshold")
{
    std::mt19937_64 rng(test::kSeed + 40);
    GrowthParams gp;
    for (int t = 0; t < 12; t++) {
        unsigned long p = t % 2 ? 3 : 5;
        gp.p = p;
        long mu = (long) (rng() % 3), lambda = (long) (rng() % 6);
        Coeffs f = random_iwasawa_poly(p, mu, lambda, 40, rng);
        for (int n = kobayashi_threshold(p, lambda); n <= 3; n++)
            CHECK(oracle(f, n, p) == kobayashi_rank_closed(n, mu, lambda, gp, KobVariant::c).value);
    }
}

TEST_CASE("kobayashi rank of finite towers")
{
    std::mt19937_64 rng(test::kSeed + 41);
    for (int t = 0; t < 10; t++) {
        unsigned long p = t % 2 ? 3 : 2;
        FiniteGroup a, b;
        for (size_t i = 0; i < 1 + rng() % 3; i++)
            a.exps.push_back(1 + (int) (rng() % 3));
        for (size_t i = 0; i < 1 + rng() % 3; i++)
            b.exps.push_back(1 + (int) (rng() % 3));
        FiniteMap f = random_finite_map(a, b, p, rng);
        CHECK(finite_kobayashi_rank(f, p) == a.length() - b.length());
    }
    /* zero map Z/p^2 -> Z/p: ker length 2, coker length 1 */
    FiniteMap z{FiniteGroup{{2}}, FiniteGroup{{1}}, {{0}}};
    CHECK(finite_kobayashi_rank(z, 3) == 1);
}

TEST_CASE("modesty choice")
{
    GrowthParams gp = worked();
    CHECK(modesty_tau(3, chars(0, 0, 0, 0), gp) == 2);
    CHECK(modesty_tau(2, chars(0, 0, 0, 0), gp) == 1);
    CHECK(modesty_tau(2, chars(9, 0, 0, 0), gp) == 2);
    CHECK(modesty_tau(3, chars(0, 2, 0, 0), gp) == 1);

    std::mt19937_64 rng(test::kSeed + 42);
    for (int t = 0; t < 50; t++) {
        long m1 = (long) (rng() % 4), m2 = (long) (rng() % 4), s = (long) (rng() % 5);
        int n = 1 + (int) (rng() % 6);
        CHECK(modesty_tau(n, m1, m2, gp) == modesty_tau(n, m1 + s, m2 + s, gp));
    }
}

TEST_CASE("q star")
{
    GrowthParams gp = worked();
    CHECK(q_star(2, 1, gp) == ExtValuation(8));
    CHECK(q_star(3, 2, gp) == ExtValuation(8));
    CHECK(q_star(4, 1, gp) == ExtValuation(208));
    CHECK(q_star(1, 1, gp) == ExtValuation(4));

    FormParams fp;
    fp.N = 30;
    ExtValuation g = ExtValuation::infinity();
    CHECK(q_star_exact(2, 1, fp, &g) == ExtValuation(8));
    CHECK(g >= ExtValuation(2));
    /* n = 3 follows the inductive forms: 100 * 27/25 and 100 * 2/5 */
    CHECK(q_star_exact(3, 1, fp) == ExtValuation(108));
    CHECK(q_star_exact(3, 2, fp) == ExtValuation(40));
    CHECK(q_star(3, 2, gp, HForm::induction) == ExtValuation(40));

    gp.v = ExtValuation(1, 5);
    CHECK_THROWS_AS(q_star(2, 1, gp), HypothesisError);
}

TEST_CASE("growth bound")
{
    GrowthParams gp = worked();
    CharacterInvariants c = chars(0, 0, 2, 2, 1, 0);
    BoundBreakdown b = sha_growth_bound(3, c, gp);
    CHECK(b.tau == 2);
    CHECK(b.q_star == ExtValuation(8));
    CHECK(b.value == ExtValuation(11));
    CHECK(b.forms_agree);
    CHECK(bound_from_breakdown(b, gp) == b.value);

    BoundBreakdown z = sha_growth_bound(3, chars(0, 0, 0, 0), gp);
    CHECK(z.value == z.q_star);

    /* linear in r_inf with slope -d/e */
    gp.e = 2;
    gp.r = 3;
    gp.d = 6;
    for (long r = 0; r < 4; r++) {
        BoundBreakdown x = sha_growth_bound(2, chars(1, 0, 3, 1, 1, r), gp);
        BoundBreakdown y = sha_growth_bound(2, chars(1, 0, 3, 1, 1, r + 1), gp);
        CHECK(x.value.value() - y.value.value() == 3);
        CHECK(x.forms_agree);
    }
}

TEST_CASE("nabla of X_i")
{
    GrowthParams gp = worked();
    CharacterInvariants c = chars(1, 0, 3, 2, 1);
    NablaDecomposition a = nabla_X_i(2, c, gp, 1);
    CHECK_FALSE(a.residual.has_value());
    CHECK(a.lhs == 3 + 20 - 1);
    c.mu0 = 2;
    c.lambda0 = 1;
    NablaDecomposition b = nabla_X_i(2, c, gp, 1);
    REQUIRE(b.residual.has_value());
    CHECK(*b.residual == 0);
    CHECK(*b.mu_sum == 3);
    CHECK(*b.mu_tilde == -1);
    CHECK_THROWS_AS(nabla_X_i(2, c, gp, 3), DomainError);
}

TEST_CASE("tamagawa identities")
{
    GrowthParams gp = worked();
    CHECK(tamagawa_correction(2, gp) == 40);
    CHECK(tamagawa_defect(2, 7, 47, gp).value == 0);
    TamagawaDefect neg = tamagawa_defect(2, 7, 40, gp);
    CHECK(neg.value == -7);
    CHECK(neg.inconsistent);

    CharacterInvariants c = chars(0, 0, 2, 2, 1, 0);
    CHECK(tamagawa_growth_delta(3, c, gp) == ExtValuation(311));

    gp.j = 2;
    CHECK(tamagawa_correction(5, gp) == 0);
    CHECK(tamagawa_defect(2, 3, 10, gp).value == 7);
    CHECK(tamagawa_growth_delta(3, c, gp) == sha_growth_bound(3, c, gp).value);

    /* defects telescope: sum over n of (b_{n+1} - b_n - c_n) = b_last - b_first - sum c_n */
    gp.j = 1;
    std::mt19937_64 rng(test::kSeed + 43);
    std::vector<long> b{0};
    for (int n = 1; n <= 4; n++)
        b.push_back(b.back() + tamagawa_correction(n, gp).get_si() + (long) (rng() % 5));
    long total = 0;
    mpz_class corr = 0;
    for (int n = 1; n <= 4; n++) {
        total += tamagawa_defect(n, b[n - 1], b[n], gp).value;
        corr += tamagawa_correction(n, gp);
    }
    CHECK(total == b[4] - b[0] - corr.get_si());
}

TEST_CASE("modesty comparison")
{
    GrowthParams gp = worked();
    /* mu1 + v + K <= mu2 at odd n: left eventually smaller */
    ModestyComparison a = cor_modesty_compare(3, chars(0, 2, 1, 3), gp);
    CHECK(a.predicted_left_smaller);
    REQUIRE(a.threshold.has_value());
    for (int n = *a.threshold; n <= 9; n += 2)
        CHECK(cor_modesty_compare(n, chars(0, 2, 1, 3), gp).left_smaller);

    /* mu1 = mu2 at odd n: strictly reversed at every n */
    for (int n = 1; n <= 9; n += 2) {
        ModestyComparison c = cor_modesty_compare(n, chars(1, 1, 2, 2), gp);
        CHECK_FALSE(c.predicted_left_smaller);
        CHECK(c.right < c.left);
        CHECK(c.matches);
    }

    /* even branch with mu1 = 1, mu2 = 0: the prediction never takes hold,
       left - right = -2/3 + D_n / 3 grows instead of shrinking */
    for (int n = 2; n <= 8; n += 2) {
        ModestyComparison c = cor_modesty_compare(n, chars(1, 0, 1, 3), gp);
        CHECK(c.predicted_left_smaller);
        CHECK_FALSE(c.threshold.has_value());
        CHECK(c.slope == mpq_class(1, 3));
        CHECK(c.constant == mpq_class(-2, 3));
        CHECK(c.left.value() - c.right.value() == c.constant + mpq_class(gp.D(n)) * c.slope);
        CHECK(c.right < c.left);
    }
}

TEST_CASE("twist lemma")
{
    std::mt19937_64 rng(test::kSeed + 44);
    for (int t = 0; t < 8; t++) {
        unsigned long p = t % 2 ? 3 : 5;
        long mu = (long) (rng() % 2), lambda = 1 + (long) (rng() % 4);
        Coeffs f = random_iwasawa_poly(p, mu, lambda, 20, rng);
        for (int n = kobayashi_threshold(p, lambda); n <= 3; n++) {
            TwistCheck c = twist_lemma_check(f, p, n, 20);
            CHECK(c.equal);
            CHECK(c.min_guard >= ExtValuation(2));
        }
    }
}

TEST_CASE("growth hypotheses")
{
    GrowthParams gp = worked();
    CHECK_NOTHROW(gp.validate());
    gp.v = ExtValuation(1, 5);
    CHECK_THROWS_AS(gp.validate(), HypothesisError);
    gp = worked();
    gp.d = 2;
    CHECK_THROWS_AS(gp.validate(), HypothesisError);
    gp = worked();
    gp.j = 3;
    CHECK_THROWS_AS(gp.validate(), HypothesisError);
    CHECK(worked().K() == mpq_class(1, 3));
}
