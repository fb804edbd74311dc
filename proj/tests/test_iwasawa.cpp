#include "iwg/iwasawa.hpp"
#include "iwg/level.hpp"
#include "iwg/poly.hpp"
#include "iwg/smith.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace iwg;

namespace {

IwasawaElement random_element(unsigned long p, size_t len, long N, std::mt19937_64& rng)
{
    IwasawaElement g;
    g.p = p;
    g.polynomial = true;
    for (size_t a = 0; a + 1 < p; a++)
        g.comp.push_back(TruncatedSeries(p, test::random_coeffs(len, p, N, rng), len, N));
    return g;
}

/// rank over F_p by plain row reduction
size_t rank_mod_p(const ZMatrix& A, unsigned long p)
{
    std::vector<std::vector<long>> m(A.rows, std::vector<long>(A.cols));
    for (size_t i = 0; i < A.rows; i++)
        for (size_t j = 0; j < A.cols; j++)
            m[i][j] = mpz_class(A(i, j) % p).get_si();
    size_t r = 0;
    for (size_t c = 0; c < A.cols && r < A.rows; c++) {
        size_t piv = r;
        while (piv < A.rows && m[piv][c] == 0)
            piv++;
        if (piv == A.rows)
            continue;
        std::swap(m[piv], m[r]);
        long inv = mpz_class(inv_mod(m[r][c], p)).get_si();
        for (size_t i = 0; i < A.rows; i++) {
            if (i == r || m[i][c] == 0)
                continue;
            long f = m[i][c] * inv % (long) p;
            for (size_t j = c; j < A.cols; j++)
                m[i][j] = ((m[i][j] - f * m[r][j]) % (long) p + (long) p) % (long) p;
        }
        r++;
    }
    return r;
}

}  // namespace

TEST_CASE("omega family")
{
    const long N = 10;
    mpz_class mod = ppow(5, N);
    CHECK(omega(5, 0, N) == Coeffs{0, 1});
    Coeffs w1 = omega(5, 1, N);
    CHECK(w1 == Coeffs{0, 5, 10, 10, 5, 1});
    CHECK(omega_twisted(5, 2, 0, N) == omega(5, 2, N));

    /* omega_{n,m}(X) = omega_n(u^-m (1+X) - 1) by composition */
    for (int n = 0; n <= 2; n++)
        for (int m = 1; m <= 2; m++) {
            mpz_class s = CyclotomicUnit(5).power(-m, 5, N);
            Coeffs lin = {s - 1, s};
            poly::reduce(lin, mod);
            Coeffs w = omega(5, n, N);
            /* Horner: w(lin) */
            Coeffs c{0};
            for (size_t i = w.size(); i-- > 0;) {
                c = poly::mul(c, lin, mod);
                c[0] += w[i];
                poly::reduce(c, mod);
            }
            Coeffs t = omega_twisted(5, n, m, N);
            poly::trim(c);
            poly::trim(t);
            CHECK(c == t);
        }
    for (int m = 0; m <= 2; m++) {
        Coeffs t = omega_tilde(5, 1, m, N);
        poly::trim(t);
        CHECK(t.size() == (size_t) (m + 1) * 5 + 1);
    }
}

TEST_CASE("cyclotomic unit and discrete log")
{
    CyclotomicUnit u(5);
    CHECK(u.u == 6);
    CHECK(u.u % 5 == 1);
    CHECK(u.u % 25 != 1);
    for (size_t k = 0; k < 25; k++)
        CHECK(dlog_u(u.power((long) k, 5, 3), 5, 3) == k);
}

TEST_CASE("twist laws")
{
    std::mt19937_64 rng(test::kSeed + 10);
    for (int t = 0; t < 6; t++) {
        unsigned long p = t % 2 ? 3 : 5;
        IwasawaElement g = random_element(p, 6, 12, rng);
        CHECK(twist(g, 0).congruent(g));
        CHECK(twist(twist(g, 1), -1).congruent(g));
        CHECK(twist(twist(g, 1), 1).congruent(twist(g, 2)));
    }
}

TEST_CASE("twist preserves mu and lambda of every component")
{
    std::mt19937_64 rng(test::kSeed + 11);
    for (int t = 0; t < 10; t++) {
        unsigned long p = t % 2 ? 3 : 5;
        IwasawaElement g;
        g.p = p;
        g.polynomial = true;
        for (size_t a = 0; a + 1 < p; a++) {
            long mu = (long) (rng() % 3), lambda = (long) (rng() % 4);
            Coeffs c = test::random_coeffs((size_t) lambda + 3, p, 12, rng);
            for (long i = 0; i < lambda; i++)
                c[i] *= p;
            if (mpz_divisible_ui_p(c[lambda].get_mpz_t(), p))
                c[lambda] += 1;
            for (auto& x : c)
                x *= ppow(p, mu);
            g.comp.push_back(TruncatedSeries(p, c, c.size(), 16));
        }
        IwasawaElement h = twist(g, 1);
        for (size_t a = 0; a + 1 < p; a++) {
            IwasawaInvariants before = iwasawa_invariants(g.comp[a]);
            /* Tw(e_a) = e_(a-1) */
            IwasawaInvariants after = iwasawa_invariants(h.component((long) a - 1));
            CHECK(before.mu == after.mu);
            CHECK(before.lambda == after.lambda);
        }
    }
}

TEST_CASE("mellin of 1 and of gamma_1")
{
    for (unsigned long p : {3ul, 5ul}) {
        const size_t M = 30;
        const long N = 10;
        TruncatedSeries one_plus_pi(p, Coeffs{1, 1}, M, N);
        CHECK(mellin(IwasawaElement::one(p, 4, N), M, N).congruent(one_plus_pi));
        IwasawaElement g1 = IwasawaElement::from_gamma1(TruncatedSeries(p, Coeffs{1, 1}, 2, N), true);
        CHECK(mellin(g1, M, N).congruent(gamma_act(one_plus_pi, 1 + p)));
    }
}

TEST_CASE("mellin lands in psi = 0 and intertwines twist with the boundary operator")
{
    std::mt19937_64 rng(test::kSeed + 12);
    for (int t = 0; t < 6; t++) {
        unsigned long p = t % 2 ? 3 : 5;
        const size_t M = 60;
        const long N = 12;
        IwasawaElement g = random_element(p, 4, N, rng);
        TruncatedSeries h = mellin(g, M, N);
        CHECK(psi(h).is_zero());

        TruncatedSeries lhs = mellin(twist(g, 1), M, N);
        TruncatedSeries rhs = boundary_op(h);
        size_t Mc = std::min(lhs.M(), rhs.M());
        CHECK(lhs.truncated(Mc).congruent(rhs.truncated(Mc)));
    }
}

TEST_CASE("mellin inverse")
{
    std::mt19937_64 rng(test::kSeed + 13);
    for (unsigned long p : {3ul, 5ul}) {
        const long N = 8;
        for (int n = 1; n <= 2; n++) {
            size_t M = 8 * ppow(p, n).get_ui();
            IwasawaElement one = mellin_inverse(TruncatedSeries(p, Coeffs{1, 1}, M, N), n);
            CHECK(one.congruent(IwasawaElement::one(p, one.comp[0].M(), N)));

            size_t len = ppow(p, n - 1).get_ui();
            IwasawaElement g = random_element(p, len, N, rng);
            IwasawaElement back = mellin_inverse(mellin(g, M, N), n);
            CHECK(back.congruent(g));
        }
    }
}

TEST_CASE("mellin inverse at level rings with m > 0")
{
    std::mt19937_64 rng(test::kSeed + 14);
    for (int m = 0; m <= 1; m++) {
        LevelRing R(5, 2, m, 10);
        IwasawaElement g = random_element(5, R.dim() / 5, 10, rng);
        Coeffs h = mellin_level(R, g);
        CHECK(in_psi_zero(R, h, 10));
        CHECK(mellin_inverse_level(R, h, 10).congruent(g));
    }
}

TEST_CASE("mellin matrix rank")
{
    /* p = 3 at n = 1: full rank 6 over Z/p^N */
    ZMatrix A = mellin_matrix(3, 2, 0, 8);
    CHECK(A.cols == 6);
    CHECK(smith_valuations(A, 3, 8).unit_count() == 6);
    CHECK(rank_mod_p(A, 3) == 6);

    for (unsigned long p : {3ul, 5ul})
        for (int L = 1; L <= 2; L++)
            for (int m = 0; m <= 1; m++) {
                ZMatrix B = mellin_matrix(p, L, m, 6);
                size_t want = (size_t) (m + 1) * (p - 1) * ppow(p, L - 1).get_ui();
                CHECK(B.cols == want);
                CHECK(rank_mod_p(B, p) == want);
                CHECK(B.a == mellin_matrix_series(p, L, m, 6).a);
            }
}

TEST_CASE("inverse Mellin preimage of (1+pi) phi(f) keeps mu and lambda")
{
    std::mt19937_64 rng(test::kSeed + 15);
    for (int t = 0; t < 10; t++) {
        unsigned long p = t % 2 ? 3 : 5;
        const long N = 16;
        long mu = (long) (rng() % 3), lambda = (long) (rng() % 6);
        Coeffs f = test::random_coeffs((size_t) lambda + 2, p, N - 3, rng);
        for (long i = 0; i < lambda; i++)
            f[i] *= p;
        if (mpz_divisible_ui_p(f[lambda].get_mpz_t(), p))
            f[lambda] += 1;
        for (auto& x : f)
            x *= ppow(p, mu);
        LevelRing R2(p, 2, 0, N);
        LevelRing R3 = R2.up();
        Coeffs h = R3.mul(R3.T_power(1), R2.phi(R2.from_pi_poly(f)));
        IwasawaElement g = mellin_inverse_level(R3, h, N);
        IwasawaInvariants gi = iwasawa_invariants(g.component(0));
        CHECK(gi.mu == mu);
        CHECK(gi.lambda == lambda);
    }
}
