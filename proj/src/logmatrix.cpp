#include "iwg/logmatrix.hpp"

#include "iwg/poly.hpp"

#include <algorithm>

namespace iwg {

ExtValuation FormParams::v() const
{
    if (sgn(a_p) == 0)
        return ExtValuation::infinity();
    return ExtValuation(val_p(a_p, p));
}

void FormParams::validate() const
{
    if (p < 3 || !is_prime(p))
        throw HypothesisError("p must be an odd prime (got " + std::to_string(p) + ")");
    if (k < 3 || (unsigned long) k > p)
        throw HypothesisError("weight must satisfy 3 <= k <= p (got k=" + std::to_string(k) + ")");
    if (j < 1 || j > k - 1)
        throw HypothesisError("j must lie in 1..k-1");
    if (mpz_divisible_ui_p(eps_p.get_mpz_t(), p))
        throw HypothesisError("eps(p) must be a p-adic unit");
    if (N < 2)
        throw HypothesisError("working precision N must be at least 2");
    ExtValuation vv = v();
    if (vv <= ExtValuation(0))
        throw HypothesisError("a_p must be non-ordinary (v > 0)");
    if (vv * mpq_class(2) <= ExtValuation(mpq_class(k - 1, (long) p)))
        throw HypothesisError("need 2 ord(a_p) > (k-1)/p");
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const
{
    RationalMatrix r;
    r.p = p;
    r.B = B + o.B;
    r.N = std::min(N, o.N);
    mpz_class m = ppow(p, r.N);
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++) {
            r.num[i][j] = num[i][0] * o.num[0][j] + num[i][1] * o.num[1][j];
            reduce(r.num[i][j], m);
        }
    return r;
}

mpq_class RationalMatrix::entry(int i, int j) const
{
    /* balanced residue, so -1 reads as -1 rather than p^N - 1 */
    mpz_class m = ppow(p, N), x = num[i][j] % m;
    if (x < 0)
        x += m;
    if (2 * x > m)
        x -= m;
    mpq_class q(x, ppow(p, B));
    q.canonicalize();
    return q;
}

RationalMatrix identity_rational(unsigned long p, long N)
{
    RationalMatrix r;
    r.p = p;
    r.N = N;
    r.num[0][0] = 1;
    r.num[1][1] = 1;
    return r;
}

RationalMatrix build_A(const FormParams& fp)
{
    RationalMatrix a;
    a.p = fp.p;
    a.B = fp.k - 1;
    a.N = fp.N + fp.k - 1;
    mpz_class m = ppow(fp.p, a.N);
    a.num[0][1] = -fp.eps_p;
    a.num[1][0] = ppow(fp.p, fp.k - 1);
    a.num[1][1] = fp.a_p;
    for (auto& row : a.num)
        for (auto& x : row)
            reduce(x, m);
    return a;
}

RationalMatrix rational_power(const RationalMatrix& a, int n)
{
    RationalMatrix r = identity_rational(a.p, a.N);
    for (int i = 0; i < n; i++)
        r = r * a;
    return r;
}

std::array<std::array<Coeffs, 2>, 2> P_inverse_polys(const FormParams& fp, long N)
{
    mpz_class m = ppow(fp.p, N);
    Coeffs u = u_polynomial(fp.p, N), q = q_polynomial(fp.p, N);
    Coeffs U{1}, Q{1};
    for (int i = 0; i < fp.k - 1; i++) {
        U = poly::mul(U, u, m);
        Q = poly::mul(Q, q, m);
    }
    mpz_class ei = inv_mod(fp.eps_p, m);
    std::array<std::array<Coeffs, 2>, 2> r;
    r[0][0] = poly::scale(U, fp.a_p * ei, m);
    r[0][1] = U;
    r[1][0] = poly::scale(Q, -ei, m);
    r[1][1] = Coeffs{};
    return r;
}

SeriesMatrix build_P_inverse(const FormParams& fp, size_t M, long N)
{
    auto e = P_inverse_polys(fp, N);
    SeriesMatrix r;
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++)
            r[i][j] = TruncatedSeries(fp.p, e[i][j], M, N);
    return r;
}

SeriesMatrix build_P(const FormParams& fp, size_t M, long N)
{
    unsigned long p = fp.p;
    /* 1/q = sum_i (-1)^i pi^{i(p-1)} delta^{i+1} / p^{i+1}; the last term
     * below pi^M carries the largest denominator p^s */
    long s = 1 + (long) ((M - 1) / (p - 1));
    long Bq = s * (fp.k - 1);
    long Nw = N + Bq;
    TruncatedSeries delta = delta_element(p, M, Nw);
    TruncatedSeries w(p, M, Nw), dpow = delta;
    for (long i = 0; (size_t) i * (p - 1) < M; i++) {
        Coeffs mono((size_t) i * (p - 1) + 1);
        mono.back() = ppow(p, s - 1 - i);
        if (i % 2)
            mono.back() = -mono.back();
        w = w + TruncatedSeries(p, mono, M, Nw) * dpow;
        dpow = dpow * delta;
    }
    TruncatedSeries wk = TruncatedSeries::one(p, M, Nw);
    TruncatedSeries dk = TruncatedSeries::one(p, M, N);
    TruncatedSeries dN = delta.with_precision(N);
    for (int i = 0; i < fp.k - 1; i++) {
        wk = wk * w;
        dk = dk * dN;
    }
    SeriesMatrix r;
    r[0][0] = TruncatedSeries(p, M, N);
    r[0][1] = TruncatedSeries(p, wk.scaled(-fp.eps_p).coeffs(), M, Nw, Bq);
    r[1][0] = dk;
    r[1][1] = TruncatedSeries(p, wk.scaled(fp.a_p).coeffs(), M, Nw, Bq);
    return r;
}

SeriesMatrix series_identity(unsigned long p, size_t M, long N)
{
    SeriesMatrix r;
    r[0][0] = TruncatedSeries::one(p, M, N);
    r[1][1] = TruncatedSeries::one(p, M, N);
    r[0][1] = TruncatedSeries(p, M, N);
    r[1][0] = TruncatedSeries(p, M, N);
    return r;
}

SeriesMatrix series_matmul(const SeriesMatrix& a, const SeriesMatrix& b)
{
    SeriesMatrix r;
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++)
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return r;
}

SeriesMatrix series_phi(const SeriesMatrix& a)
{
    SeriesMatrix r;
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++)
            r[i][j] = phi(a[i][j]);
    return r;
}

SeriesMatrix series_scale(const SeriesMatrix& a, const RationalMatrix& s)
{
    SeriesMatrix r;
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++) {
            TruncatedSeries x = a[0][j].scaled(s.num[i][0]) + a[1][j].scaled(s.num[i][1]);
            r[i][j] = x.with_precision(s.N).div_p_power(s.B);
        }
    return r;
}

SeriesMatrix compute_Hn(const FormParams& fp, int n, size_t M, long N)
{
    if (n < 1)
        throw DomainError("H_n needs n >= 1");
    SeriesMatrix pinv = build_P_inverse(fp, M, N);
    SeriesMatrix h = series_identity(fp.p, M, N);
    for (int i = 1; i < n; i++)
        h = series_phi(series_matmul(h, pinv));
    return h;
}

LevelMatrix level_identity(const LevelRing& R)
{
    LevelMatrix r;
    r[0][0] = R.one();
    r[1][1] = R.one();
    r[0][1] = R.zero();
    r[1][0] = R.zero();
    return r;
}

LevelMatrix level_matmul(const LevelRing& R, const LevelMatrix& a, const LevelMatrix& b)
{
    LevelMatrix r;
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++)
            r[i][j] = R.add(R.mul(a[i][0], b[0][j]), R.mul(a[i][1], b[1][j]));
    return r;
}

LevelMatrix level_phi(const LevelRing& R, const LevelMatrix& a)
{
    LevelMatrix r;
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++)
            r[i][j] = R.phi(a[i][j]);
    return r;
}

LevelMatrix P_inverse_level(const FormParams& fp, const LevelRing& R)
{
    auto e = P_inverse_polys(fp, R.N());
    LevelMatrix r;
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++)
            r[i][j] = R.from_pi_poly(e[i][j]);
    return r;
}

LevelMatrix Hn_level(const FormParams& fp, int n, int L, int m, long N)
{
    if (n < 1 || L < n - 1)
        throw DomainError("H_n in Q_{L,m} needs n >= 1 and L >= n-1");
    LevelRing R(fp.p, L - (n - 1), m, N);
    LevelMatrix h = level_identity(R);
    for (int i = 1; i < n; i++) {
        h = level_phi(R, level_matmul(R, h, P_inverse_level(fp, R)));
        R = R.up();
    }
    return h;
}

IwasawaMatrix script_H(const FormParams& fp, int n, int L, int m, long N)
{
    LevelMatrix h = Hn_level(fp, n, L, m, N);
    LevelRing R(fp.p, L, m, N);
    Coeffs T = R.T_power(1);
    IwasawaMatrix r;
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++)
            r[i][j] = mellin_inverse_level(R, R.mul(T, h[i][j]), N);
    return r;
}

static void check_identity_mod(const SeriesMatrix& M, int order)
{
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++) {
            const TruncatedSeries& e = M[i][j];
            mpz_class mod = e.modulus();
            for (int d = 0; d < order && (size_t) d < e.M(); d++) {
                mpz_class c = e.coeff(d);
                if (i == j && d == 0)
                    c -= ppow(e.p(), e.B());
                reduce(c, mod);
                if (sgn(c))
                    throw InvalidChangeOfBasis("change of basis is not I modulo pi^" +
                                               std::to_string(order));
            }
        }
}

IwasawaMatrix logarithmic_matrix(const SeriesMatrix& M, const FormParams& fp, int L, int m,
                                 bool check_mmodulo)
{
    if (L < 1)
        throw DomainError("logarithmic matrix needs level L >= 1");
    if (check_mmodulo)
        check_identity_mod(M, fp.k - 1);
    long B = 0, N = LONG_MAX;
    for (auto& row : M)
        for (auto& e : row)
            B = std::max(B, e.B());
    SeriesMatrix Mb;
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++) {
            Mb[i][j] = M[i][j].with_denominator(B);
            N = std::min(N, Mb[i][j].N());
        }
    LevelRing lo(fp.p, L - 1, m, N);
    LevelRing hi = lo.up();
    long got = N;
    LevelMatrix x;
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++) {
            long g = 0;
            x[i][j] = lo.phi(lo.from_series(Mb[i][j], g));
            got = std::min(got, g);
        }
    if (got < 1)
        throw PrecisionError("logarithmic matrix: truncation too small for level " +
                             std::to_string(L));
    RationalMatrix A = build_A(fp);
    Coeffs T = hi.T_power(1);
    IwasawaMatrix r;
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++) {
            Coeffs y = hi.add(hi.scale(x[0][j], A.num[i][0]), hi.scale(x[1][j], A.num[i][1]));
            r[i][j] = mellin_inverse_level(hi, hi.mul(T, y), got, B + A.B);
        }
    return r;
}

SeriesMatrix chain_matrix(const SeriesMatrix& R, const FormParams& fp, int n)
{
    if (n < 1)
        throw DomainError("chain matrix needs n >= 1");
    size_t M = R[0][0].M();
    long N = R[0][0].N();
    SeriesMatrix pinv = build_P_inverse(fp, M, N);
    SeriesMatrix g = series_identity(fp.p, M, N), r = R;
    for (int i = 1; i < n; i++) {
        g = series_matmul(series_phi(g), pinv);
        r = series_phi(r);
    }
    return series_scale(series_matmul(r, g), rational_power(build_A(fp), n - 1));
}

CongruenceReport check_Mlog_congruence(const SeriesMatrix& M, const FormParams& fp, int n,
                                       bool check_mmodulo)
{
    int m = fp.k - 2;
    IwasawaMatrix lhs = logarithmic_matrix(M, fp, n, m, check_mmodulo);
    IwasawaMatrix h = script_H(fp, n, n, m, fp.N);
    RationalMatrix An = rational_power(build_A(fp), n);

    CongruenceReport rep;
    rep.n = n;
    rep.B = (long) (fp.k - 1) * n;
    rep.target = fp.N - rep.B;
    rep.remainder_val = ExtValuation::infinity();
    rep.achieved_N = LONG_MAX;
    bool zero = true;
    long abs_prec = LONG_MAX;
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++)
            for (size_t a = 0; a < lhs[i][j].comp.size(); a++) {
                TruncatedSeries rhs = h[0][j].comp[a].scaled(An.num[i][0]) +
                                      h[1][j].comp[a].scaled(An.num[i][1]);
                rhs = rhs.with_precision(An.N).div_p_power(An.B);
                TruncatedSeries d = lhs[i][j].comp[a] - rhs;
                rep.achieved_N = std::min(rep.achieved_N, d.N());
                abs_prec = std::min(abs_prec, d.abs_precision());
                rep.remainder_val = vmin(rep.remainder_val, d.min_coeff_valuation());
                zero = zero && d.is_zero();
            }
    rep.pass = zero && abs_prec >= rep.target;
    return rep;
}

ValMatrix evaluationP_factor(const FormParams& fp, int i)
{
    if (i < 1)
        throw DomainError("factor index must be >= 1");
    ExtValuation lower = ExtValuation::infinity();
    if (i >= 2)
        lower = ExtValuation(mpq_class(fp.k - 1, ppow(fp.p, i - 1)));
    ValMatrix r = ValMatrix::from(fp.v(), ExtValuation(0), lower, ExtValuation::infinity());
    r.unique[1][1] = false;
    if (i == 1)
        r.unique[1][0] = false;
    if (fp.v().is_inf())
        r.unique[0][0] = false;
    return r;
}

ValMatrix evaluationP_factor_exact(const FormParams& fp, int i)
{
    auto e = P_inverse_polys(fp, fp.N);
    std::array<std::array<CyclotomicElement, 2>, 2> x;
    for (int a = 0; a < 2; a++)
        for (int b = 0; b < 2; b++)
            x[a][b] = evaluate_poly_at_eps(e[a][b], fp.p, i, fp.N);
    return make_cyclo_matrix(x).ord();
}

ValMatrix h_closed_form(unsigned long p, int k, const ExtValuation& v, int n, HForm form)
{
    if (n < 1)
        throw DomainError("closed form needs n >= 1");
    auto term = [&](int e) { return ExtValuation(mpq_class(k - 1, ppow(p, e))); };
    ExtValuation a(0), b(0);
    if (n % 2) {
        ExtValuation odd(0), even(0);
        for (int i = 1; i <= (n - 1) / 2; i++) {
            odd = odd + term(2 * i - 1);
            even = even + term(2 * i);
        }
        if (form == HForm::statement) {
            a = v + odd;
            b = even;
        } else {
            a = v + even;
            b = odd;
        }
    } else {
        b = v;
        for (int i = 1; i <= n / 2; i++)
            a = a + term(2 * i - 1);
        for (int i = 1; i <= n / 2 - 1; i++)
            b = b + term(2 * i);
    }
    ValMatrix r = ValMatrix::from(a, b, ExtValuation::infinity(), ExtValuation::infinity());
    r.unique[1][0] = r.unique[1][1] = false;
    return r;
}

static ValMatrix closed_form(const FormParams& fp, int n)
{
    return h_closed_form(fp.p, fp.k, fp.v(), n, HForm::statement);
}

static ValMatrix tropical_form(const FormParams& fp, int n)
{
    ValMatrix r = ValMatrix::identity();
    for (int i = 1; i <= n; i++)
        r = trop_matmul(r, evaluationP_factor_exact(fp, i));
    return r;
}

static ValMatrix evaluate_level_matrix(const LevelRing& R, const LevelMatrix& h, int j,
                                       ExtValuation* min_guard)
{
    std::array<std::array<CyclotomicElement, 2>, 2> x;
    for (int a = 0; a < 2; a++)
        for (int b = 0; b < 2; b++)
            x[a][b] = R.evaluate(h[a][b], j);
    CycloMatrix c = make_cyclo_matrix(x);
    if (min_guard)
        for (auto& row : c.val)
            for (auto& v : row)
                if (!v.zero_within_precision)
                    *min_guard = vmin(*min_guard, v.guard);
    return c.ord();
}

static ValMatrix exact_form(const FormParams& fp, int n, ExtValuation* min_guard)
{
    LevelRing R(fp.p, n + 1, 0, fp.N);
    return evaluate_level_matrix(R, Hn_level(fp, n + 1, n + 1, 0, fp.N), n + 1, min_guard);
}

ValMatrix valuation_matrix_Hn(const FormParams& fp, int n, HnMethod method)
{
    if (n < 1)
        throw DomainError("valuation table needs n >= 1");
    switch (method) {
    case HnMethod::tropical:
        return tropical_form(fp, n);
    case HnMethod::exact:
        return exact_form(fp, n, nullptr);
    case HnMethod::closed_form:
        return closed_form(fp, n);
    }
    return {};
}

static bool first_row_equal(const ValMatrix& a, const ValMatrix& b)
{
    return a(0, 0) == b(0, 0) && a(0, 1) == b(0, 1);
}

ValMatrix script_H_valuations(const FormParams& fp, int n, ExtValuation* min_guard)
{
    IwasawaMatrix sh = script_H(fp, n + 1, n + 1, 0, fp.N);
    std::array<std::array<CyclotomicElement, 2>, 2> x;
    for (int a = 0; a < 2; a++)
        for (int b = 0; b < 2; b++)
            x[a][b] = evaluate_component(sh[a][b], 0, n);
    CycloMatrix c = make_cyclo_matrix(x);
    if (min_guard)
        for (auto& row : c.val)
            for (auto& v : row)
                if (!v.zero_within_precision)
                    *min_guard = vmin(*min_guard, v.guard);
    return c.ord();
}

HnTable hn_table(const FormParams& fp, int n)
{
    HnTable t;
    t.n = n;
    t.closed = closed_form(fp, n);
    t.induction = h_closed_form(fp.p, fp.k, fp.v(), n, HForm::induction);
    t.tropical = tropical_form(fp, n);
    t.min_guard = ExtValuation::infinity();
    t.exact = exact_form(fp, n, &t.min_guard);

    LevelRing Rn(fp.p, n, 0, fp.N);
    t.literal = evaluate_level_matrix(Rn, Hn_level(fp, n, n, 0, fp.N), n, nullptr);
    t.script = script_H_valuations(fp, n, &t.min_guard);

    auto agree = [&](const ValMatrix& ref) {
        return first_row_equal(ref, t.tropical) && first_row_equal(ref, t.exact) &&
               first_row_equal(ref, t.script);
    };
    t.first_row_agree = agree(t.closed);
    t.induction_agree = agree(t.induction);
    return t;
}

}  // namespace iwg
