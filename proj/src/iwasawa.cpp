#include "iwg/iwasawa.hpp"

#include "iwg/poly.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace iwg {

namespace {

/* teich(b) for b = 1..p-1 modulo p^prec; index 0 unused */
std::vector<mpz_class> teich_table(unsigned long p, long prec)
{
    std::vector<mpz_class> t(p);
    for (unsigned long b = 1; b < p; b++)
        t[b] = teichmuller(mpz_class(b), p, prec);
    return t;
}

/* chi values teich(b)^a mod m, a in 0..p-2 */
mpz_class char_value(const mpz_class& tb, long a, unsigned long p, const mpz_class& m)
{
    long e = ((a % (long) (p - 1)) + (long) (p - 1)) % (long) (p - 1);
    mpz_class r;
    mpz_powm_ui(r.get_mpz_t(), tb.get_mpz_t(), (unsigned long) e, m.get_mpz_t());
    return r;
}

/* group-ring coordinates c[b][t] of sum_a e_a g_a(Y) */
std::vector<Coeffs> to_group_ring(const std::vector<Coeffs>& yc, unsigned long p,
                                  const std::vector<mpz_class>& teich, const mpz_class& m)
{
    size_t len = 0;
    for (auto& c : yc)
        len = std::max(len, c.size());
    mpz_class inv = inv_mod(mpz_class(p - 1), m);
    std::vector<Coeffs> out(p, Coeffs(len));
    for (unsigned long b = 1; b < p; b++) {
        for (size_t a = 0; a + 1 < p; a++) {
            mpz_class chi = char_value(teich[b], -(long) a, p, m);
            for (size_t t = 0; t < yc[a].size(); t++)
                mpz_addmul(out[b][t].get_mpz_t(), chi.get_mpz_t(), yc[a][t].get_mpz_t());
        }
        for (auto& x : out[b]) {
            x *= inv;
            reduce(x, m);
        }
    }
    return out;
}

/* inverse of to_group_ring: g_a,t = sum_b c_{b,t} teich(b)^a */
std::vector<Coeffs> from_group_ring(const std::vector<Coeffs>& c, unsigned long p,
                                    const std::vector<mpz_class>& teich, const mpz_class& m)
{
    size_t len = c[1].size();
    std::vector<Coeffs> out(p - 1, Coeffs(len));
    for (size_t a = 0; a + 1 < p; a++) {
        for (unsigned long b = 1; b < p; b++) {
            mpz_class chi = char_value(teich[b], (long) a, p, m);
            for (size_t t = 0; t < len; t++)
                mpz_addmul(out[a][t].get_mpz_t(), chi.get_mpz_t(), c[b][t].get_mpz_t());
        }
        poly::reduce(out[a], m);
    }
    return out;
}

struct SolverCache {
    std::mutex mu;
    std::map<std::tuple<unsigned long, int, int, long, unsigned long>, std::shared_ptr<ModSolver>> m;
};

SolverCache& solver_cache()
{
    static SolverCache c;
    return c;
}

/* rows j = b mod p of Q_{L,m}, columns T^{teich(b) u^t}, t < (m+1) p^(L-1) */
std::shared_ptr<ModSolver> block_solver(const LevelRing& R, unsigned long b,
                                        const std::vector<mpz_class>& teich)
{
    auto key = std::make_tuple(R.p(), R.level(), R.m(), R.N(), b);
    auto& cache = solver_cache();
    {
        std::lock_guard<std::mutex> lk(cache.mu);
        auto it = cache.m.find(key);
        if (it != cache.m.end())
            return it->second;
    }
    unsigned long p = R.p();
    size_t K = R.dim() / p;
    ZMatrix A(K, K);
    mpz_class big = ppow(p, R.level() + R.N());
    mpz_class c = teich[b];
    mpz_class u = 1 + p;
    for (size_t t = 0; t < K; t++) {
        Coeffs col = R.T_power(c);
        for (size_t i = 0; i < K; i++)
            A(i, t) = col[b + i * p];
        c *= u;
        reduce(c, big);
    }
    auto s = std::make_shared<ModSolver>(A, p, R.N());
    std::lock_guard<std::mutex> lk(cache.mu);
    cache.m.emplace(key, s);
    return s;
}

}  // namespace

CyclotomicUnit::CyclotomicUnit(unsigned long p) : u(1 + p) {}

mpz_class CyclotomicUnit::power(long m, unsigned long p, long N) const
{
    mpz_class mod = ppow(p, N), r;
    mpz_class base = m >= 0 ? u : inv_mod(u, mod);
    mpz_powm_ui(r.get_mpz_t(), base.get_mpz_t(), (unsigned long) std::labs(m), mod.get_mpz_t());
    return r;
}

IwasawaElement IwasawaElement::from_gamma1(const TruncatedSeries& f, bool polynomial)
{
    IwasawaElement g;
    g.p = f.p();
    g.comp.assign(f.p() - 1, f);
    g.polynomial = polynomial;
    return g;
}

IwasawaElement IwasawaElement::one(unsigned long p, size_t M, long N)
{
    return from_gamma1(TruncatedSeries::one(p, M, N), true);
}

const TruncatedSeries& IwasawaElement::component(long a) const
{
    long k = (long) p - 1;
    return comp[(size_t) (((a % k) + k) % k)];
}

bool IwasawaElement::in_gamma1() const
{
    for (auto& c : comp)
        if (!c.congruent(comp[0]))
            return false;
    return true;
}

bool IwasawaElement::congruent(const IwasawaElement& o) const
{
    if (p != o.p || comp.size() != o.comp.size())
        return false;
    for (size_t a = 0; a < comp.size(); a++)
        if (!comp[a].congruent(o.comp[a]))
            return false;
    return true;
}

Coeffs omega(unsigned long p, int n, long N)
{
    return omega_twisted(p, n, 0, N);
}

Coeffs omega_twisted(unsigned long p, int n, int m, long N)
{
    mpz_class mod = ppow(p, N);
    size_t P = ppow(p, n).get_ui();
    /* u^{-m p^n} (1+X)^{p^n} - 1 */
    mpz_class s = CyclotomicUnit(p).power(-(long) m * (long) P, p, N);
    Coeffs r(P + 1);
    for (size_t i = 0; i <= P; i++) {
        mpz_bin_uiui(r[i].get_mpz_t(), P, i);
        r[i] *= s;
    }
    r[0] -= 1;
    poly::reduce(r, mod);
    return r;
}

Coeffs omega_tilde(unsigned long p, int n, int m, long N)
{
    mpz_class mod = ppow(p, N);
    Coeffs r{1};
    for (int i = 0; i <= m; i++)
        r = poly::mul(r, omega_twisted(p, n, i, N), mod);
    return r;
}

IwasawaElement twist(const IwasawaElement& g, long m)
{
    unsigned long p = g.p;
    IwasawaElement r;
    r.p = p;
    r.polynomial = g.polynomial;
    r.comp.resize(p - 1);
    if (m == 0) {
        r = g;
        return r;
    }
    for (size_t a = 0; a + 1 < p; a++) {
        const TruncatedSeries& f = g.comp[a];
        long N = f.N();
        size_t M = f.M();
        if (!g.polynomial) {
            /* missing terms X^i, i >= M, feed coefficient j with valuation >= t (M - j) */
            long t = 1 + val_p(mpz_class(m), p);
            size_t Mo = (M + 1) / 2;
            N = std::min<long>(N, t * (long) (M - Mo + 1));
            M = Mo;
        }
        mpz_class mod = f.modulus();
        mpz_class c = CyclotomicUnit(p).power(m, p, f.N());
        Coeffs cf = f.coeffs();
        poly::trim(cf);
        Coeffs y = poly::taylor_shift(cf, -1, mod);
        y = poly::scale_var(y, c, mod);
        Coeffs x = poly::taylor_shift(y, 1, mod);
        size_t outM = g.polynomial ? std::max(M, x.size()) : M;
        long k = (long) p - 1;
        size_t dst = (size_t) ((((long) a - m) % k + k) % k);
        r.comp[dst] = TruncatedSeries(p, x, outM, N, f.B());
    }
    return r;
}

TruncatedSeries mellin(const IwasawaElement& g, size_t M, long N)
{
    unsigned long p = g.p;
    long B = 0;
    size_t Mg = SIZE_MAX;
    for (auto& c : g.comp) {
        B = std::max(B, c.B());
        Mg = std::min(Mg, c.M());
    }
    for (auto& c : g.comp)
        N = std::min(N, c.N() + (B - c.B()));
    if (!g.polynomial) {
        /* the tail X^Mg lands in phi(pi)^Mg A+ */
        long num = (long) (p * Mg) - (long) (M - 1);
        long need = num <= 0 ? 0 : (num + (long) p - 2) / (long) (p - 1);
        N = std::min(N, need);
    }
    if (N < 1)
        throw PrecisionError("mellin: precision exhausted (component truncation " +
                             std::to_string(Mg) + " too small for pi^" + std::to_string(M) + ")");
    mpz_class mod = ppow(p, N);
    std::vector<Coeffs> yc(p - 1);
    for (size_t a = 0; a + 1 < p; a++) {
        TruncatedSeries c = g.comp[a].with_denominator(B);
        Coeffs cf = c.coeffs();
        poly::reduce(cf, mod);
        poly::trim(cf);
        yc[a] = cf.empty() ? Coeffs{} : poly::taylor_shift(cf, -1, mod);
    }
    long extra = val_factorial(M ? M - 1 : 0, p);
    long prec = N + extra + 1;
    mpz_class big = ppow(p, prec);
    auto teich = teich_table(p, prec);
    auto gr = to_group_ring(yc, p, teich, mod);
    Coeffs acc(M);
    mpz_class u = 1 + p;
    for (unsigned long b = 1; b < p; b++) {
        mpz_class c = teich[b];
        for (size_t t = 0; t < gr[b].size(); t++) {
            if (sgn(gr[b][t])) {
                Coeffs e = poly::binomial_series(c, M, p, N);
                for (size_t i = 0; i < M; i++)
                    mpz_addmul(acc[i].get_mpz_t(), gr[b][t].get_mpz_t(), e[i].get_mpz_t());
            }
            c *= u;
            reduce(c, big);
        }
    }
    return TruncatedSeries(p, acc, M, N, B);
}

Coeffs mellin_level(const LevelRing& R, const IwasawaElement& g)
{
    if (!g.polynomial)
        throw DomainError("mellin_level needs polynomial components");
    unsigned long p = R.p();
    const mpz_class& mod = R.modulus();
    std::vector<Coeffs> yc(p - 1);
    for (size_t a = 0; a + 1 < p; a++) {
        Coeffs cf = g.comp[a].coeffs();
        poly::reduce(cf, mod);
        poly::trim(cf);
        yc[a] = cf.empty() ? Coeffs{} : poly::taylor_shift(cf, -1, mod);
    }
    long prec = R.level() + R.N();
    mpz_class big = ppow(p, prec);
    auto teich = teich_table(p, prec);
    auto gr = to_group_ring(yc, p, teich, mod);
    Coeffs acc(R.dim());
    mpz_class u = 1 + p;
    for (unsigned long b = 1; b < p; b++) {
        mpz_class c = teich[b];
        for (size_t t = 0; t < gr[b].size(); t++) {
            if (sgn(gr[b][t])) {
                Coeffs e = R.T_power(c);
                for (size_t i = 0; i < e.size(); i++)
                    if (sgn(e[i]))
                        mpz_addmul(acc[i].get_mpz_t(), gr[b][t].get_mpz_t(), e[i].get_mpz_t());
            }
            c *= u;
            reduce(c, big);
        }
    }
    poly::reduce(acc, mod);
    return acc;
}

bool in_psi_zero(const LevelRing& R, const Coeffs& h, long N_in)
{
    mpz_class m = ppow(R.p(), std::min(N_in, R.N()));
    for (size_t j = 0; j < h.size(); j += R.p()) {
        mpz_class x = h[j];
        reduce(x, m);
        if (sgn(x))
            return false;
    }
    return true;
}

IwasawaElement mellin_inverse_level(const LevelRing& R, const Coeffs& h, long N_in, long B)
{
    if (R.level() < 1)
        throw DomainError("mellin_inverse_level needs L >= 1");
    unsigned long p = R.p();
    long N = std::min(N_in, R.N());
    if (N < 1)
        throw PrecisionError("mellin_inverse: no certain digits in the input");
    if (!in_psi_zero(R, h, N))
        throw DomainError("system inconsistent: input is not in the psi = 0 part");
    mpz_class mod = ppow(p, N);
    size_t K = R.dim() / p;
    int L = R.level();
    auto teich = teich_table(p, L + R.N());
    std::vector<Coeffs> gr(p, Coeffs(K));
    long achieved = N;
    if (R.m() == 0) {
        /* T^j with p not dividing j is exactly one group element */
        mpz_class P = ppow(p, L), u = 1 + p, c;
        for (unsigned long b = 1; b < p; b++) {
            c = teich[b];
            reduce(c, P);
            for (size_t t = 0; t < K; t++) {
                gr[b][t] = h[c.get_ui()];
                reduce(gr[b][t], mod);
                c *= u;
                reduce(c, P);
            }
        }
    } else {
        for (unsigned long b = 1; b < p; b++) {
            auto solver = block_solver(R, b, teich);
            std::vector<mpz_class> rhs(K);
            for (size_t i = 0; i < K; i++)
                rhs[i] = h[b + i * p];
            long got = 0;
            gr[b] = solver->solve(rhs, got);
            achieved = std::min(achieved, got);
        }
        if (achieved < 1)
            throw PrecisionError("mellin_inverse: precision exhausted in the linear solve");
        mod = ppow(p, achieved);
        for (auto& v : gr)
            poly::reduce(v, mod);
    }
    auto comps = from_group_ring(gr, p, teich, mod);
    IwasawaElement g;
    g.p = p;
    g.polynomial = true;
    g.reduced = Reduction{L - 1, R.m()};
    for (auto& y : comps) {
        Coeffs x = poly::taylor_shift(y, 1, mod);
        g.comp.emplace_back(p, x, K, achieved, B);
    }
    return g;
}

IwasawaElement mellin_inverse(const TruncatedSeries& h, int n, int m)
{
    LevelRing R(h.p(), n, m, h.N());
    long got = 0;
    Coeffs c = R.from_series(h, got);
    if (got < 1)
        throw PrecisionError("mellin_inverse: truncation degree " + std::to_string(h.M()) +
                             " too small for level " + std::to_string(n));
    return mellin_inverse_level(R, c, got, h.B());
}

ZMatrix mellin_matrix(unsigned long p, int L, int m, long N)
{
    LevelRing R(p, L, m, N);
    size_t K = R.dim() / p;
    ZMatrix A(R.dim(), (p - 1) * K);
    auto teich = teich_table(p, L + N);
    mpz_class big = ppow(p, L + N), u = 1 + p;
    for (unsigned long b = 1; b < p; b++) {
        mpz_class c = teich[b];
        for (size_t t = 0; t < K; t++) {
            Coeffs col = R.T_power(c);
            for (size_t i = 0; i < R.dim(); i++)
                A(i, (b - 1) * K + t) = col[i];
            c *= u;
            reduce(c, big);
        }
    }
    return A;
}

ZMatrix mellin_matrix_series(unsigned long p, int L, int m, long N)
{
    LevelRing R(p, L, m, N);
    size_t K = R.dim() / p;
    size_t M = R.dim() * (size_t) N;
    long prec = N + val_factorial(M - 1, p) + 1;
    ZMatrix A(R.dim(), (p - 1) * K);
    auto teich = teich_table(p, prec);
    mpz_class big = ppow(p, prec), u = 1 + p;
    for (unsigned long b = 1; b < p; b++) {
        mpz_class c = teich[b];
        for (size_t t = 0; t < K; t++) {
            TruncatedSeries s(p, poly::binomial_series(c, M, p, N), M, N);
            long got = 0;
            Coeffs col = R.from_series(s, got);
            if (got < N)
                throw PrecisionError("mellin_matrix_series: truncation too small");
            for (size_t i = 0; i < R.dim(); i++)
                A(i, (b - 1) * K + t) = col[i];
            c *= u;
            reduce(c, big);
        }
    }
    return A;
}

CyclotomicElement evaluate_component(const IwasawaElement& g, long a, int j)
{
    const TruncatedSeries& f = g.component(a);
    if (g.polynomial)
        return evaluate_poly_at_eps(f.coeffs(), g.p, j, f.N(), f.B());
    return evaluate_at_eps(f, j);
}

size_t dlog_u(const mpz_class& c, unsigned long p, int L)
{
    static std::mutex mu;
    static std::map<std::pair<unsigned long, int>, std::vector<long>> tables;
    mpz_class P = ppow(p, L);
    std::vector<long>* tab;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto& t = tables[{p, L}];
        if (t.empty()) {
            t.assign(P.get_ui(), -1);
            size_t K = ppow(p, L - 1).get_ui();
            unsigned long x = 1 % P.get_ui();
            for (size_t i = 0; i < K; i++) {
                t[x] = (long) i;
                x = (unsigned long) ((unsigned long long) x * (1 + p) % P.get_ui());
            }
        }
        tab = &t;
    }
    mpz_class r = c;
    reduce(r, P);
    long t = (*tab)[r.get_ui()];
    if (t < 0)
        throw DomainError("dlog_u: residue is not 1 mod p");
    return (size_t) t;
}

}  // namespace iwg
