#include "iwg/cyclo.hpp"

#include "iwg/poly.hpp"

#include <algorithm>

namespace iwg {

namespace {

size_t cyclo_degree(unsigned long p, int n)
{
    if (n < 1)
        throw DomainError("cyclotomic level must be >= 1");
    return (size_t) mpz_class(ppow(p, n - 1) * (p - 1)).get_ui();
}

}  // namespace

CyclotomicElement::CyclotomicElement(unsigned long p, int n, Coeffs coords, long N, long B,
                                     ExtValuation trunc_guard)
    : p_(p), n_(n), N_(N), B_(B), guard_(trunc_guard), coords_(std::move(coords))
{
    if (N < 1)
        throw PrecisionError("cyclotomic element needs N >= 1");
    coords_.resize(cyclo_degree(p, n));
    poly::reduce(coords_, ppow(p, N));
}

CyclotomicElement CyclotomicElement::eps_power(unsigned long p, int n, size_t j, long N)
{
    Coeffs c(j + 1);
    c[j] = 1;
    return evaluate_poly_at_eps(c, p, n, N);
}

CyclotomicElement CyclotomicElement::operator+(const CyclotomicElement& o) const
{
    if (p_ != o.p_ || n_ != o.n_)
        throw DomainError("cyclotomic elements at different levels");
    long B = std::max(B_, o.B_);
    long N = std::min(N_ + (B - B_), o.N_ + (B - o.B_));
    mpz_class m = ppow(p_, N);
    Coeffs a = poly::scale(coords_, ppow(p_, B - B_), m);
    Coeffs b = poly::scale(o.coords_, ppow(p_, B - o.B_), m);
    return CyclotomicElement(p_, n_, poly::add(a, b, m), N, B, vmin(guard_, o.guard_));
}

CyclotomicElement CyclotomicElement::operator-(const CyclotomicElement& o) const
{
    CyclotomicElement neg(o.p_, o.n_, poly::scale(o.coords_, -1, ppow(o.p_, o.N_)), o.N_, o.B_,
                          o.guard_);
    return *this + neg;
}

CyclotomicElement CyclotomicElement::operator*(const CyclotomicElement& o) const
{
    if (p_ != o.p_ || n_ != o.n_)
        throw DomainError("cyclotomic elements at different levels");
    long N = std::min(N_, o.N_);
    mpz_class m = ppow(p_, N);
    Coeffs a = coords_, b = o.coords_;
    poly::reduce(a, m);
    poly::reduce(b, m);
    Coeffs ta = poly::taylor_shift(a, -1, m), tb = poly::taylor_shift(b, -1, m);
    Coeffs prod = poly::mul(ta, tb, m);
    Coeffs red = reduce_mod_cyclotomic(prod, p_, n_, m);
    ExtValuation g = vmin(guard_ - ExtValuation(o.B_), o.guard_ - ExtValuation(B_));
    return CyclotomicElement(p_, n_, poly::taylor_shift(red, 1, m), N, B_ + o.B_, g);
}

CycloValuation CyclotomicElement::valuation() const
{
    return iwg::valuation(*this);
}

Coeffs min_poly_eps(unsigned long p, int n, long N)
{
    mpz_class m = ppow(p, N);
    size_t d = cyclo_degree(p, n);
    size_t step = d / (p - 1);
    Coeffs t(d + 1);
    for (unsigned long i = 0; i < p; i++)
        t[i * step] = 1;
    return poly::taylor_shift(t, 1, m);
}

Coeffs reduce_mod_cyclotomic(const Coeffs& t_poly, unsigned long p, int n, const mpz_class& m)
{
    size_t d = cyclo_degree(p, n);
    size_t step = d / (p - 1);
    Coeffs a = t_poly;
    if (a.size() > d) {
        /* T^d = -(1 + T^step + ... + T^((p-2) step)) */
        for (size_t k = a.size(); k-- > d;) {
            mpz_class c = a[k];
            iwg::reduce(c, m);
            if (sgn(c) == 0)
                continue;
            size_t base = k - d;
            for (unsigned long i = 0; i + 1 < p; i++)
                a[base + i * step] -= c;
        }
    }
    a.resize(d);
    poly::reduce(a, m);
    return a;
}

CyclotomicElement evaluate_T_poly(const Coeffs& t_poly, unsigned long p, int n, long N, long B)
{
    mpz_class m = ppow(p, N);
    Coeffs r = reduce_mod_cyclotomic(t_poly, p, n, m);
    return CyclotomicElement(p, n, poly::taylor_shift(r, 1, m), N, B);
}

CyclotomicElement evaluate_poly_at_eps(const Coeffs& f, unsigned long p, int n, long N, long B)
{
    mpz_class m = ppow(p, N);
    Coeffs c = f;
    poly::reduce(c, m);
    poly::trim(c);
    size_t d = cyclo_degree(p, n);
    if (c.size() <= d)
        return CyclotomicElement(p, n, c, N, B);
    Coeffs t = poly::taylor_shift(c, -1, m);
    return evaluate_T_poly(t, p, n, N, B);
}

CyclotomicElement evaluate_at_eps(const TruncatedSeries& f, int n)
{
    CyclotomicElement x = evaluate_poly_at_eps(f.coeffs(), f.p(), n, f.N(), f.B());
    size_t d = x.degree();
    ExtValuation g = ExtValuation(mpq_class((long) f.M(), (long) d)) - ExtValuation(f.B());
    return CyclotomicElement(f.p(), n, x.coords(), f.N(), f.B(), g);
}

CycloValuation valuation(const CyclotomicElement& x)
{
    CycloValuation r;
    r.cap = vmin(ExtValuation(x.N() - x.B()), x.trunc_guard());
    long d = (long) x.degree();
    ExtValuation best = ExtValuation::infinity();
    for (long i = 0; i < d; i++) {
        long v = val_p(x.coords()[i], x.p());
        if (v == kValInf)
            continue;
        ExtValuation w(mpq_class(v * d + i, d));
        if (w < best)
            best = w;
    }
    if (!best.is_inf())
        best = best - ExtValuation(x.B());
    if (best < r.cap) {
        r.value = best;
        r.guard = r.cap - best;
    } else {
        r.zero_within_precision = true;
        r.value = ExtValuation::infinity();
        r.guard = ExtValuation::infinity();
    }
    return r;
}

ExtValuation exact_valuation(const CyclotomicElement& x, long min_guard)
{
    CycloValuation v = valuation(x);
    if (v.zero_within_precision)
        return v.value;
    if (v.guard < ExtValuation(min_guard))
        throw PrecisionError("valuation guard " + v.guard.str() + " below " +
                             std::to_string(min_guard));
    return v.value;
}

ValMatrix CycloMatrix::ord() const
{
    ValMatrix r;
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++) {
            r.e[i][j] = val[i][j].value;
            r.unique[i][j] = !val[i][j].zero_within_precision;
        }
    return r;
}

CycloMatrix make_cyclo_matrix(const std::array<std::array<CyclotomicElement, 2>, 2>& e)
{
    CycloMatrix r;
    r.entry = e;
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++)
            r.val[i][j] = valuation(e[i][j]);
    return r;
}

CycloMatrix matrix_evaluate_at_eps(const SeriesMatrix& m, int n)
{
    std::array<std::array<CyclotomicElement, 2>, 2> e;
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++)
            e[i][j] = evaluate_at_eps(m[i][j], n);
    return make_cyclo_matrix(e);
}

}  // namespace iwg
