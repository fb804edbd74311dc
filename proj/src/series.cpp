#include "iwg/series.hpp"

#include "iwg/poly.hpp"

#include <algorithm>
#include <sstream>

namespace iwg {

TruncatedSeries::TruncatedSeries(unsigned long p, size_t M, long N, long B)
    : TruncatedSeries(p, Coeffs{}, M, N, B)
{
}

TruncatedSeries::TruncatedSeries(unsigned long p, Coeffs c, size_t M, long N, long B)
    : p_(p), M_(M), N_(N), B_(B), c_(std::move(c))
{
    if (M < 1 || N < 1)
        throw PrecisionError("series needs M >= 1 and N >= 1 (got M=" + std::to_string(M) +
                             ", N=" + std::to_string(N) + ")");
    if (B < 0)
        throw DomainError("negative denominator exponent");
    c_.resize(M_);
    poly::reduce(c_, modulus());
}

TruncatedSeries TruncatedSeries::constant(unsigned long p, const mpz_class& c, size_t M, long N)
{
    return TruncatedSeries(p, Coeffs{c}, M, N);
}

TruncatedSeries TruncatedSeries::variable(unsigned long p, size_t M, long N)
{
    return TruncatedSeries(p, Coeffs{0, 1}, M, N);
}

TruncatedSeries TruncatedSeries::with_denominator(long B) const
{
    if (B < B_)
        throw DomainError("with_denominator cannot lower B");
    if (B == B_)
        return *this;
    return TruncatedSeries(p_, poly::scale(c_, ppow(p_, B - B_), ppow(p_, N_ + B - B_)), M_,
                           N_ + B - B_, B);
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& o) const
{
    long B = std::max(B_, o.B_);
    TruncatedSeries a = with_denominator(B), b = o.with_denominator(B);
    long N = std::min(a.N_, b.N_);
    size_t M = std::min(M_, o.M_);
    Coeffs ca(a.c_.begin(), a.c_.begin() + M), cb(b.c_.begin(), b.c_.begin() + M);
    mpz_class m = ppow(p_, N);
    poly::reduce(ca, m);
    poly::reduce(cb, m);
    return TruncatedSeries(p_, poly::add(ca, cb, m), M, N, B);
}

TruncatedSeries TruncatedSeries::operator-() const
{
    return scaled(-1);
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& o) const
{
    return *this + (-o);
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const
{
    size_t M = std::min(M_, o.M_);
    long N = std::min(N_, o.N_);
    mpz_class m = ppow(p_, N);
    Coeffs a(c_.begin(), c_.begin() + M), b(o.c_.begin(), o.c_.begin() + M);
    poly::reduce(a, m);
    poly::reduce(b, m);
    poly::trim(a);
    poly::trim(b);
    return TruncatedSeries(p_, poly::mullow(a, b, M, m), M, N, B_ + o.B_);
}

TruncatedSeries TruncatedSeries::scaled(const mpz_class& c) const
{
    return TruncatedSeries(p_, poly::scale(c_, c, modulus()), M_, N_, B_);
}

TruncatedSeries TruncatedSeries::div_p_power(long e) const
{
    long B = B_ + e;
    if (B >= 0)
        return TruncatedSeries(p_, c_, M_, N_, B);
    long up = -B;
    return TruncatedSeries(p_, poly::scale(c_, ppow(p_, up), ppow(p_, N_ + up)), M_, N_ + up, 0);
}

TruncatedSeries TruncatedSeries::normalized() const
{
    Coeffs c = c_;
    long B = B_, N = N_;
    while (B > 0 && N > 1) {
        bool all = true;
        for (auto& x : c)
            if (!mpz_divisible_ui_p(x.get_mpz_t(), p_)) {
                all = false;
                break;
            }
        if (!all)
            break;
        for (auto& x : c)
            mpz_divexact_ui(x.get_mpz_t(), x.get_mpz_t(), p_);
        B--;
        N--;
    }
    return TruncatedSeries(p_, std::move(c), M_, N, B);
}

TruncatedSeries TruncatedSeries::truncated(size_t M) const
{
    return TruncatedSeries(p_, c_, std::min(M, M_), N_, B_);
}

TruncatedSeries TruncatedSeries::with_precision(long N) const
{
    return TruncatedSeries(p_, c_, M_, std::min(N, N_), B_);
}

TruncatedSeries TruncatedSeries::inverse() const
{
    if (mpz_divisible_ui_p(c_[0].get_mpz_t(), p_))
        throw DomainError("inverse of a series without unit constant term");
    /* (p^-B c)^-1 = p^B c^-1 */
    mpz_class m = ppow(p_, N_);
    Coeffs g = poly::inverse(c_, M_, m);
    TruncatedSeries r(p_, g, M_, N_, 0);
    return r.div_p_power(-B_);
}

bool TruncatedSeries::is_zero() const
{
    return poly::is_zero(c_);
}

ExtValuation TruncatedSeries::min_coeff_valuation() const
{
    long best = kValInf;
    for (auto& x : c_)
        best = std::min(best, val_p(x, p_));
    if (best == kValInf)
        return ExtValuation::infinity();
    return ExtValuation(best - B_);
}

bool TruncatedSeries::same_as(const TruncatedSeries& o) const
{
    return p_ == o.p_ && M_ == o.M_ && N_ == o.N_ && B_ == o.B_ && c_ == o.c_;
}

bool TruncatedSeries::congruent(const TruncatedSeries& o) const
{
    if (p_ != o.p_)
        return false;
    TruncatedSeries d = *this - o;
    long abs_prec = std::min(abs_precision(), o.abs_precision());
    ExtValuation v = d.min_coeff_valuation();
    return v >= ExtValuation(abs_prec);
}

std::string TruncatedSeries::str(const char* var) const
{
    std::ostringstream os;
    if (B_)
        os << "p^" << B_ << "^-1 * ";
    os << "(";
    bool first = true;
    for (size_t i = 0; i < c_.size(); i++) {
        if (sgn(c_[i]) == 0)
            continue;
        if (!first)
            os << " + ";
        first = false;
        os << c_[i];
        if (i == 1)
            os << "*" << var;
        else if (i > 1)
            os << "*" << var << "^" << i;
    }
    if (first)
        os << "0";
    os << ") + O(" << var << "^" << M_ << ", p^" << N_ << ")";
    return os.str();
}

TruncatedSeries phi(const TruncatedSeries& f)
{
    unsigned long p = f.p();
    mpz_class m = f.modulus();
    Coeffs c = f.coeffs();
    poly::trim(c);
    if (c.size() <= 1)
        return f;
    /* f(T - 1), then T -> T^p, then back to the pi basis */
    Coeffs F = poly::taylor_shift(c, -1, m);
    Coeffs G((F.size() - 1) * p + 1);
    for (size_t j = 0; j < F.size(); j++)
        G[j * p] = F[j];
    Coeffs r = poly::taylor_shift(G, 1, m);
    r.resize(f.M());
    return TruncatedSeries(p, std::move(r), f.M(), f.N(), f.B());
}

TruncatedSeries psi(const TruncatedSeries& f)
{
    size_t Mo = std::max<size_t>(1, f.M() / (2 * f.p()));
    return psi(f, Mo);
}

TruncatedSeries psi(const TruncatedSeries& f, size_t M_out)
{
    unsigned long p = f.p();
    /* the unknown tail pi^M h maps into (p, pi)^floor(M/p) */
    long reach = (long) (f.M() / p);
    long N = std::min<long>(f.N(), reach - (long) M_out + 1);
    if (M_out < 1 || N < 1)
        throw PrecisionError("psi: precision exhausted (M=" + std::to_string(f.M()) +
                             ", requested output degree " + std::to_string(M_out) + ")");
    mpz_class m = f.modulus();
    Coeffs c = f.coeffs();
    Coeffs F = poly::taylor_shift(c, -1, m);
    Coeffs G((F.size() + p - 1) / p);
    for (size_t j = 0; j * p < F.size(); j++)
        G[j] = F[j * p];
    Coeffs r = poly::taylor_shift(G, 1, m);
    r.resize(M_out);
    return TruncatedSeries(p, std::move(r), M_out, N, f.B());
}

TruncatedSeries gamma_act(const TruncatedSeries& f, const mpz_class& c)
{
    unsigned long p = f.p();
    if (mpz_divisible_ui_p(c.get_mpz_t(), p))
        throw DomainError("gamma_act: scalar is not a unit");
    mpz_class m = f.modulus();
    Coeffs g = poly::binomial_series(c, f.M(), p, f.N());
    g[0] = 0;
    Coeffs c0 = f.coeffs();
    poly::trim(c0);
    return TruncatedSeries(p, poly::compose(c0, g, f.M(), m), f.M(), f.N(), f.B());
}

TruncatedSeries boundary_op(const TruncatedSeries& f)
{
    if (f.M() < 2)
        throw PrecisionError("boundary_op needs M >= 2");
    size_t M = f.M() - 1;
    mpz_class m = f.modulus();
    Coeffs d(M);
    for (size_t i = 0; i < M; i++)
        d[i] = f.coeff(i + 1) * (unsigned long) (i + 1);
    poly::reduce(d, m);
    Coeffs r(M);
    for (size_t i = 0; i < M; i++) {
        r[i] = d[i];
        if (i)
            r[i] += d[i - 1];
    }
    return TruncatedSeries(f.p(), std::move(r), M, f.N(), f.B());
}

Coeffs q_polynomial(unsigned long p, long N)
{
    mpz_class m = ppow(p, N);
    Coeffs q(p);
    for (unsigned long i = 0; i < p; i++) {
        mpz_bin_uiui(q[i].get_mpz_t(), p, i + 1);
        reduce(q[i], m);
    }
    return q;
}

Coeffs u_polynomial(unsigned long p, long N)
{
    mpz_class m = ppow(p, N);
    Coeffs u(p - 1);
    for (unsigned long i = 0; i + 1 < p; i++) {
        mpz_bin_uiui(u[i].get_mpz_t(), p, i + 1);
        mpz_divexact_ui(u[i].get_mpz_t(), u[i].get_mpz_t(), p);
        reduce(u[i], m);
    }
    return u;
}

TruncatedSeries q_element(unsigned long p, size_t M, long N)
{
    return TruncatedSeries(p, q_polynomial(p, N), M, N);
}

TruncatedSeries delta_element(unsigned long p, size_t M, long N)
{
    return TruncatedSeries(p, u_polynomial(p, N), M, N).inverse();
}

IwasawaInvariants iwasawa_invariants(const TruncatedSeries& f)
{
    long best = kValInf, at = -1;
    for (size_t i = 0; i < f.coeffs().size(); i++) {
        long v = val_p(f.coeff(i), f.p());
        if (v < best) {
            best = v;
            at = (long) i;
        }
    }
    if (at < 0)
        throw PrecisionError("indeterminate invariants: series is zero within precision");
    if (best < f.B())
        throw DomainError("iwasawa_invariants: series is not integral");
    return IwasawaInvariants{best - f.B(), at, 1};
}

NewtonBound newton_lower_bound(const IwasawaInvariants& inv, const ExtValuation& ordx)
{
    if (ordx <= ExtValuation(0))
        throw DomainError("newton_lower_bound needs ord(x) > 0");
    mpq_class e(inv.e);
    ExtValuation a(mpq_class(mpq_class(inv.mu + 1) / e));
    ExtValuation b = ExtValuation(mpq_class(mpq_class(inv.mu) / e));
    if (inv.lambda > 0)
        b = b + ordx * mpq_class(inv.lambda);
    NewtonBound r;
    r.value = vmin(a, b);
    if (inv.lambda == 0)
        r.exact = true;
    else
        r.exact = ordx < ExtValuation(mpq_class(1, inv.e * inv.lambda));
    return r;
}

}  // namespace iwg
