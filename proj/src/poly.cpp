#include "iwg/poly.hpp"

#include <algorithm>
#include <cstring>

namespace iwg::poly {

namespace {

constexpr size_t kSchoolbook = 12;
constexpr size_t kNaiveShift = 48;

Coeffs mul_school(const Coeffs& a, const Coeffs& b, const mpz_class& m)
{
    Coeffs r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); i++) {
        if (sgn(a[i]) == 0)
            continue;
        for (size_t j = 0; j < b.size(); j++)
            mpz_addmul(r[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
    reduce(r, m);
    return r;
}

/* pack nonnegative coefficients into slots of w limbs */
void pack(const Coeffs& a, size_t w, std::vector<mp_limb_t>& out)
{
    out.assign(a.size() * w, 0);
    for (size_t i = 0; i < a.size(); i++) {
        size_t n = mpz_size(a[i].get_mpz_t());
        if (n)
            std::memcpy(&out[i * w], mpz_limbs_read(a[i].get_mpz_t()), n * sizeof(mp_limb_t));
    }
}

Coeffs mul_kronecker(const Coeffs& a, const Coeffs& b, const mpz_class& m)
{
    size_t la = a.size(), lb = b.size();
    size_t bits = mpz_sizeinbase(m.get_mpz_t(), 2);
    size_t terms = std::min(la, lb);
    size_t lg = 1;
    while ((size_t(1) << lg) < terms)
        lg++;
    size_t slot = 2 * bits + lg + 1;
    size_t w = (slot + GMP_NUMB_BITS - 1) / GMP_NUMB_BITS;

    std::vector<mp_limb_t> A, B;
    pack(a, w, A);
    pack(b, w, B);
    mpz_t x, y;
    mpz_class z;
    mpz_mul(z.get_mpz_t(), mpz_roinit_n(x, A.data(), (mp_size_t) A.size()),
            mpz_roinit_n(y, B.data(), (mp_size_t) B.size()));

    Coeffs r(la + lb - 1);
    const mp_limb_t* zl = mpz_limbs_read(z.get_mpz_t());
    size_t zs = mpz_size(z.get_mpz_t());
    for (size_t k = 0; k < r.size(); k++) {
        size_t lo = k * w;
        if (lo >= zs)
            break;
        size_t n = std::min(w, zs - lo);
        mp_limb_t* d = mpz_limbs_write(r[k].get_mpz_t(), (mp_size_t) n);
        std::memcpy(d, zl + lo, n * sizeof(mp_limb_t));
        mpz_limbs_finish(r[k].get_mpz_t(), (mp_size_t) n);
        mpz_tdiv_r(r[k].get_mpz_t(), r[k].get_mpz_t(), m.get_mpz_t());
    }
    return r;
}

void shift_naive(Coeffs& a, long s, const mpz_class& m)
{
    size_t n = a.size();
    for (size_t i = 0; i + 1 < n; i++)
        for (size_t j = n - 1; j-- > i;) {
            if (s == 1)
                a[j] += a[j + 1];
            else if (s == -1)
                a[j] -= a[j + 1];
            else
                a[j] += s * a[j + 1];
        }
    reduce(a, m);
}

/* a has length 2^j, powers[j'] = (x+s)^(2^j') */
Coeffs shift_rec(const mpz_class* a, size_t len, const std::vector<Coeffs>& powers,
                 size_t lvl, long s, const mpz_class& m)
{
    if (len <= kNaiveShift) {
        Coeffs r(a, a + len);
        shift_naive(r, s, m);
        return r;
    }
    size_t h = len / 2;
    Coeffs lo = shift_rec(a, h, powers, lvl - 1, s, m);
    Coeffs hi = shift_rec(a + h, h, powers, lvl - 1, s, m);
    Coeffs r = mul(hi, powers[lvl - 1], m);
    r.resize(len);
    for (size_t i = 0; i < h; i++) {
        r[i] += lo[i];
        if (r[i] >= m)
            r[i] -= m;
    }
    return r;
}

}  // namespace

void reduce(Coeffs& a, const mpz_class& m)
{
    for (auto& c : a)
        iwg::reduce(c, m);
}

void trim(Coeffs& a)
{
    while (!a.empty() && sgn(a.back()) == 0)
        a.pop_back();
}

bool is_zero(const Coeffs& a)
{
    for (auto& c : a)
        if (sgn(c))
            return false;
    return true;
}

Coeffs add(const Coeffs& a, const Coeffs& b, const mpz_class& m)
{
    Coeffs r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < r.size(); i++) {
        if (i < a.size())
            r[i] += a[i];
        if (i < b.size())
            r[i] += b[i];
        if (r[i] >= m)
            r[i] -= m;
    }
    return r;
}

Coeffs sub(const Coeffs& a, const Coeffs& b, const mpz_class& m)
{
    Coeffs r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < r.size(); i++) {
        if (i < a.size())
            r[i] += a[i];
        if (i < b.size())
            r[i] -= b[i];
        if (sgn(r[i]) < 0)
            r[i] += m;
    }
    return r;
}

Coeffs scale(const Coeffs& a, const mpz_class& c, const mpz_class& m)
{
    Coeffs r(a.size());
    for (size_t i = 0; i < a.size(); i++) {
        r[i] = a[i] * c;
        iwg::reduce(r[i], m);
    }
    return r;
}

Coeffs mul(const Coeffs& a, const Coeffs& b, const mpz_class& m)
{
    if (a.empty() || b.empty())
        return {};
    if (std::min(a.size(), b.size()) <= kSchoolbook)
        return mul_school(a, b, m);
    return mul_kronecker(a, b, m);
}

Coeffs mullow(const Coeffs& a, const Coeffs& b, size_t n, const mpz_class& m)
{
    if (n == 0)
        return {};
    Coeffs ta(a.begin(), a.begin() + std::min(a.size(), n));
    Coeffs tb(b.begin(), b.begin() + std::min(b.size(), n));
    Coeffs r = mul(ta, tb, m);
    r.resize(n);
    return r;
}

Coeffs sqrlow(const Coeffs& a, size_t n, const mpz_class& m)
{
    return mullow(a, a, n, m);
}

Coeffs pow_trunc(const Coeffs& a, unsigned long e, size_t n, const mpz_class& m)
{
    Coeffs r(n), b = a;
    if (n == 0)
        return r;
    r[0] = 1;
    iwg::reduce(r[0], m);
    b.resize(n);
    while (e) {
        if (e & 1)
            r = mullow(r, b, n, m);
        e >>= 1;
        if (e)
            b = sqrlow(b, n, m);
    }
    return r;
}

Coeffs inverse(const Coeffs& a, size_t n, const mpz_class& m)
{
    if (a.empty())
        throw DomainError("inverse of zero series");
    Coeffs g{inv_mod(a[0], m)};
    size_t k = 1;
    while (k < n) {
        k = std::min(2 * k, n);
        /* g <- g (2 - a g) */
        Coeffs e = mullow(a, g, k, m);
        for (auto& c : e)
            c = sgn(c) ? mpz_class(m - c) : mpz_class(0);
        e[0] += 2;
        iwg::reduce(e[0], m);
        g = mullow(g, e, k, m);
    }
    g.resize(n);
    return g;
}

Coeffs taylor_shift(const Coeffs& a, long s, const mpz_class& m)
{
    size_t n = a.size();
    if (n <= kNaiveShift) {
        Coeffs r = a;
        shift_naive(r, s, m);
        return r;
    }
    size_t len = 1, lvl = 0;
    while (len < n) {
        len <<= 1;
        lvl++;
    }
    std::vector<Coeffs> powers(lvl);
    mpz_class sm = s;
    iwg::reduce(sm, m);
    powers[0] = {sm, 1};
    for (size_t j = 1; j < lvl; j++)
        powers[j] = mul(powers[j - 1], powers[j - 1], m);
    Coeffs pad = a;
    pad.resize(len);
    Coeffs r = shift_rec(pad.data(), len, powers, lvl, s, m);
    r.resize(n);
    return r;
}

Coeffs compose(const Coeffs& f, const Coeffs& g, size_t n, const mpz_class& m)
{
    Coeffs r(n);
    if (n == 0 || f.empty())
        return r;
    if (!g.empty() && sgn(g[0]) != 0)
        throw DomainError("compose: inner series has nonzero constant term");
    size_t top = std::min(f.size(), n);
    r[0] = f[top - 1];
    for (size_t i = top - 1; i-- > 0;) {
        r = mullow(r, g, n, m);
        r[0] += f[i];
        if (r[0] >= m)
            r[0] -= m;
    }
    return r;
}

Coeffs scale_var(const Coeffs& f, const mpz_class& c, const mpz_class& m)
{
    Coeffs r(f.size());
    mpz_class pw = 1;
    for (size_t i = 0; i < f.size(); i++) {
        r[i] = f[i] * pw;
        iwg::reduce(r[i], m);
        pw *= c;
        iwg::reduce(pw, m);
    }
    return r;
}

void divrem_monic(const Coeffs& a, const Coeffs& b, Coeffs& q, Coeffs& r, const mpz_class& m)
{
    Coeffs bb = b;
    trim(bb);
    if (bb.empty() || bb.back() != 1)
        throw DomainError("divrem_monic: divisor not monic");
    size_t db = bb.size() - 1;
    r = a;
    trim(r);
    if (r.size() <= db) {
        q.clear();
        return;
    }
    q.assign(r.size() - db, 0);
    for (size_t i = r.size(); i-- > db;) {
        mpz_class c = r[i];
        iwg::reduce(c, m);
        q[i - db] = c;
        if (sgn(c) == 0)
            continue;
        for (size_t j = 0; j < db; j++)
            mpz_submul(r[i - db + j].get_mpz_t(), c.get_mpz_t(), bb[j].get_mpz_t());
        r[i] = 0;
        if ((i & 31) == 0)
            reduce(r, m);
    }
    r.resize(db);
    reduce(r, m);
}

Coeffs binomial_series(const mpz_class& c, size_t n, unsigned long p, long N)
{
    if (n == 0)
        return {};
    long extra = val_factorial(n ? n - 1 : 0, p);
    long prec = N + extra;
    mpz_class mod = ppow(p, N);
    Coeffs r(n);
    mpz_class e = 1, w, t;
    r[0] = 1;
    iwg::reduce(r[0], mod);
    for (size_t i = 0; i + 1 < n; i++) {
        mpz_class pm = ppow(p, prec);
        t = c - (unsigned long) i;
        e *= t;
        iwg::reduce(e, pm);
        long v = split_p(mpz_class((unsigned long) (i + 1)), p, w);
        for (long s = 0; s < v; s++) {
            if (!mpz_divisible_ui_p(e.get_mpz_t(), p))
                throw PrecisionError("binomial_series: exponent known to too few digits");
            mpz_divexact_ui(e.get_mpz_t(), e.get_mpz_t(), p);
        }
        prec -= v;
        pm = ppow(p, prec);
        e *= inv_mod(w, pm);
        iwg::reduce(e, pm);
        r[i + 1] = e;
        iwg::reduce(r[i + 1], mod);
    }
    return r;
}

mpz_class small_binomial(const mpz_class& w, unsigned i, const mpz_class& m)
{
    mpz_class num = 1, den = 1;
    for (unsigned l = 0; l < i; l++) {
        num *= w - l;
        iwg::reduce(num, m);
        den *= l + 1;
    }
    mpz_class r = num * inv_mod(den, m);
    iwg::reduce(r, m);
    return r;
}

}  // namespace iwg::poly
