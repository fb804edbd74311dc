#include "iwg/level.hpp"

#include "iwg/poly.hpp"

namespace iwg {

LevelRing::LevelRing(unsigned long p, int L, int m, long N) : p_(p), L_(L), m_(m), N_(N)
{
    if (L < 0 || m < 0 || N < 1)
        throw DomainError("LevelRing needs L >= 0, m >= 0, N >= 1");
    if ((unsigned long) m >= p)
        throw DomainError("LevelRing needs m < p");
    P_ = (size_t) ppow(p, L).get_ui();
    D_ = (size_t) (m + 1) * P_;
    mod_ = ppow(p, N);
    relation_.resize(m + 1);
    for (int i = 0; i <= m; i++) {
        mpz_class b;
        mpz_bin_uiui(b.get_mpz_t(), m + 1, i);
        relation_[i] = ((m + 1 - i) % 2) ? b : mpz_class(-b);
        iwg::reduce(relation_[i], mod_);
    }
}

Coeffs LevelRing::one() const
{
    Coeffs r(D_);
    r[0] = 1;
    iwg::reduce(r[0], mod_);
    return r;
}

Coeffs LevelRing::reduce(Coeffs a) const
{
    if (a.size() > D_) {
        for (size_t k = a.size(); k-- > D_;) {
            mpz_class c = a[k];
            iwg::reduce(c, mod_);
            if (sgn(c) == 0)
                continue;
            size_t base = k - D_;
            for (int i = 0; i <= m_; i++)
                mpz_addmul(a[base + i * P_].get_mpz_t(), relation_[i].get_mpz_t(), c.get_mpz_t());
        }
    }
    a.resize(D_);
    poly::reduce(a, mod_);
    return a;
}

Coeffs LevelRing::mul(const Coeffs& a, const Coeffs& b) const
{
    return reduce(poly::mul(a, b, mod_));
}

Coeffs LevelRing::add(const Coeffs& a, const Coeffs& b) const
{
    return reduce(poly::add(a, b, mod_));
}

Coeffs LevelRing::sub(const Coeffs& a, const Coeffs& b) const
{
    return reduce(poly::sub(a, b, mod_));
}

Coeffs LevelRing::scale(const Coeffs& a, const mpz_class& c) const
{
    return reduce(poly::scale(a, c, mod_));
}

Coeffs LevelRing::from_pi_poly(const Coeffs& f) const
{
    Coeffs c = f;
    poly::reduce(c, mod_);
    poly::trim(c);
    if (c.empty())
        return zero();
    return reduce(poly::taylor_shift(c, -1, mod_));
}

Coeffs LevelRing::from_series(const TruncatedSeries& f, long& achieved_N) const
{
    achieved_N = std::min<long>(N_, (long) (f.M() / D_));
    return from_pi_poly(f.coeffs());
}

Coeffs LevelRing::to_pi_poly(const Coeffs& a) const
{
    return poly::taylor_shift(a, 1, mod_);
}

void LevelRing::add_T_power(Coeffs& r, const mpz_class& c, const mpz_class& coef) const
{
    mpz_class big = ppow(p_, L_ + N_), cc = c;
    iwg::reduce(cc, big);
    mpz_class w, c0;
    mpz_fdiv_qr_ui(w.get_mpz_t(), c0.get_mpz_t(), cc.get_mpz_t(), P_);
    size_t s = c0.get_ui();
    /* T^c = T^{c0} (1 + y)^w, y = T^P - 1, y^{m+1} = 0 */
    for (int i = 0; i <= m_; i++) {
        mpz_class bw = poly::small_binomial(w, (unsigned) i, mod_) * coef;
        if (sgn(bw) == 0)
            continue;
        for (int l = 0; l <= i; l++) {
            mpz_class b;
            mpz_bin_uiui(b.get_mpz_t(), i, l);
            if ((i - l) % 2)
                b = -b;
            mpz_addmul(r[s + l * P_].get_mpz_t(), bw.get_mpz_t(), b.get_mpz_t());
        }
    }
}

Coeffs LevelRing::T_power(const mpz_class& c) const
{
    Coeffs r(D_);
    add_T_power(r, c, 1);
    poly::reduce(r, mod_);
    return r;
}

Coeffs LevelRing::phi(const Coeffs& a) const
{
    Coeffs r(D_ * p_);
    for (size_t j = 0; j < D_ && j < a.size(); j++)
        r[j * p_] = a[j];
    return r;
}

Coeffs LevelRing::psi(const Coeffs& a) const
{
    if (L_ < 1)
        throw DomainError("psi below level 0");
    Coeffs r(D_ / p_);
    for (size_t j = 0; j < r.size(); j++)
        r[j] = a[j * p_];
    return r;
}

Coeffs LevelRing::gamma(const Coeffs& a, const mpz_class& c) const
{
    if (mpz_divisible_ui_p(c.get_mpz_t(), p_))
        throw DomainError("gamma: scalar is not a unit");
    Coeffs r(D_);
    for (size_t j = 0; j < D_; j++) {
        if (sgn(a[j]) == 0)
            continue;
        add_T_power(r, c * (unsigned long) j, a[j]);
    }
    poly::reduce(r, mod_);
    return r;
}

CyclotomicElement LevelRing::evaluate(const Coeffs& a, int j, long B) const
{
    if (j < 1 || j > L_)
        throw DomainError("evaluation level outside 1..L");
    return evaluate_T_poly(a, p_, j, N_, B);
}

}  // namespace iwg
