/* The finite-level quotient Q_{L,m} = Z/p^N[T] / ((T^{p^L} - 1)^{m+1}), T = 1 + pi.
 *
 * Since T^{p^L} - 1 = phi^L(pi), this is A+ / (phi^L(pi)^{m+1}, p^N).
 * Elements are coefficient vectors in the T basis of length D = (m+1) p^L.
 * phi maps level L to level L+1 and psi goes back down; both are exact.
 */
#pragma once

#include "iwg/cyclo.hpp"
#include "iwg/series.hpp"

namespace iwg {

class LevelRing {
public:
    LevelRing(unsigned long p, int L, int m, long N);

    unsigned long p() const { return p_; }
    int level() const { return L_; }
    int m() const { return m_; }
    long N() const { return N_; }
    size_t dim() const { return D_; }
    size_t period() const { return P_; }  // p^L
    const mpz_class& modulus() const { return mod_; }

    Coeffs zero() const { return Coeffs(D_); }
    Coeffs one() const;
    /// reduce a T-polynomial of any degree
    Coeffs reduce(Coeffs a) const;
    Coeffs mul(const Coeffs& a, const Coeffs& b) const;
    Coeffs add(const Coeffs& a, const Coeffs& b) const;
    Coeffs sub(const Coeffs& a, const Coeffs& b) const;
    Coeffs scale(const Coeffs& a, const mpz_class& c) const;

    /// image of a polynomial in pi
    Coeffs from_pi_poly(const Coeffs& f) const;
    /// image of a truncated series numerator; achieved_N receives min(N, floor(M/D))
    Coeffs from_series(const TruncatedSeries& f, long& achieved_N) const;
    /// the representative as a polynomial in pi of degree < D
    Coeffs to_pi_poly(const Coeffs& a) const;

    /// T^c for a p-adic integer c (only c mod p^(L+N) matters)
    Coeffs T_power(const mpz_class& c) const;

    LevelRing up() const { return LevelRing(p_, L_ + 1, m_, N_); }
    LevelRing down() const { return LevelRing(p_, L_ - 1, m_, N_); }
    /// phi: this ring -> up()
    Coeffs phi(const Coeffs& a) const;
    /// psi: this ring -> down()
    Coeffs psi(const Coeffs& a) const;
    /// sigma with chi(sigma) = c acting by T -> T^c
    Coeffs gamma(const Coeffs& a, const mpz_class& c) const;

    /// exact evaluation at eps_j, 1 <= j <= L (needs m = 0 or any m, zeta^{p^L} = 1)
    CyclotomicElement evaluate(const Coeffs& a, int j, long B = 0) const;

private:
    void add_T_power(Coeffs& r, const mpz_class& c, const mpz_class& coef) const;

    unsigned long p_;
    int L_, m_;
    long N_;
    size_t P_, D_;
    mpz_class mod_;
    Coeffs relation_;  // (y)^{m+1} expanded in powers T^{i P}, i = 0..m
};

}  // namespace iwg
