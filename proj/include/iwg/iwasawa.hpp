/* The Iwasawa algebra Z_p[Delta][[X]], X = gamma_1 - 1, chi(gamma_1) = u = 1 + p.
 *
 * Elements are stored as p-1 isotypic components e_a g_a(X), where e_a is the
 * idempotent of the character omega^a (omega = Teichmuller).  Elements that
 * come out of a finite-level Mellin inversion are exact polynomials reduced
 * modulo omega_tilde_{n,m} and carry that modulus.
 */
#pragma once

#include "iwg/level.hpp"
#include "iwg/series.hpp"
#include "iwg/smith.hpp"

#include <optional>
#include <vector>

namespace iwg {

struct CyclotomicUnit {
    mpz_class u;
    explicit CyclotomicUnit(unsigned long p);  // 1 + p
    /// u^m mod p^N (m may be negative)
    mpz_class power(long m, unsigned long p, long N) const;
};

struct Reduction {
    int n = 0;  // reduced modulo omega_tilde_{n,m}
    int m = 0;
};

struct IwasawaElement {
    unsigned long p = 0;
    std::vector<TruncatedSeries> comp;  // index a in Z/(p-1)
    bool polynomial = false;            // components are exact polynomials in X
    std::optional<Reduction> reduced;

    /// element of Z_p[[Gamma_1]]: every isotypic component equal to f
    static IwasawaElement from_gamma1(const TruncatedSeries& f, bool polynomial = false);
    static IwasawaElement one(unsigned long p, size_t M, long N);

    const TruncatedSeries& component(long a) const;
    /// all components agree (element of Z_p[[Gamma_1]])
    bool in_gamma1() const;
    /// componentwise congruence at common precision
    bool congruent(const IwasawaElement& o) const;
};

/* omega_n = (1+X)^{p^n} - 1, omega_{n,m} = omega_n(u^-m (1+X) - 1),
 * omega_tilde_{n,m} = prod_{i=0}^m omega_{n,i}; coefficients mod p^N. */
Coeffs omega(unsigned long p, int n, long N);
Coeffs omega_twisted(unsigned long p, int n, int m, long N);
Coeffs omega_tilde(unsigned long p, int n, int m, long N);

/// Tw^m
IwasawaElement twist(const IwasawaElement& g, long m);

/// g acting on (1 + pi), as a series mod (pi^M, p^N)
TruncatedSeries mellin(const IwasawaElement& g, size_t M, long N);

/// finite-level Mellin transform into Q_{L,m}; g must be polynomial
Coeffs mellin_level(const LevelRing& R, const IwasawaElement& g);

/* Inverse at level L of Q_{L,m}: the unique g modulo omega_tilde_{L-1,m}
 * with mellin(g) = h.  h must lie in the psi = 0 part; N_in is the number
 * of certain digits of h.  The result's components carry the achieved
 * precision. */
IwasawaElement mellin_inverse_level(const LevelRing& R, const Coeffs& h, long N_in, long B = 0);

/// series front end: reduces h into Q_{n,m}
IwasawaElement mellin_inverse(const TruncatedSeries& h, int n, int m = 0);

/// matrix of sigma(1+pi), sigma in Gamma / Gamma_L (times m+1 powers), in Q_{L,m}
ZMatrix mellin_matrix(unsigned long p, int L, int m, long N);
/// same matrix, columns built from binomial series (1+pi)^c instead of level-ring powers
ZMatrix mellin_matrix_series(unsigned long p, int L, int m, long N);

/// T^j coefficients with p | j vanish
bool in_psi_zero(const LevelRing& R, const Coeffs& h, long N_in);

/// evaluate component a at eps_j; exact when the element is polynomial
CyclotomicElement evaluate_component(const IwasawaElement& g, long a, int j);

/// discrete logarithm base u of a residue c = 1 mod p, modulo p^L (result < p^(L-1))
size_t dlog_u(const mpz_class& c, unsigned long p, int L);

}  // namespace iwg
