/* Dense polynomials over Z/m, coefficient vectors in increasing degree.
 *
 * All routines expect canonical residues in [0, m) and return them.
 * Products go through Kronecker substitution into a single mpz_mul once
 * both operands are longer than a small threshold.
 */
#pragma once

#include "iwg/zp.hpp"

namespace iwg::poly {

void reduce(Coeffs& a, const mpz_class& m);
void trim(Coeffs& a);
bool is_zero(const Coeffs& a);

Coeffs add(const Coeffs& a, const Coeffs& b, const mpz_class& m);
Coeffs sub(const Coeffs& a, const Coeffs& b, const mpz_class& m);
Coeffs scale(const Coeffs& a, const mpz_class& c, const mpz_class& m);

/// full product, length |a|+|b|-1
Coeffs mul(const Coeffs& a, const Coeffs& b, const mpz_class& m);
/// product truncated to n terms
Coeffs mullow(const Coeffs& a, const Coeffs& b, size_t n, const mpz_class& m);
Coeffs sqrlow(const Coeffs& a, size_t n, const mpz_class& m);
Coeffs pow_trunc(const Coeffs& a, unsigned long e, size_t n, const mpz_class& m);

/// 1/a mod x^n; a[0] must be a unit mod m
Coeffs inverse(const Coeffs& a, size_t n, const mpz_class& m);

/// a(x + s)
Coeffs taylor_shift(const Coeffs& a, long s, const mpz_class& m);

/// f(g) mod x^n, g(0) = 0
Coeffs compose(const Coeffs& f, const Coeffs& g, size_t n, const mpz_class& m);

/// f(c*x) for a scalar c
Coeffs scale_var(const Coeffs& f, const mpz_class& c, const mpz_class& m);

/// exact quotient and remainder by a monic divisor
void divrem_monic(const Coeffs& a, const Coeffs& b, Coeffs& q, Coeffs& r,
                  const mpz_class& m);

/* (1+x)^c mod (x^n, p^N) for a p-adic integer c.  c must be correct
 * modulo p^(N + v_p((n-1)!)); the binomial recurrence divides by that much. */
Coeffs binomial_series(const mpz_class& c, size_t n, unsigned long p, long N);

/// binomial coefficient C(w, i) mod p^N for p-adic w, i < p (so i! is a unit)
mpz_class small_binomial(const mpz_class& w, unsigned i, const mpz_class& m);

}  // namespace iwg::poly
