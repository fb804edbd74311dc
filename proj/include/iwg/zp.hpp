/* Residues modulo p^N and small p-adic helpers.
 *
 * Everything in the library stores p-adic integers as mpz residues in
 * [0, p^N).  Valuations of zero are reported as kValInf.
 */
#pragma once

#include <gmpxx.h>

#include <climits>
#include <stdexcept>
#include <string>
#include <vector>

namespace iwg {

using Coeffs = std::vector<mpz_class>;

struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* bad arguments or violated hypotheses */
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

constexpr long kValInf = LONG_MAX / 4;

bool is_prime(unsigned long n);

mpz_class ppow(unsigned long p, long e);

/// p-adic valuation of an integer, kValInf for 0.
long val_p(const mpz_class& x, unsigned long p);

/// x = p^v * w with p not dividing w; returns v (kValInf and w = 0 for x = 0).
long split_p(const mpz_class& x, unsigned long p, mpz_class& w);

/// representative in [0, m)
inline void reduce(mpz_class& x, const mpz_class& m)
{
    mpz_mod(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
}

/// inverse of a unit modulo m; throws DomainError otherwise.
mpz_class inv_mod(const mpz_class& a, const mpz_class& m);

/// Teichmuller lift of b mod p^N (b not divisible by p), by iterated p-th powers.
mpz_class teichmuller(const mpz_class& b, unsigned long p, long N);

/// v_p(n!)
long val_factorial(unsigned long n, unsigned long p);

/* Exact rational a/b with b > 0 read from "a/b" or "a". */
mpq_class parse_rational(const std::string& s);

}  // namespace iwg
