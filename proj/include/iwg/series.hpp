/* Truncated power series over Z_p with a global denominator p^-B.
 *
 * A TruncatedSeries stands for p^-B * sum c_i pi^i, known modulo pi^M
 * and with numerators known modulo p^N.  The same type is used for
 * series in X = gamma_1 - 1 on the Iwasawa side.
 */
#pragma once

#include "iwg/valuation.hpp"
#include "iwg/zp.hpp"

#include <string>

namespace iwg {

class TruncatedSeries {
public:
    TruncatedSeries() = default;
    /// the zero series
    TruncatedSeries(unsigned long p, size_t M, long N, long B = 0);
    TruncatedSeries(unsigned long p, Coeffs c, size_t M, long N, long B = 0);

    static TruncatedSeries constant(unsigned long p, const mpz_class& c, size_t M, long N);
    static TruncatedSeries one(unsigned long p, size_t M, long N) { return constant(p, 1, M, N); }
    static TruncatedSeries variable(unsigned long p, size_t M, long N);

    unsigned long p() const { return p_; }
    size_t M() const { return M_; }
    long N() const { return N_; }
    long B() const { return B_; }
    /// absolute precision N - B
    long abs_precision() const { return N_ - B_; }
    const Coeffs& coeffs() const { return c_; }
    const mpz_class& coeff(size_t i) const { return c_[i]; }
    mpz_class modulus() const { return ppow(p_, N_); }

    TruncatedSeries operator+(const TruncatedSeries& o) const;
    TruncatedSeries operator-(const TruncatedSeries& o) const;
    TruncatedSeries operator-() const;
    TruncatedSeries operator*(const TruncatedSeries& o) const;
    TruncatedSeries scaled(const mpz_class& c) const;

    /// multiply by p^-e without touching numerators
    TruncatedSeries div_p_power(long e) const;
    /// drop common factors of p from the numerators into B (value unchanged)
    TruncatedSeries normalized() const;
    /// re-express with denominator exponent B' >= B
    TruncatedSeries with_denominator(long B) const;

    TruncatedSeries truncated(size_t M) const;
    TruncatedSeries with_precision(long N) const;

    /// 1/f for f with unit constant term
    TruncatedSeries inverse() const;

    /// every numerator is zero mod p^N
    bool is_zero() const;
    /// min_i ord_p(c_i) - B over coefficients nonzero mod p^N; +inf if none
    ExtValuation min_coeff_valuation() const;

    bool same_as(const TruncatedSeries& o) const;
    /// equality after reducing both to common (M, absolute precision)
    bool congruent(const TruncatedSeries& o) const;

    std::string str(const char* var = "pi") const;

private:
    unsigned long p_ = 0;
    size_t M_ = 0;
    long N_ = 0, B_ = 0;
    Coeffs c_;
};

struct IwasawaInvariants {
    long mu = 0;
    long lambda = 0;
    long e = 1;
};

struct NewtonBound {
    ExtValuation value;
    bool exact = false;
};

/// pi -> (1+pi)^p - 1
TruncatedSeries phi(const TruncatedSeries& f);
/// left inverse of phi; output degree defaults to max(1, floor(M/2p))
TruncatedSeries psi(const TruncatedSeries& f);
TruncatedSeries psi(const TruncatedSeries& f, size_t M_out);
/// pi -> (1+pi)^c - 1 for an exact p-adic unit c given as an integer
TruncatedSeries gamma_act(const TruncatedSeries& f, const mpz_class& c);
/// (1+pi) d/dpi; loses one term of truncation
TruncatedSeries boundary_op(const TruncatedSeries& f);

TruncatedSeries q_element(unsigned long p, size_t M, long N);
TruncatedSeries delta_element(unsigned long p, size_t M, long N);
/// u = (q - pi^(p-1))/p = 1/delta, an integral polynomial of degree p-2
Coeffs u_polynomial(unsigned long p, long N);
Coeffs q_polynomial(unsigned long p, long N);

IwasawaInvariants iwasawa_invariants(const TruncatedSeries& f);
NewtonBound newton_lower_bound(const IwasawaInvariants& inv, const ExtValuation& ordx);

}  // namespace iwg
