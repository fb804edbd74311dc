/* Elements of Z_p[zeta_{p^n}] in the power basis of eps_n = zeta_{p^n} - 1.
 *
 * An element stores p^-B * sum c_i eps^i with numerators mod p^N and an
 * absolute lower bound trunc_guard on the valuation of whatever was lost
 * by truncating the series it came from (+inf for exact inputs).
 */
#pragma once

#include "iwg/series.hpp"
#include "iwg/valuation.hpp"

#include <array>

namespace iwg {

struct CycloValuation {
    ExtValuation value;          // exact valuation, or the cap when zero_within_precision
    bool zero_within_precision = false;
    ExtValuation cap;            // min(N - B, trunc_guard)
    ExtValuation guard;          // cap - value; +inf for exact zeros of infinite cap
};

class CyclotomicElement {
public:
    CyclotomicElement() = default;
    CyclotomicElement(unsigned long p, int n, Coeffs coords, long N, long B = 0,
                      ExtValuation trunc_guard = ExtValuation::infinity());

    static CyclotomicElement eps_power(unsigned long p, int n, size_t j, long N);

    unsigned long p() const { return p_; }
    int level() const { return n_; }
    size_t degree() const { return coords_.size(); }
    long N() const { return N_; }
    long B() const { return B_; }
    const ExtValuation& trunc_guard() const { return guard_; }
    const Coeffs& coords() const { return coords_; }

    CyclotomicElement operator+(const CyclotomicElement& o) const;
    CyclotomicElement operator-(const CyclotomicElement& o) const;
    CyclotomicElement operator*(const CyclotomicElement& o) const;

    CycloValuation valuation() const;

private:
    unsigned long p_ = 0;
    int n_ = 0;
    long N_ = 0, B_ = 0;
    ExtValuation guard_;
    Coeffs coords_;
};

/// Phi_{p^n}(1 + pi) mod p^N, monic of degree p^(n-1)(p-1)
Coeffs min_poly_eps(unsigned long p, int n, long N);

/// reduce a polynomial in T = 1 + pi modulo Phi_{p^n}(T); result has length d
Coeffs reduce_mod_cyclotomic(const Coeffs& t_poly, unsigned long p, int n, const mpz_class& m);

/// exact evaluation of a polynomial in T at T = zeta_{p^n}
CyclotomicElement evaluate_T_poly(const Coeffs& t_poly, unsigned long p, int n, long N,
                                  long B = 0);
/// exact evaluation of a polynomial in pi (or X) at eps_n
CyclotomicElement evaluate_poly_at_eps(const Coeffs& poly, unsigned long p, int n, long N,
                                       long B = 0);
/// evaluation of a truncated series; records the truncation guard M/d - B
CyclotomicElement evaluate_at_eps(const TruncatedSeries& f, int n);

CycloValuation valuation(const CyclotomicElement& x);
/// valuation that must be exact with guard >= min_guard, else PrecisionError
ExtValuation exact_valuation(const CyclotomicElement& x, long min_guard = 2);

using SeriesMatrix = std::array<std::array<TruncatedSeries, 2>, 2>;

struct CycloMatrix {
    std::array<std::array<CyclotomicElement, 2>, 2> entry;
    std::array<std::array<CycloValuation, 2>, 2> val;
    ValMatrix ord() const;
};

CycloMatrix matrix_evaluate_at_eps(const SeriesMatrix& m, int n);
CycloMatrix make_cyclo_matrix(const std::array<std::array<CyclotomicElement, 2>, 2>& e);

}  // namespace iwg
