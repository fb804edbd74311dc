/* The matrices A, P, P^-1, the products H_n and script-H_n, the logarithmic
 * matrix, and the valuation tables of H-type matrices at eps_n.
 *
 * Conventions: delta = 1/u with u = (q - pi^{p-1})/p, so
 *   P^-1 = [[a_p u^{k-1}/eps, u^{k-1}], [-q^{k-1}/eps, 0]]
 * has polynomial entries.  H_1 = I and H_{n+1} = phi(H_n P^-1).
 */
#pragma once

#include "iwg/cyclo.hpp"
#include "iwg/iwasawa.hpp"
#include "iwg/level.hpp"
#include "iwg/series.hpp"
#include "iwg/valuation.hpp"

#include <array>
#include <vector>

namespace iwg {

struct HypothesisError : DomainError {
    using DomainError::DomainError;
};

struct FormParams {
    unsigned long p = 5;
    int k = 3;
    int j = 1;
    mpz_class a_p = 5;
    mpz_class eps_p = 1;
    long N = 40;

    ExtValuation v() const;
    /// throws HypothesisError when p odd, 3 <= k <= p, 1 <= j <= k-1, 2v > (k-1)/p fail
    void validate() const;
};

/// p^-B * num, numerators mod p^N
struct RationalMatrix {
    unsigned long p = 0;
    long B = 0;
    long N = 0;
    std::array<std::array<mpz_class, 2>, 2> num;

    RationalMatrix operator*(const RationalMatrix& o) const;
    mpq_class entry(int i, int j) const;
};

using LevelMatrix = std::array<std::array<Coeffs, 2>, 2>;
using IwasawaMatrix = std::array<std::array<IwasawaElement, 2>, 2>;

RationalMatrix build_A(const FormParams& fp);
RationalMatrix identity_rational(unsigned long p, long N);
RationalMatrix rational_power(const RationalMatrix& a, int n);

/// entries of P^-1 as polynomials in pi (mod p^N)
std::array<std::array<Coeffs, 2>, 2> P_inverse_polys(const FormParams& fp, long N);

SeriesMatrix build_P(const FormParams& fp, size_t M, long N);
SeriesMatrix build_P_inverse(const FormParams& fp, size_t M, long N);

SeriesMatrix series_identity(unsigned long p, size_t M, long N);
SeriesMatrix series_matmul(const SeriesMatrix& a, const SeriesMatrix& b);
SeriesMatrix series_phi(const SeriesMatrix& a);
SeriesMatrix series_scale(const SeriesMatrix& a, const RationalMatrix& r);  // r * a

SeriesMatrix compute_Hn(const FormParams& fp, int n, size_t M, long N);

/* Level-ring versions, exact modulo p^N. */
LevelMatrix level_identity(const LevelRing& R);
LevelMatrix level_matmul(const LevelRing& R, const LevelMatrix& a, const LevelMatrix& b);
LevelMatrix level_phi(const LevelRing& R, const LevelMatrix& a);  // R -> R.up()
LevelMatrix P_inverse_level(const FormParams& fp, const LevelRing& R);
/// H_n in Q_{L,m}; needs L >= n - 1
LevelMatrix Hn_level(const FormParams& fp, int n, int L, int m, long N);

/// script-H_n = Mellin^-1((1+pi) H_n) at Q_{L,m}, i.e. modulo omega_tilde_{L-1,m}
IwasawaMatrix script_H(const FormParams& fp, int n, int L, int m, long N);

struct InvalidChangeOfBasis : DomainError {
    using DomainError::DomainError;
};

/* M_log = Mellin^-1((1+pi) A phi(M)) at Q_{L,m}.  The series M is read in
 * Q_{L-1,m}; with check_mmodulo the hypothesis M = I mod pi^{k-1} is enforced. */
IwasawaMatrix logarithmic_matrix(const SeriesMatrix& M, const FormParams& fp, int L, int m,
                                 bool check_mmodulo = true);

/// M = A^{n-1} phi^{n-1}(R) phi^{n-2}(P^-1) ... P^-1 for a seed R
SeriesMatrix chain_matrix(const SeriesMatrix& R, const FormParams& fp, int n);

struct CongruenceReport {
    int n = 0;
    long B = 0;               // denominator exponent (k-1) n
    long achieved_N = 0;      // certain numerator digits of the remainder
    long target = 0;          // N - (k-1) n
    ExtValuation remainder_val;  // absolute valuation of M_log - A^n H_n, +inf if zero
    bool pass = false;
};

/// M_log - A^n script-H_n modulo omega_tilde_{n-1,k-2}
CongruenceReport check_Mlog_congruence(const SeriesMatrix& M, const FormParams& fp, int n,
                                       bool check_mmodulo = true);

enum class HnMethod { tropical, exact, closed_form };

/* statement: for odd n, v plus the odd-power sums in (1,1) and the
 * even-power sums in (1,2).
 * induction: the same sums with the two odd-n entries swapped; this is
 * what exact evaluation gives for n >= 3.  Even n is the same in both. */
enum class HForm { statement, induction };

ValMatrix h_closed_form(unsigned long p, int k, const ExtValuation& v, int n,
                        HForm form = HForm::statement);

/* Valuation table indexed like the product P^-1(eps_1) ... P^-1(eps_n),
 * which is H_{n+1}(eps_{n+1}).  See HnTable for the other indexings. */
ValMatrix valuation_matrix_Hn(const FormParams& fp, int n, HnMethod method);

/// ord of P^-1(eps_i) from the closed expressions (i >= 1)
ValMatrix evaluationP_factor(const FormParams& fp, int i);
/// exact ord of P^-1(eps_i)
ValMatrix evaluationP_factor_exact(const FormParams& fp, int i);

/// ord of script-H_{n+1}(eps_n); min_guard receives the smallest finite guard
ValMatrix script_H_valuations(const FormParams& fp, int n, ExtValuation* min_guard = nullptr);

struct HnTable {
    int n = 0;
    ValMatrix closed;       // HForm::statement
    ValMatrix induction;    // HForm::induction
    ValMatrix tropical;     // min-plus product of the factors
    ValMatrix exact;        // H_{n+1}(eps_{n+1})
    ValMatrix literal;      // H_n(eps_n)
    ValMatrix script;       // script-H_{n+1}(eps_n)
    ExtValuation min_guard; // smallest guard among finite exact entries
    bool first_row_agree = false;      // closed, tropical, exact, script
    bool induction_agree = false;      // induction, tropical, exact, script
};

HnTable hn_table(const FormParams& fp, int n);

}  // namespace iwg
