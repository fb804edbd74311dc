/* Kobayashi ranks, the modesty choice tau(n, eta), q_n^*, the growth bound
 * for Shafarevich-Tate groups and the Tamagawa-number identities.
 *
 * The formula layer works with exact rationals and general (e, d, r).
 * The oracles (Smith normal form, brute-force finite towers, exact
 * cyclotomic evaluation) work over Z_p.
 */
#pragma once

#include "iwg/logmatrix.hpp"
#include "iwg/series.hpp"
#include "iwg/valuation.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace iwg {

struct GrowthParams {
    unsigned long p = 5;
    int k = 3;
    int j = 1;
    ExtValuation v = ExtValuation(1);
    long e = 1, d = 1, r = 1;
    int n_min = 1, n_max = 4;

    /// throws HypothesisError
    void validate() const;
    /// (k-1)/(p+1)
    mpq_class K() const;
    /// p^n - p^(n-1)
    mpz_class D(int n) const;
};

struct CharacterInvariants {
    long eta = 0;
    long mu1 = 0, mu2 = 0, lambda1 = 0, lambda2 = 0;
    long kappa1 = 0, kappa2 = 0;
    long r_inf = 0;
    std::optional<long> mu0, lambda0;
    std::map<int, long> b;  // Tamagawa valuations b_n by level

    long mu(int i) const { return i == 1 ? mu1 : mu2; }
    long lambda(int i) const { return i == 1 ? lambda1 : lambda2; }
    long kappa(int i) const { return i == 1 ? kappa1 : kappa2; }
};

enum class KobVariant { b, c };
enum class KobMethod { closed_form_b, closed_form_c, oracle };

struct KobayashiRankResult {
    mpq_class value;
    KobMethod method = KobMethod::closed_form_c;
    bool defined = true;
};

/// b: e*lambda + (p^n - p^(n-1)) mu;  c: lambda + (p^n - p^(n-1)) mu
KobayashiRankResult kobayashi_rank_closed(int n, long mu, long lambda, const GrowthParams& gp,
                                          KobVariant variant);

/* Literal nabla of the tower O[[X]]/(F, omega_n) by Smith normal form of
 * multiplication by F on Z/p^N[X]/(omega_n).  With polynomial = true the
 * coefficients of F are taken as exact; otherwise the unknown tail X^M h
 * limits the precision to floor(M / p^n).  N is capped so p^N < 2^32. */
KobayashiRankResult kobayashi_rank_oracle(const TruncatedSeries& F, int n, unsigned long p,
                                          long N, bool polynomial = false);

/// least n >= 1 with p^(n-1)(p-1) > lambda
int kobayashi_threshold(unsigned long p, long lambda);

/* Finite towers.  A finite abelian p-group is a list of exponents
 * (Z/p^a1 + ... ); a homomorphism is an integer matrix acting on
 * coordinate vectors. */
struct FiniteGroup {
    std::vector<int> exps;
    long length() const;
    uint64_t order(unsigned long p) const;
};

struct FiniteMap {
    FiniteGroup src, dst;
    std::vector<std::vector<long>> mat;  // dst.exps.size() rows, src.exps.size() columns
};

/// a random well-defined homomorphism src -> dst
FiniteMap random_finite_map(const FiniteGroup& src, const FiniteGroup& dst, unsigned long p,
                            std::mt19937_64& rng);

/// len ker - len coker by enumerating the source (rank term is 0)
long finite_kobayashi_rank(const FiniteMap& f, unsigned long p);

/// tau(n, eta) in {1, 2}
int modesty_tau(int n, const CharacterInvariants& inv, const GrowthParams& gp);
int modesty_tau(int n, const mpq_class& mu1, const mpq_class& mu2, const GrowthParams& gp);

/// p^(n-1)(p-1) times the (1, tau) entry of the closed form
ExtValuation q_star(int n, int tau, const GrowthParams& gp, HForm form = HForm::statement);
/// same quantity from the exact valuation of script-H_{n+1}(eps_n)
ExtValuation q_star_exact(int n, int tau, const FormParams& fp, ExtValuation* guard = nullptr);

struct BoundBreakdown {
    int n = 0;
    int tau = 0;
    ExtValuation q_star;
    mpq_class nabla;             // lambda_tau + (p^n - p^(n-1)) mu_tau  (variant c)
    mpq_class nabla_normalized;  // lambda_tau + (p^n - p^(n-1)) mu_tau / e
    long kappa = 0;
    long r_inf = 0;
    ExtValuation value;          // d (q* + nabla_normalized + kappa - r_inf/e)
    ExtValuation theorem_form;   // r (e q* + nabla_b + e kappa - r_inf)
    bool forms_agree = false;
};

BoundBreakdown sha_growth_bound(int n, const CharacterInvariants& inv, const GrowthParams& gp);
/// recompute the bound from the breakdown fields alone
ExtValuation bound_from_breakdown(const BoundBreakdown& b, const GrowthParams& gp);

struct NablaDecomposition {
    mpq_class lhs;                      // nabla of X_i from its own invariants
    std::optional<mpq_class> nabla_col; // nabla(Lambda/Col_i)
    std::optional<mpq_class> nabla_x0;
    mpq_class kappa_term;               // e kappa_i
    std::optional<mpq_class> residual;  // lhs - (nabla_col + nabla_x0 - kappa_term)
    std::optional<long> mu_sum;         // mu_i + mu_0 (mu of X_i in the decomposition)
    std::optional<long> mu_tilde;       // mu_i - mu_0 (the alternative normalization)
};

NablaDecomposition nabla_X_i(int n, const CharacterInvariants& inv, const GrowthParams& gp,
                             int i);

struct TamagawaDefect {
    long value = 0;
    bool inconsistent = false;  // negative length
};

/// p^(n-1)(p-1) n (k-j-1)
mpz_class tamagawa_correction(int n, const GrowthParams& gp);
TamagawaDefect tamagawa_defect(int n, long b_n, long b_next, const GrowthParams& gp);
ExtValuation tamagawa_growth_delta(int n, const CharacterInvariants& inv, const GrowthParams& gp);

/* Eventual comparison of the two signed terms, from the closed forms.
 * left - right = constant + (p^n - p^(n-1)) * slope within each parity. */
struct ModestyComparison {
    int n = 0;
    ExtValuation left, right;
    bool left_smaller = false;
    bool predicted_left_smaller = false;  // branch chosen by the mu-inequalities
    mpq_class slope, constant;
    std::optional<int> threshold;         // first n of this parity from which the prediction holds
    bool matches = false;                 // prediction holds at this n
};

ModestyComparison cor_modesty_compare(int n, const CharacterInvariants& inv,
                                      const GrowthParams& gp);

/// column difference (1,1) - (1,2) of the closed form without v, per parity
mpq_class modesty_margin(int n, const GrowthParams& gp);

/* Twist lemma on an exact polynomial F in X. */
struct TwistCheck {
    int n = 0;
    ExtValuation ord_F, ord_mellin, ord_twist;
    ExtValuation min_guard;
    bool equal = false;
};

TwistCheck twist_lemma_check(const Coeffs& F, unsigned long p, int n, long N);

/* Random F = p^mu (X^lambda + p G) U with deg G < lambda and U a unit
 * polynomial; returned as exact coefficients mod p^N. */
Coeffs random_iwasawa_poly(unsigned long p, long mu, long lambda, long N, std::mt19937_64& rng);

}  // namespace iwg
