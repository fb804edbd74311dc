/* Elementary divisors and linear solves over Z/p^N. */
#pragma once

#include "iwg/zp.hpp"

#include <cstdint>
#include <vector>

namespace iwg {

/// dense row-major matrix of residues
struct ZMatrix {
    size_t rows = 0, cols = 0;
    std::vector<mpz_class> a;

    ZMatrix() = default;
    ZMatrix(size_t r, size_t c) : rows(r), cols(c), a(r * c) {}
    mpz_class& operator()(size_t i, size_t j) { return a[i * cols + j]; }
    const mpz_class& operator()(size_t i, size_t j) const { return a[i * cols + j]; }
};

struct SmithResult {
    /// valuations of the elementary divisors that are nonzero mod p^N, ascending
    std::vector<long> vals;
    long N = 0;
    size_t rows = 0, cols = 0;

    size_t rank() const { return vals.size(); }
    size_t unit_count() const;
    /// sum of the divisor valuations (length of the torsion part)
    long torsion_length() const;
};

SmithResult smith_valuations(const ZMatrix& m, unsigned long p, long N);

/// same, on machine words; requires p^N < 2^32
SmithResult smith_valuations_u64(std::vector<uint64_t> a, size_t rows, size_t cols,
                                 unsigned long p, long N);

/* Square solver A x = b over Z/p^N with minimal-valuation pivoting.
 * Built once, reused for many right-hand sides. */
class ModSolver {
public:
    ModSolver(const ZMatrix& A, unsigned long p, long N);

    /// largest pivot valuation (0 when A is invertible mod p)
    long max_pivot_val() const { return maxv_; }
    /// x with A x = b; achieved_N receives the digits of x that are certain
    std::vector<mpz_class> solve(const std::vector<mpz_class>& b, long& achieved_N) const;

private:
    unsigned long p_;
    long N_;
    mpz_class mod_;
    size_t n_;
    ZMatrix U_;                      // upper triangular after elimination
    std::vector<size_t> rowperm_, colperm_;
    std::vector<std::vector<std::pair<size_t, mpz_class>>> ops_;  // per pivot: (row, factor)
    std::vector<long> pv_;
    std::vector<mpz_class> pinv_;    // inverse of pivot unit parts
    long maxv_ = 0;
};

}  // namespace iwg
