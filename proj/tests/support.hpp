/* Shared helpers for the unit tests: seeded random data and small oracles. */
#pragma once

#include "iwg/series.hpp"
#include "iwg/valuation.hpp"
#include "iwg/zp.hpp"

#include <random>

namespace iwg::test {

constexpr uint64_t kSeed = 0x5eed2024;

inline mpz_class random_residue(const mpz_class& m, std::mt19937_64& rng)
{
    mpz_class x = (unsigned long) rng();
    x <<= 64;
    x += (unsigned long) rng();
    return x % m;
}

inline Coeffs random_coeffs(size_t len, unsigned long p, long N, std::mt19937_64& rng)
{
    mpz_class m = ppow(p, N);
    Coeffs c(len);
    for (auto& x : c)
        x = random_residue(m, rng);
    return c;
}

inline TruncatedSeries random_series(unsigned long p, size_t M, long N, std::mt19937_64& rng,
                                     size_t nonzero = SIZE_MAX)
{
    return TruncatedSeries(p, random_coeffs(std::min(M, nonzero), p, N, rng), M, N);
}

/// random unit series: constant term prime to p
inline TruncatedSeries random_unit(unsigned long p, size_t M, long N, std::mt19937_64& rng)
{
    Coeffs c = random_coeffs(M, p, N, rng);
    if (mpz_divisible_ui_p(c[0].get_mpz_t(), p))
        c[0] += 1;
    return TruncatedSeries(p, c, M, N);
}

inline ExtValuation random_val(std::mt19937_64& rng)
{
    if (rng() % 6 == 0)
        return ExtValuation::infinity();
    return ExtValuation((long) (rng() % 41) - 20, 1 + (long) (rng() % 12));
}

}  // namespace iwg::test
