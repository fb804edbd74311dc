#include "iwg/smith.hpp"

#include <algorithm>

namespace iwg {

size_t SmithResult::unit_count() const
{
    return (size_t) std::count(vals.begin(), vals.end(), 0L);
}

long SmithResult::torsion_length() const
{
    long s = 0;
    for (long v : vals)
        s += v;
    return s;
}

SmithResult smith_valuations(const ZMatrix& in, unsigned long p, long N)
{
    mpz_class m = ppow(p, N);
    ZMatrix a = in;
    for (auto& x : a.a)
        reduce(x, m);
    size_t R = a.rows, C = a.cols;
    SmithResult res;
    res.N = N;
    res.rows = R;
    res.cols = C;
    long floor_v = 0;
    for (size_t k = 0; k < std::min(R, C); k++) {
        /* pivot of least valuation; valuations never drop below the last pivot */
        long best = kValInf;
        size_t bi = 0, bj = 0;
        for (size_t i = k; i < R && best > floor_v; i++)
            for (size_t j = k; j < C; j++) {
                if (sgn(a(i, j)) == 0)
                    continue;
                long v = val_p(a(i, j), p);
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                    if (v == floor_v)
                        break;
                }
            }
        if (best == kValInf)
            break;
        floor_v = best;
        if (bi != k)
            for (size_t j = 0; j < C; j++)
                std::swap(a(k, j), a(bi, j));
        if (bj != k)
            for (size_t i = 0; i < R; i++)
                std::swap(a(i, k), a(i, bj));
        mpz_class pv = ppow(p, best), u, f;
        mpz_divexact(u.get_mpz_t(), a(k, k).get_mpz_t(), pv.get_mpz_t());
        mpz_class uinv = inv_mod(u, m);
        for (size_t i = k + 1; i < R; i++) {
            if (sgn(a(i, k)) == 0)
                continue;
            mpz_divexact(f.get_mpz_t(), a(i, k).get_mpz_t(), pv.get_mpz_t());
            f *= uinv;
            reduce(f, m);
            for (size_t j = k + 1; j < C; j++) {
                if (sgn(a(k, j)) == 0)
                    continue;
                mpz_submul(a(i, j).get_mpz_t(), f.get_mpz_t(), a(k, j).get_mpz_t());
                reduce(a(i, j), m);
            }
            a(i, k) = 0;
        }
        res.vals.push_back(best);
    }
    std::sort(res.vals.begin(), res.vals.end());
    return res;
}

SmithResult smith_valuations_u64(std::vector<uint64_t> a, size_t R, size_t C, unsigned long p,
                                 long N)
{
    mpz_class mm = ppow(p, N);
    if (mpz_sizeinbase(mm.get_mpz_t(), 2) > 32)
        throw DomainError("smith_valuations_u64 needs p^N < 2^32");
    const uint64_t m = mm.get_ui();
    for (auto& x : a)
        x %= m;
    auto at = [&](size_t i, size_t j) -> uint64_t& { return a[i * C + j]; };
    auto vp = [&](uint64_t x) {
        long v = 0;
        while (x % p == 0) {
            x /= p;
            v++;
        }
        return v;
    };
    auto inv = [&](uint64_t x) { return inv_mod(mpz_class((unsigned long) x), mm).get_ui(); };

    SmithResult res;
    res.N = N;
    res.rows = R;
    res.cols = C;
    long floor_v = 0;
    std::vector<uint64_t> ppows(N + 1, 1);
    for (long i = 1; i <= N; i++)
        ppows[i] = ppows[i - 1] * p;
    for (size_t k = 0; k < std::min(R, C); k++) {
        long best = kValInf;
        size_t bi = 0, bj = 0;
        for (size_t i = k; i < R && best > floor_v; i++)
            for (size_t j = k; j < C; j++) {
                uint64_t x = at(i, j);
                if (x == 0)
                    continue;
                long v = vp(x);
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                    if (v == floor_v)
                        break;
                }
            }
        if (best == kValInf)
            break;
        floor_v = best;
        if (bi != k)
            for (size_t j = 0; j < C; j++)
                std::swap(at(k, j), at(bi, j));
        if (bj != k)
            for (size_t i = 0; i < R; i++)
                std::swap(at(i, k), at(i, bj));
        uint64_t pv = ppows[best];
        uint64_t uinv = inv(at(k, k) / pv);
        uint64_t* rowk = &a[k * C];
        for (size_t i = k + 1; i < R; i++) {
            uint64_t x = at(i, k);
            if (x == 0)
                continue;
            uint64_t f = (x / pv) * uinv % m;
            uint64_t nf = f ? m - f : 0;
            uint64_t* rowi = &a[i * C];
            for (size_t j = k + 1; j < C; j++)
                if (rowk[j])
                    rowi[j] = (rowi[j] + nf * rowk[j]) % m;
            rowi[k] = 0;
        }
        res.vals.push_back(best);
    }
    std::sort(res.vals.begin(), res.vals.end());
    return res;
}

ModSolver::ModSolver(const ZMatrix& A, unsigned long p, long N)
    : p_(p), N_(N), mod_(ppow(p, N)), n_(A.rows), U_(A)
{
    if (A.rows != A.cols)
        throw DomainError("ModSolver needs a square matrix");
    for (auto& x : U_.a)
        reduce(x, mod_);
    colperm_.resize(n_);
    for (size_t i = 0; i < n_; i++)
        colperm_[i] = i;
    rowperm_.resize(n_);
    ops_.resize(n_);
    pv_.resize(n_);
    pinv_.resize(n_);
    for (size_t k = 0; k < n_; k++) {
        long best = kValInf;
        size_t bi = 0, bj = 0;
        for (size_t i = k; i < n_ && best > 0; i++)
            for (size_t j = k; j < n_; j++) {
                if (sgn(U_(i, j)) == 0)
                    continue;
                long v = val_p(U_(i, j), p);
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                    if (v == 0)
                        break;
                }
            }
        if (best == kValInf)
            throw PrecisionError("system singular at precision N=" + std::to_string(N));
        rowperm_[k] = bi;
        if (bi != k)
            for (size_t j = 0; j < n_; j++)
                std::swap(U_(k, j), U_(bi, j));
        if (bj != k) {
            for (size_t i = 0; i < n_; i++)
                std::swap(U_(i, k), U_(i, bj));
            std::swap(colperm_[k], colperm_[bj]);
        }
        mpz_class pv = ppow(p, best), u, f;
        mpz_divexact(u.get_mpz_t(), U_(k, k).get_mpz_t(), pv.get_mpz_t());
        pv_[k] = best;
        pinv_[k] = inv_mod(u, mod_);
        maxv_ = std::max(maxv_, best);
        for (size_t i = k + 1; i < n_; i++) {
            if (sgn(U_(i, k)) == 0)
                continue;
            mpz_divexact(f.get_mpz_t(), U_(i, k).get_mpz_t(), pv.get_mpz_t());
            f *= pinv_[k];
            reduce(f, mod_);
            for (size_t j = k + 1; j < n_; j++) {
                if (sgn(U_(k, j)) == 0)
                    continue;
                mpz_submul(U_(i, j).get_mpz_t(), f.get_mpz_t(), U_(k, j).get_mpz_t());
                reduce(U_(i, j), mod_);
            }
            U_(i, k) = 0;
            ops_[k].emplace_back(i, f);
        }
    }
}

std::vector<mpz_class> ModSolver::solve(const std::vector<mpz_class>& b_in, long& achieved_N) const
{
    if (b_in.size() != n_)
        throw DomainError("ModSolver::solve: size mismatch");
    std::vector<mpz_class> b = b_in;
    for (auto& x : b)
        reduce(x, mod_);
    for (size_t k = 0; k < n_; k++) {
        if (rowperm_[k] != k)
            std::swap(b[k], b[rowperm_[k]]);
        for (auto& [i, f] : ops_[k]) {
            mpz_submul(b[i].get_mpz_t(), f.get_mpz_t(), b[k].get_mpz_t());
            reduce(b[i], mod_);
        }
    }
    std::vector<mpz_class> y(n_);
    std::vector<long> prec(n_, N_);
    achieved_N = N_;
    for (size_t k = n_; k-- > 0;) {
        mpz_class s = b[k];
        long pk = N_;
        for (size_t j = k + 1; j < n_; j++)
            if (sgn(U_(k, j))) {
                mpz_submul(s.get_mpz_t(), U_(k, j).get_mpz_t(), y[j].get_mpz_t());
                pk = std::min(pk, prec[j]);
            }
        reduce(s, mod_);
        if (pv_[k]) {
            mpz_class pv = ppow(p_, pv_[k]);
            if (!mpz_divisible_p(s.get_mpz_t(), pv.get_mpz_t()))
                throw DomainError("system inconsistent");
            mpz_divexact(s.get_mpz_t(), s.get_mpz_t(), pv.get_mpz_t());
        }
        s *= pinv_[k];
        reduce(s, mod_);
        y[k] = s;
        prec[k] = pk - pv_[k];
        achieved_N = std::min(achieved_N, prec[k]);
    }
    std::vector<mpz_class> x(n_);
    for (size_t k = 0; k < n_; k++)
        x[colperm_[k]] = y[k];
    return x;
}

}  // namespace iwg
