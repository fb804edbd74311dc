#include "iwg/zp.hpp"

#include <cctype>

namespace iwg {

bool is_prime(unsigned long n)
{
    if (n < 2)
        return false;
    for (unsigned long d = 2; d * d <= n; d++)
        if (n % d == 0)
            return false;
    return true;
}

mpz_class ppow(unsigned long p, long e)
{
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), p, e < 0 ? 0 : (unsigned long) e);
    return r;
}

long val_p(const mpz_class& x, unsigned long p)
{
    if (sgn(x) == 0)
        return kValInf;
    if (p == 2)
        return (long) mpz_scan1(x.get_mpz_t(), 0);
    mpz_class w = x;
    long v = 0;
    while (mpz_divisible_ui_p(w.get_mpz_t(), p)) {
        mpz_divexact_ui(w.get_mpz_t(), w.get_mpz_t(), p);
        v++;
    }
    return v;
}

long split_p(const mpz_class& x, unsigned long p, mpz_class& w)
{
    if (sgn(x) == 0) {
        w = 0;
        return kValInf;
    }
    w = x;
    long v = 0;
    while (mpz_divisible_ui_p(w.get_mpz_t(), p)) {
        mpz_divexact_ui(w.get_mpz_t(), w.get_mpz_t(), p);
        v++;
    }
    return v;
}

mpz_class inv_mod(const mpz_class& a, const mpz_class& m)
{
    mpz_class r;
    if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t())) {
        if (m == 1)
            return 0;
        throw DomainError("element is not a unit");
    }
    return r;
}

mpz_class teichmuller(const mpz_class& b, unsigned long p, long N)
{
    mpz_class m = ppow(p, N), x = b;
    reduce(x, m);
    if (mpz_divisible_ui_p(x.get_mpz_t(), p))
        throw DomainError("teichmuller lift of a non-unit");
    for (long i = 1; i < N; i++)
        mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), p, m.get_mpz_t());
    return x;
}

long val_factorial(unsigned long n, unsigned long p)
{
    long v = 0;
    while (n) {
        n /= p;
        v += (long) n;
    }
    return v;
}

mpq_class parse_rational(const std::string& s)
{
    std::string t;
    for (char c : s)
        if (!std::isspace((unsigned char) c))
            t += c;
    auto bad = [&] { return DomainError("malformed rational '" + s + "'"); };
    if (t.empty())
        throw bad();
    auto valid_int = [](const std::string& u) {
        size_t i = (!u.empty() && (u[0] == '-' || u[0] == '+')) ? 1 : 0;
        if (i >= u.size())
            return false;
        for (; i < u.size(); i++)
            if (!std::isdigit((unsigned char) u[i]))
                return false;
        return true;
    };
    size_t slash = t.find('/');
    std::string num = t.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : t.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den))
        throw bad();
    if (num[0] == '+')
        num.erase(0, 1);
    if (den[0] == '+')
        den.erase(0, 1);
    mpq_class q;
    q.get_num() = mpz_class(num);
    q.get_den() = mpz_class(den);
    if (q.get_den() == 0)
        throw bad();
    q.canonicalize();
    return q;
}

}  // namespace iwg
