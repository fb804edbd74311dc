#include "iwg/valuation.hpp"

#include "iwg/zp.hpp"

#include <sstream>

namespace iwg {

ExtValuation::ExtValuation(long num, long den) : inf_(false), q_(num, den)
{
    if (den == 0)
        throw DomainError("zero denominator");
    q_.canonicalize();
}

const mpq_class& ExtValuation::value() const
{
    if (inf_)
        throw DomainError("value() of +infinity");
    return q_;
}

ExtValuation ExtValuation::operator+(const ExtValuation& o) const
{
    if (inf_ || o.inf_)
        return infinity();
    return ExtValuation(mpq_class(q_ + o.q_));
}

ExtValuation ExtValuation::operator-(const ExtValuation& o) const
{
    if (o.inf_)
        throw DomainError("subtracting +infinity");
    if (inf_)
        return infinity();
    return ExtValuation(mpq_class(q_ - o.q_));
}

ExtValuation ExtValuation::operator*(const mpq_class& s) const
{
    if (sgn(s) <= 0)
        throw DomainError("valuation scaled by a non-positive factor");
    if (inf_)
        return infinity();
    return ExtValuation(mpq_class(q_ * s));
}

bool ExtValuation::operator==(const ExtValuation& o) const
{
    if (inf_ || o.inf_)
        return inf_ == o.inf_;
    return q_ == o.q_;
}

bool ExtValuation::operator<(const ExtValuation& o) const
{
    if (inf_)
        return false;
    if (o.inf_)
        return true;
    return q_ < o.q_;
}

std::string ExtValuation::str() const
{
    return inf_ ? std::string("inf") : q_.get_str();
}

ExtValuation ExtValuation::parse(const std::string& s)
{
    if (s == "inf" || s == "+inf" || s == "infinity")
        return infinity();
    return ExtValuation(parse_rational(s));
}

std::ostream& operator<<(std::ostream& os, const ExtValuation& v)
{
    return os << v.str();
}

ExtValuation vmin(const ExtValuation& a, const ExtValuation& b)
{
    return b < a ? b : a;
}

ExtValuation vmin(const ExtValuation& a, const ExtValuation& b, bool& tie)
{
    tie = (a == b);
    return vmin(a, b);
}

ValMatrix ValMatrix::identity()
{
    return from(0, ExtValuation::infinity(), ExtValuation::infinity(), 0);
}

ValMatrix ValMatrix::from(const ExtValuation& a, const ExtValuation& b,
                          const ExtValuation& c, const ExtValuation& d)
{
    ValMatrix m;
    m.e = {{{a, b}, {c, d}}};
    return m;
}

bool ValMatrix::same_values(const ValMatrix& o) const
{
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++)
            if (e[i][j] != o.e[i][j])
                return false;
    return true;
}

std::string ValMatrix::str() const
{
    std::ostringstream os;
    os << "[[" << e[0][0] << ", " << e[0][1] << "], [" << e[1][0] << ", " << e[1][1] << "]]";
    return os.str();
}

ValMatrix trop_matmul(const ValMatrix& a, const ValMatrix& b)
{
    ValMatrix r;
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++) {
            ExtValuation t0 = a.e[i][0] + b.e[0][j];
            ExtValuation t1 = a.e[i][1] + b.e[1][j];
            r.e[i][j] = vmin(t0, t1);
            if (r.e[i][j].is_inf() || t0 == t1) {
                r.unique[i][j] = false;
            } else {
                int k = t0 < t1 ? 0 : 1;
                r.unique[i][j] = a.unique[i][k] && b.unique[k][j];
            }
        }
    return r;
}

ExtValuation eps_order(const ExtValuation& w, unsigned long p, int n)
{
    if (n < 1)
        throw DomainError("eps_order needs n >= 1");
    mpz_class d = ppow(p, n - 1) * (p - 1);
    return w * mpq_class(d);
}

}  // namespace iwg
