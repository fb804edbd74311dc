/* Extended rational valuations and 2x2 min-plus matrices. */
#pragma once

#include <gmpxx.h>

#include <array>
#include <ostream>
#include <string>

namespace iwg {

class ExtValuation {
public:
    ExtValuation() : inf_(true) {}
    ExtValuation(long v) : inf_(false), q_(v) {}
    ExtValuation(const mpq_class& q) : inf_(false), q_(q) { q_.canonicalize(); }
    ExtValuation(long num, long den);

    static ExtValuation infinity() { return ExtValuation(); }

    bool is_inf() const { return inf_; }
    /// the rational value; throws on +infinity
    const mpq_class& value() const;

    ExtValuation operator+(const ExtValuation& o) const;
    ExtValuation operator-(const ExtValuation& o) const;  // rhs must be finite
    ExtValuation operator*(const mpq_class& s) const;      // s > 0 keeps +inf

    bool operator==(const ExtValuation& o) const;
    bool operator!=(const ExtValuation& o) const { return !(*this == o); }
    bool operator<(const ExtValuation& o) const;
    bool operator<=(const ExtValuation& o) const { return !(o < *this); }
    bool operator>(const ExtValuation& o) const { return o < *this; }
    bool operator>=(const ExtValuation& o) const { return !(*this < o); }

    /// "inf", "3", "-2/5"
    std::string str() const;
    static ExtValuation parse(const std::string& s);

private:
    bool inf_;
    mpq_class q_;
};

std::ostream& operator<<(std::ostream& os, const ExtValuation& v);

ExtValuation vmin(const ExtValuation& a, const ExtValuation& b);
/// min with a tie indicator (set when a == b)
ExtValuation vmin(const ExtValuation& a, const ExtValuation& b, bool& tie);

struct ValMatrix {
    std::array<std::array<ExtValuation, 2>, 2> e;
    std::array<std::array<bool, 2>, 2> unique{{{true, true}, {true, true}}};

    static ValMatrix identity();
    static ValMatrix from(const ExtValuation& a, const ExtValuation& b,
                          const ExtValuation& c, const ExtValuation& d);

    const ExtValuation& operator()(int i, int j) const { return e[i][j]; }
    ExtValuation& operator()(int i, int j) { return e[i][j]; }
    bool same_values(const ValMatrix& o) const;
    std::string str() const;
};

ValMatrix trop_matmul(const ValMatrix& a, const ValMatrix& b);

/// w * p^(n-1) (p-1), the valuation normalized so that ord(eps_n) = 1
ExtValuation eps_order(const ExtValuation& w, unsigned long p, int n);

}  // namespace iwg
