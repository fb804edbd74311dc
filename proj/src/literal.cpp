#include "iwg/literal.hpp"

#include "iwg/poly.hpp"

#include <cctype>
#include <cstring>

namespace iwg {

namespace {

class Parser {
public:
    Parser(const std::string& s, unsigned long p, long N) : p_(p), mod_(ppow(p, N))
    {
        for (char c : s)
            if (!std::isspace((unsigned char) c))
                s_ += c;
    }

    TruncatedSeries parse(size_t M, long N)
    {
        long B = 0;
        size_t save = i_;
        if (peek("p^")) {
            i_ += 2;
            long e = integer();
            if (peek("^-1*")) {
                i_ += 4;
                B = e;
            } else {
                i_ = save;
            }
        }
        Coeffs c = poly_expr();
        if (i_ != s_.size())
            fail("unexpected trailing input");
        if (c.size() > M)
            c.resize(M);
        return TruncatedSeries(p_, c, M, N, B);
    }

private:
    bool peek(const char* t) const { return s_.compare(i_, std::strlen(t), t) == 0; }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw DomainError("series literal: " + what + " at position " + std::to_string(i_) +
                          " in \"" + s_ + "\"");
    }

    void expect(char c)
    {
        if (i_ >= s_.size() || s_[i_] != c)
            fail(std::string("expected '") + c + "'");
        i_++;
    }

    long integer()
    {
        size_t st = i_;
        while (i_ < s_.size() && std::isdigit((unsigned char) s_[i_]))
            i_++;
        if (st == i_)
            fail("expected an integer");
        if (i_ - st > 18)
            fail("integer too long");
        return std::stol(s_.substr(st, i_ - st));
    }

    mpz_class big_integer()
    {
        size_t st = i_;
        while (i_ < s_.size() && std::isdigit((unsigned char) s_[i_]))
            i_++;
        if (st == i_)
            fail("expected an integer");
        return mpz_class(s_.substr(st, i_ - st));
    }

    long exponent()
    {
        if (i_ < s_.size() && s_[i_] == '^') {
            i_++;
            return integer();
        }
        return 1;
    }

    Coeffs monomial(const mpz_class& a, size_t deg)
    {
        if (deg > (1u << 24))
            fail("degree too large");
        Coeffs r(deg + 1);
        r[deg] = a;
        poly::reduce(r, mod_);
        return r;
    }

    Coeffs factor()
    {
        if (i_ < s_.size() && s_[i_] == '(') {
            i_++;
            Coeffs r = poly_expr();
            expect(')');
            return r;
        }
        if (i_ < s_.size() && std::isdigit((unsigned char) s_[i_]))
            return monomial(big_integer(), 0);
        if (peek("pi")) {
            i_ += 2;
            return monomial(1, exponent());
        }
        if (peek("X")) {
            i_ += 1;
            return monomial(1, exponent());
        }
        if (peek("p")) {
            i_ += 1;
            return monomial(ppow(p_, exponent()), 0);
        }
        fail("expected a number, p, X, pi or '('");
    }

    Coeffs poly_expr()
    {
        Coeffs out;
        bool first = true;
        while (true) {
            int sign = 1;
            if (i_ < s_.size() && (s_[i_] == '+' || s_[i_] == '-')) {
                sign = s_[i_] == '-' ? -1 : 1;
                i_++;
            } else if (!first) {
                break;
            }
            first = false;
            Coeffs t = factor();
            while (i_ < s_.size() && s_[i_] == '*') {
                i_++;
                t = poly::mul(t, factor(), mod_);
            }
            if (sign < 0)
                t = poly::scale(t, -1, mod_);
            out = poly::add(out, t, mod_);
        }
        return out;
    }

    std::string s_;
    size_t i_ = 0;
    unsigned long p_;
    mpz_class mod_;
};

}  // namespace

TruncatedSeries parse_series_literal(const std::string& text, unsigned long p, size_t M, long N)
{
    Parser ps(text, p, N);
    return ps.parse(M, N);
}

std::string format_series_literal(const TruncatedSeries& f)
{
    std::string body;
    for (size_t i = 0; i < f.coeffs().size(); i++) {
        const mpz_class& c = f.coeffs()[i];
        if (sgn(c) == 0)
            continue;
        if (!body.empty())
            body += " + ";
        body += c.get_str();
        if (i >= 1)
            body += "*X";
        if (i >= 2)
            body += "^" + std::to_string(i);
    }
    if (body.empty())
        body = "0";
    if (f.B() > 0)
        return "p^" + std::to_string(f.B()) + "^-1 * (" + body + ")";
    return body;
}

}  // namespace iwg
