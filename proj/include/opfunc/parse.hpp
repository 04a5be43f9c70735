#pragma once

#include <cctype>
#include <cmath>
#include <string>
#include <string_view>

#include "opfunc/expr.hpp"
#include "opfunc/interval.hpp"

namespace opfunc {

namespace detail {

/// Recursive-descent parser for the function mini-grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | power
///   power  := atom ('^' factor)?        exponent must not depend on t
///   atom   := number | 't' | 'pi' | 'inf' | fn '(' expr ')' | '(' expr ')'
///   fn     := exp | log | tan | sqrt
class FuncParser {
  public:
    explicit FuncParser(std::string_view text) : s_(text) {}

    FuncExpr parse() {
        FuncExpr e = parse_expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return e;
    }

  private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    FuncExpr parse_expr() {
        FuncExpr e = parse_term();
        for (;;) {
            if (accept('+'))
                e = e + parse_term();
            else if (accept('-'))
                e = e - parse_term();
            else
                return e;
        }
    }

    FuncExpr parse_term() {
        FuncExpr e = parse_factor();
        for (;;) {
            if (accept('*'))
                e = e * parse_factor();
            else if (accept('/'))
                e = e / parse_factor();
            else
                return e;
        }
    }

    FuncExpr parse_factor() {
        if (accept('-')) return -parse_factor();
        return parse_power();
    }

    FuncExpr parse_power() {
        FuncExpr base = parse_atom();
        if (!accept('^')) return base;
        const std::size_t at = pos_;
        FuncExpr ex = parse_factor();
        auto v = constant_value(ex);
        if (!v) throw ParseError("exponent must be a constant", at);
        return pow(base, *v);
    }

    FuncExpr parse_atom() {
        const char c = peek();
        if (c == '(') {
            ++pos_;
            FuncExpr e = parse_expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_name();
        fail("expected a number, 't', or a function");
    }

    FuncExpr parse_number() {
        skip_ws();
        const char* begin = s_.data() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("invalid number");
        pos_ += std::size_t(end - begin);
        return constant(v);
    }

    FuncExpr parse_name() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        const std::string_view name = s_.substr(start, pos_ - start);
        if (name == "t") return identity();
        if (name == "pi") return constant(M_PI);
        if (name == "inf") return constant(kInf);
        if (name == "exp" || name == "log" || name == "tan" || name == "sqrt") {
            if (!accept('(')) fail("expected '(' after function name");
            FuncExpr arg = parse_expr();
            if (!accept(')')) fail("expected ')'");
            if (name == "exp") return exp(arg);
            if (name == "log") return log(arg);
            if (name == "tan") return tan(arg);
            return sqrt(arg);
        }
        pos_ = start;
        fail("unknown name '" + std::string(name) + "'");
    }
};

}  // namespace detail

/// Parse the function mini-grammar into an expression tree.
inline FuncExpr parse_function(std::string_view text) { return detail::FuncParser(text).parse(); }

/// Parse interval text such as "(0, 1)", "[0, inf)", "(-pi/2, pi/2)".
/// Endpoints are constant expressions in the same grammar.
inline Interval parse_interval(std::string_view text) {
    std::size_t b = 0, e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    if (e - b < 3) throw ParseError("interval too short", b);
    const char open = text[b], close = text[e - 1];
    if (open != '(' && open != '[') throw ParseError("interval must start with '(' or '['", b);
    if (close != ')' && close != ']') throw ParseError("interval must end with ')' or ']'", e - 1);
    const std::string_view inner = text.substr(b + 1, e - b - 2);
    int depth = 0;
    std::size_t comma = std::string_view::npos;
    for (std::size_t i = 0; i < inner.size(); ++i) {
        if (inner[i] == '(' || inner[i] == '[') ++depth;
        if (inner[i] == ')' || inner[i] == ']') --depth;
        if (inner[i] == ',' && depth == 0) {
            comma = i;
            break;
        }
    }
    if (comma == std::string_view::npos) throw ParseError("interval needs a comma", b);
    auto endpoint = [&](std::string_view part, std::size_t at) -> double {
        FuncExpr ep = detail::FuncParser(part).parse();
        if (depends_on_t(ep)) throw ParseError("interval endpoint must be constant", at);
        // +-inf folds to a Constant node; eval would reject it as non-finite
        double v;
        if (detail::is_const(ep, &v)) return v;
        return ep.eval(0.0);
    };
    const double lo = endpoint(inner.substr(0, comma), b + 1);
    const double hi = endpoint(inner.substr(comma + 1), b + comma + 2);
    return Interval(lo, hi, open == '[', close == ']');
}

}  // namespace opfunc
