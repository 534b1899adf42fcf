#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "etaricci/scalar_expr.hpp"

// Recursive-descent parser for the expression grammar
//
//   expr   := ('+'|'-')? term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' ('-'? int))?
//   base   := int | ident | 'exp' '(' linform ')' | '(' expr ')'
//
// Rational literals appear as `int` or as the division `int/int`; `linform`
// is any expr that reduces to a rational linear form in the coordinates.
// Printing (ScalarExpr::str) emits this grammar, and parse(print(e)) == e.

namespace etaricci {

namespace detail {

class ExprParser {
public:
    ExprParser(std::string_view text, ContextPtr ctx)
        : text_(text), ctx_(std::move(ctx)) {}

    ScalarExpr parse() {
        ScalarExpr e = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    ScalarExpr expr() {
        skip_ws();
        bool neg = false;
        if (peek() == '+' || peek() == '-') neg = get() == '-';
        ScalarExpr acc = term();
        if (neg) acc = -acc;
        while (true) {
            skip_ws();
            char c = peek();
            if (c != '+' && c != '-') break;
            get();
            ScalarExpr t = term();
            acc = c == '+' ? acc + t : acc - t;
        }
        return acc;
    }

    ScalarExpr term() {
        ScalarExpr acc = factor();
        while (true) {
            skip_ws();
            char c = peek();
            if (c != '*' && c != '/') break;
            std::size_t at = pos_;
            get();
            ScalarExpr f = factor();
            if (c == '*') {
                acc = acc * f;
            } else {
                if (f.is_zero()) fail_at(at, "division by zero expression");
                acc = acc / f;
            }
        }
        return acc;
    }

    ScalarExpr factor() {
        ScalarExpr b = base();
        skip_ws();
        if (peek() == '^') {
            std::size_t at = pos_;
            get();
            skip_ws();
            bool neg = false;
            if (peek() == '-') {
                neg = true;
                get();
            }
            if (!std::isdigit(static_cast<unsigned char>(peek())))
                fail("integer exponent expected after '^'");
            long e = read_int();
            if (neg && b.is_zero()) fail_at(at, "zero raised to a negative power");
            b = b.pow(neg ? -e : e);
        }
        return b;
    }

    ScalarExpr base() {
        skip_ws();
        char c = peek();
        if (c == '(') {
            get();
            ScalarExpr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            long v = read_int();
            return ScalarExpr::constant(ctx_, Rat(static_cast<long>(v)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t at = pos_;
            std::string id = read_ident();
            if (id == "exp") {
                expect('(');
                std::size_t arg_at = pos_;
                ScalarExpr arg = expr();
                expect(')');
                return ScalarExpr::exponential(ctx_, linear_form_of(arg, arg_at));
            }
            int idx = ctx_->index_of(id);
            if (idx < 0) fail_at(at, "unknown identifier: " + id);
            return ScalarExpr::coordinate(ctx_, static_cast<std::size_t>(idx));
        }
        if (c == '\0') fail("unexpected end of input");
        fail(std::string("unexpected character '") + c + "'");
        return ScalarExpr(); // unreachable
    }

    /// Validates that a parsed subexpression is a rational linear form in
    /// the coordinates (homogeneous degree one, no exponentials) and
    /// extracts its coefficients.
    Form linear_form_of(const ScalarExpr& e, std::size_t at) {
        const Poly& den = e.den();
        auto dc = den.constant_value();
        if (!dc) fail_at(at, "argument of exp is not a rational linear form");
        Form f(ctx_->dim(), Rat(0));
        for (const auto& t : e.num().terms()) {
            if (!t.first.expo.empty())
                fail_at(at, "nested exponential inside exp");
            int total = 0;
            std::size_t which = 0;
            for (std::size_t i = 0; i < t.first.deg.size(); ++i) {
                total += t.first.deg[i];
                if (t.first.deg[i] > 0) which = i;
            }
            if (total != 1)
                fail_at(at, "argument of exp must be linear in the coordinates");
            f[which] += t.second / *dc;
        }
        if (form_is_zero(f)) fail_at(at, "argument of exp must be a nonzero linear form");
        return f;
    }

    long read_int() {
        std::size_t at = pos_;
        unsigned long v = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + static_cast<unsigned long>(get() - '0');
            if (v > 1000000000UL) fail_at(at, "integer literal too large");
        }
        return static_cast<long>(v);
    }

    std::string read_ident() {
        std::string s;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
            s += get();
        return s;
    }

    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    char get() { return text_[pos_++]; }
    void expect(char c) {
        skip_ws();
        if (peek() != c) fail(std::string("expected '") + c + "'");
        get();
    }
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(pos_, msg); }
    [[noreturn]] void fail_at(std::size_t at, const std::string& msg) {
        throw ParseError(at, msg);
    }

    std::string_view text_;
    ContextPtr ctx_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parse an expression over the given context; throws ParseError with the
/// byte offset of the problem.
inline ScalarExpr parse_expr(std::string_view text, const ContextPtr& ctx) {
    return detail::ExprParser(text, ctx).parse();
}

/// Parse a rational linear form such as "2*t - u" (used for exponential
/// generator declarations).
inline detail::Form parse_linear_form(std::string_view text, const ContextPtr& ctx) {
    ScalarExpr e = parse_expr(text, ctx);
    // reuse the exp-argument validation
    detail::Form f(ctx->dim(), Rat(0));
    auto dc = e.den().constant_value();
    if (!dc) throw ParseError(0, "not a rational linear form");
    for (const auto& t : e.num().terms()) {
        if (!t.first.expo.empty()) throw ParseError(0, "not a rational linear form");
        int total = 0;
        std::size_t which = 0;
        for (std::size_t i = 0; i < t.first.deg.size(); ++i) {
            total += t.first.deg[i];
            if (t.first.deg[i] > 0) which = i;
        }
        if (total != 1) throw ParseError(0, "not a rational linear form");
        f[which] += t.second / *dc;
    }
    return f;
}

} // namespace etaricci
