#include "valkey/text.hpp"

#include <cctype>
#include <string>

#include "valkey/error.hpp"

namespace valkey {

namespace {

class PolyParser {
public:
    PolyParser(const GroundField& field, std::string_view text) : field_(field), text_(text) {}

    Poly parse() {
        skip_space();
        if (at_end()) fail("empty polynomial");
        Poly p = expression();
        skip_space();
        if (!at_end()) fail(std::string("unexpected '") + peek() + "'");
        return p;
    }

private:
    Poly expression() {
        Poly acc = term();
        for (;;) {
            skip_space();
            if (accept('+')) acc = acc + term();
            else if (accept('-')) acc = acc - term();
            else return acc;
        }
    }

    Poly term() {
        Poly acc = unary();
        for (;;) {
            skip_space();
            if (accept('*')) {
                acc = acc * unary();
            } else if (accept('/')) {
                std::size_t where = pos_;
                Poly d = unary();
                if (d.degree() != 0) {
                    pos_ = where;
                    fail(d.is_zero() ? "division by zero" : "division by a non-constant polynomial");
                }
                acc = acc * (field_.one() / d.leading());
            } else {
                skip_space();
                if (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '('))
                    fail("implicit multiplication is not allowed");
                return acc;
            }
        }
    }

    Poly unary() {
        skip_space();
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    Poly power() {
        Poly base = primary();
        skip_space();
        if (!accept('^')) return base;
        skip_space();
        if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a nonnegative exponent");
        std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) advance();
        std::string digits(text_.substr(start, pos_ - start));
        if (digits.size() > 4) {
            pos_ = start;
            fail("exponent too large");
        }
        return base.pow(static_cast<unsigned>(std::stoul(digits)));
    }

    Poly primary() {
        skip_space();
        if (at_end()) fail("unexpected end of input");
        char c = peek();
        if (accept('(')) {
            Poly inner = expression();
            skip_space();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) advance();
            Integer n(std::string(text_.substr(start, pos_ - start)), 10);
            return Poly::constant(field_, field_.from_integer(n));
        }
        if (c == 'x') {
            advance();
            reject_identifier_tail();
            return Poly::x(field_);
        }
        if (c == 't') {
            if (field_.kind() != GroundField::Kind::TAdic) fail("'t' is not available over " + field_.to_string());
            advance();
            reject_identifier_tail();
            return Poly::constant(field_, field_.t());
        }
        fail(std::string("unexpected '") + c + "'");
    }

    void reject_identifier_tail() {
        if (!at_end() && std::isalnum(static_cast<unsigned char>(peek()))) fail("implicit multiplication is not allowed");
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    void advance() { ++pos_; }

    bool accept(char c) {
        if (!at_end() && peek() == c) {
            advance();
            return true;
        }
        return false;
    }

    void skip_space() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
    }

    [[noreturn]] void fail(const std::string& message) const {
        int line = 1;
        int column = 1;
        for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(message, line, column);
    }

    const GroundField& field_;
    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Poly parse_poly(const GroundField& field, std::string_view text) { return PolyParser(field, text).parse(); }

GroundElement parse_ground(const GroundField& field, std::string_view text) {
    Poly p = parse_poly(field, text);
    if (p.degree() > 0) throw Error(ErrorKind::InvalidInput, "expected a ground element, got " + p.to_string());
    return p.coeff(0);
}

}  // namespace valkey
