#include "fiberlab/parser.hpp"

#include <cctype>

namespace fiberlab {

namespace {

class Parser {
public:
    explicit Parser(const ExprSource& src) : src_(src) {
        if (src_.text.size() > 64 * 1024)
            throw ParseError("input exceeds 64 KiB", 0);
        for (const auto& v : src_.vars) {
            if (v.empty()) throw ParseError("empty variable name", 0);
            if (v == "i" && src_.field == Field::Complex)
                throw ParseError("\"i\" is reserved in complex mode", 0);
        }
    }

    ExactPoly run() {
        skip_ws();
        ExactPoly p = parse_sum();
        skip_ws();
        if (pos_ != src_.text.size())
            throw ParseError("unexpected trailing input", pos_);
        return p;
    }

private:
    const ExprSource& src_;
    std::size_t pos_ = 0;

    char peek() const { return pos_ < src_.text.size() ? src_.text[pos_] : '\0'; }
    void skip_ws() {
        while (pos_ < src_.text.size() && std::isspace(static_cast<unsigned char>(src_.text[pos_])))
            ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExactPoly parse_sum() {
        ExactPoly acc = parse_product();
        for (;;) {
            skip_ws();
            if (eat('+'))
                acc = acc + parse_product();
            else if (eat('-'))
                acc = acc - parse_product();
            else
                return acc;
        }
    }

    ExactPoly parse_product() {
        ExactPoly acc = parse_unary();
        for (;;) {
            skip_ws();
            if (eat('*'))
                acc = acc * parse_unary();
            else
                return acc;
        }
    }

    ExactPoly parse_unary() {
        skip_ws();
        if (eat('-')) return -parse_unary();
        return parse_power();
    }

    ExactPoly parse_power() {
        ExactPoly base = parse_atom();
        skip_ws();
        if (eat('^')) {
            uint64_t e = parse_exponent();
            return base.pow(static_cast<uint32_t>(e));
        }
        return base;
    }

    // Right-associative chain of nonnegative integer exponents.
    uint64_t parse_exponent() {
        skip_ws();
        std::size_t start = pos_;
        if (peek() == '-') throw ParseError("negative exponent", pos_);
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            throw ParseError("expected nonnegative integer exponent", pos_);
        uint64_t n = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            n = n * 10 + static_cast<uint64_t>(peek() - '0');
            if (n > 64) throw ParseError("exponent exceeds 64", start);
            ++pos_;
        }
        if (peek() == '.' || peek() == '/')
            throw ParseError("exponent must be an integer", pos_);
        skip_ws();
        if (eat('^')) {
            uint64_t rhs = parse_exponent();
            uint64_t r = 1;
            for (uint64_t k = 0; k < rhs; ++k) {
                r *= n;
                if (r > 64) throw ParseError("exponent exceeds 64", start);
            }
            n = r;
        }
        return n;
    }

    ExactPoly parse_atom() {
        skip_ws();
        std::size_t start = pos_;
        char c = peek();
        ExactPoly result;
        if (c == '(') {
            ++pos_;
            result = parse_sum();
            skip_ws();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            result = parse_number();
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            result = parse_identifier();
        } else if (c == '\0') {
            throw ParseError("unexpected end of input", pos_);
        } else {
            throw ParseError(std::string("unexpected character '") + c + "'", pos_);
        }
        // Implicit multiplication like "2x" or ")(": reject explicitly.
        char n = peek();
        if (n == '(' || std::isalnum(static_cast<unsigned char>(n)) || n == '_' || n == '.')
            throw ParseError("implicit multiplication is not allowed", pos_);
        (void)start;
        return result;
    }

    ExactPoly parse_number() {
        std::size_t start = pos_;
        std::string digits;
        while (std::isdigit(static_cast<unsigned char>(peek()))) digits += src_.text[pos_++];
        Rational value;
        if (peek() == '/') {
            ++pos_;
            if (!std::isdigit(static_cast<unsigned char>(peek())))
                throw ParseError("expected denominator digits", pos_);
            std::string den;
            while (std::isdigit(static_cast<unsigned char>(peek()))) den += src_.text[pos_++];
            if (mpz_class(den, 10) == 0) throw ParseError("zero denominator", start);
            value = Rational(mpz_class(digits, 10), mpz_class(den, 10));
            value.canonicalize();
        } else if (peek() == '.') {
            ++pos_;
            std::string frac;
            while (std::isdigit(static_cast<unsigned char>(peek()))) frac += src_.text[pos_++];
            if (frac.empty()) throw ParseError("expected digits after decimal point", pos_);
            mpz_class scale = 1;
            for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
            value = Rational(mpz_class(digits + frac, 10), scale);
            value.canonicalize();
        } else {
            value = Rational(mpz_class(digits, 10));
        }
        return ExactPoly::constant(src_.vars, GaussQ(std::move(value)));
    }

    ExactPoly parse_identifier() {
        std::size_t start = pos_;
        std::string name;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
            name += src_.text[pos_++];
        if (name == "i" && src_.field == Field::Complex)
            return ExactPoly::constant(src_.vars, GaussQ(Rational(0), Rational(1)));
        for (const auto& v : src_.vars)
            if (v == name) return ExactPoly::variable(src_.vars, name);
        if (name == "i")
            throw ParseError("\"i\" is not available in real mode", start);
        throw ParseError("unknown identifier \"" + name + "\"", start);
    }
};

}  // namespace

ExactPoly parse_expression(const ExprSource& src) { return Parser(src).run(); }

}  // namespace fiberlab
