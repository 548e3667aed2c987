#include "cap/expression.hpp"

#include "cap/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace cap {

namespace {

AffineExpression zero(std::size_t k) { return {0.0, std::vector<double>(k, 0.0)}; }

AffineExpression add(AffineExpression a, const AffineExpression& b, double sign) {
    a.constant += sign * b.constant;
    for (std::size_t j = 0; j < a.coefficients.size(); ++j) a.coefficients[j] += sign * b.coefficients[j];
    return a;
}

AffineExpression scale(AffineExpression a, double s) {
    a.constant *= s;
    for (auto& c : a.coefficients) c *= s;
    return a;
}

class Parser {
public:
    Parser(std::string_view text, const std::vector<std::string>& parameters, const ConstantTable& constants)
        : text_(text), parameters_(parameters), constants_(constants) {}

    AffineExpression parse() {
        AffineExpression e = expression();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    AffineExpression expression() {
        AffineExpression e = term();
        for (;;) {
            if (accept('+')) e = add(std::move(e), term(), 1.0);
            else if (accept('-')) e = add(std::move(e), term(), -1.0);
            else return e;
        }
    }

    AffineExpression term() {
        AffineExpression e = factor();
        for (;;) {
            if (accept('*')) {
                AffineExpression r = factor();
                if (r.is_zero() || constant_only(r)) e = scale(std::move(e), r.constant);
                else if (constant_only(e)) e = scale(std::move(r), e.constant);
                else fail("product of two parameter terms is not affine");
            } else if (accept('/')) {
                AffineExpression r = factor();
                if (!constant_only(r)) fail("division by a parameter term is not affine");
                if (r.constant == 0.0) fail("division by zero");
                e = scale(std::move(e), 1.0 / r.constant);
            } else {
                return e;
            }
        }
    }

    AffineExpression factor() {
        if (accept('-')) return scale(factor(), -1.0);
        if (accept('+')) return factor();
        if (accept('(')) {
            AffineExpression e = expression();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    AffineExpression number() {
        double v = 0.0;
        const char* begin = text_.data() + pos_;
        const auto [end, ec] = std::from_chars(begin, text_.data() + text_.size(), v);
        if (ec != std::errc()) fail("malformed number");
        pos_ += static_cast<std::size_t>(end - begin);
        AffineExpression e = zero(parameters_.size());
        e.constant = v;
        return e;
    }

    AffineExpression name() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string id(text_.substr(start, pos_ - start));
        AffineExpression e = zero(parameters_.size());
        for (std::size_t j = 0; j < parameters_.size(); ++j) {
            if (parameters_[j] == id) {
                e.coefficients[j] = 1.0;
                return e;
            }
        }
        if (auto it = constants_.find(id); it != constants_.end()) {
            e.constant = it->second;
            return e;
        }
        fail("unknown name '" + id + "'");
    }

    static bool constant_only(const AffineExpression& e) {
        for (double c : e.coefficients) {
            if (c != 0.0) return false;
        }
        return true;
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw InvalidArgument("expression '" + std::string(text_) + "' at offset " + std::to_string(pos_) + ": " + what);
    }

    std::string_view text_;
    const std::vector<std::string>& parameters_;
    const ConstantTable& constants_;
    std::size_t pos_ = 0;
};

} // namespace

AffineExpression parse_affine(std::string_view text, const std::vector<std::string>& parameters,
                              const ConstantTable& constants) {
    AffineExpression e = Parser(text, parameters, constants).parse();
    if (!std::isfinite(e.constant)) throw InvalidArgument("expression '" + std::string(text) + "' is not finite");
    return e;
}

double parse_number(std::string_view text, const ConstantTable& constants) {
    static const std::vector<std::string> none;
    return parse_affine(text, none, constants).constant;
}

} // namespace cap
