#include "helm/parse.hpp"

#include <cctype>
#include <charconv>

namespace helm {

ParseError::ParseError(int line_, int col_, const std::string& message)
    : std::runtime_error("parse error at " + std::to_string(line_) + ":" + std::to_string(col_) +
                         ": " + message),
      line(line_), col(col_) {}

UnboundParameter::UnboundParameter(int line_, int col_, const std::string& name_)
    : ParseError(line_, col_, "unbound parameter '" + name_ + "'"), name(name_) {}

NonSeparableExpression::NonSeparableExpression(int line_, int col_, const std::string& message)
    : ParseError(line_, col_, message) {}

namespace {

enum class Tok { ident, number, plus, minus, star, caret, equals, lparen, rparen, sep, end };

struct Token {
    Tok kind;
    std::string text;
    Rational value;
    int line = 1;
    int col = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
                continue;
            }
            if (c == '\n' || c == ';') {
                push_sep(out);
                advance();
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                out.push_back(lex_number());
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                out.push_back(lex_ident());
                continue;
            }
            Token t{Tok::end, std::string(1, c), 0, line_, col_};
            switch (c) {
            case '+': t.kind = Tok::plus; break;
            case '-': t.kind = Tok::minus; break;
            case '*': t.kind = Tok::star; break;
            case '^': t.kind = Tok::caret; break;
            case '=': t.kind = Tok::equals; break;
            case '(': t.kind = Tok::lparen; break;
            case ')': t.kind = Tok::rparen; break;
            default: throw ParseError(line_, col_, "unexpected character '" + t.text + "'");
            }
            out.push_back(t);
            advance();
        }
        push_sep(out);
        out.push_back({Tok::end, "", 0, line_, col_});
        return out;
    }

private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void push_sep(std::vector<Token>& out) {
        if (!out.empty() && out.back().kind != Tok::sep) out.push_back({Tok::sep, "", 0, line_, col_});
    }

    Token lex_number() {
        const int line = line_, col = col_;
        std::string text;
        auto take_digits = [&] {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                text += src_[pos_];
                advance();
            }
        };
        take_digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            text += '.';
            advance();
            take_digits();
        } else if (pos_ < src_.size() && src_[pos_] == '/' && pos_ + 1 < src_.size() &&
                   std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
            text += '/';
            advance();
            take_digits();
        }
        auto value = parse_rational(text);
        if (!value) throw ParseError(line, col, "bad number '" + text + "'");
        return {Tok::number, text, *value, line, col};
    }

    Token lex_ident() {
        const int line = line_, col = col_;
        std::string text;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
                src_[pos_] == '.')) {
            text += src_[pos_];
            advance();
        }
        return {Tok::ident, text, 0, line, col};
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

// Index of the coordinate an identifier "x<J>" refers to, or -1.
int coord_index(std::string_view name) {
    if (name.size() < 2 || name[0] != 'x' || name[1] == '0') return -1;
    int value = 0;
    auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), value);
    if (ec != std::errc{} || ptr != name.data() + name.size()) return -1;
    return value - 1;
}

int component_index(std::string_view name) {
    if (name.size() < 2 || name[0] != 'f' || name[1] == '0') return -1;
    int value = 0;
    auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), value);
    if (ec != std::errc{} || ptr != name.data() + name.size()) return -1;
    return value - 1;
}

class ExprParser {
public:
    ExprParser(const std::vector<Token>& toks, std::size_t& pos, int n,
               const std::map<std::string, Rational>& params)
        : toks_(toks), pos_(pos), n_(n), params_(params) {}

    ExprSum parse() {
        ExprSum sum(n_);
        bool negate = false;
        if (peek().kind == Tok::minus) {
            negate = true;
            ++pos_;
        }
        sum += parse_term(negate);
        while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
            bool minus = peek().kind == Tok::minus;
            ++pos_;
            sum += parse_term(minus);
        }
        return sum;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }

    [[noreturn]] void expected(const std::string& what) const {
        const Token& t = peek();
        std::string got = t.kind == Tok::sep ? "end of statement"
                          : t.kind == Tok::end ? "end of input"
                                               : "'" + t.text + "'";
        throw ParseError(t.line, t.col, "expected " + what + ", got " + got);
    }

    Rational lookup_param(const Token& t) const {
        auto it = params_.find(t.text);
        if (it == params_.end()) throw UnboundParameter(t.line, t.col, t.text);
        return it->second;
    }

    // factor := RATIONAL | PARAM | xJ['^'INT] | (exp|sin|cos)'(' arg ')'
    // Each factor multiplies either the coefficient or one coordinate slot.
    void parse_factor(Rational& coef, std::vector<UniExpr>& slots) {
        const Token& t = next();
        if (t.kind == Tok::number) {
            coef *= t.value;
            return;
        }
        if (t.kind != Tok::ident) {
            --pos_;
            expected("a factor (number, parameter, coordinate or function)");
        }
        if (int j = coord_index(t.text); j >= 0) {
            check_coord(t, j);
            unsigned deg = 1;
            if (peek().kind == Tok::caret) {
                ++pos_;
                if (peek().kind != Tok::number || denominator(peek().value) != 1 ||
                    peek().value < 0)
                    expected("a non-negative integer exponent");
                deg = static_cast<unsigned>(numerator(next().value));
            }
            multiply_slot(j, UniExpr::atom(j, Atom{deg, 0, Trig::none, 0}), slots);
            return;
        }
        if (t.text == "exp" || t.text == "sin" || t.text == "cos") {
            parse_call(t, coef, slots);
            return;
        }
        coef *= lookup_param(t);
    }

    // '(' [-] [RATIONAL|PARAM '*'] xJ ')'
    void parse_call(const Token& fn, Rational& coef, std::vector<UniExpr>& slots) {
        if (peek().kind != Tok::lparen) expected("'('");
        ++pos_;
        Rational scale = 1;
        if (peek().kind == Tok::minus) {
            scale = -1;
            ++pos_;
        }
        if (peek().kind == Tok::number || (peek().kind == Tok::ident && coord_index(peek().text) < 0)) {
            const Token& s = next();
            scale *= s.kind == Tok::number ? s.value : lookup_param(s);
            if (peek().kind != Tok::star) expected("'*' before the coordinate");
            ++pos_;
        }
        if (peek().kind != Tok::ident || coord_index(peek().text) < 0)
            expected("a coordinate x1..x" + std::to_string(n_));
        const Token& ct = next();
        const int j = coord_index(ct.text);
        check_coord(ct, j);
        if (peek().kind == Tok::star)
            throw NonSeparableExpression(peek().line, peek().col,
                                         "products inside " + fn.text +
                                             "() are not separable; one coordinate per call");
        if (peek().kind != Tok::rparen) expected("')'");
        ++pos_;

        if (fn.text == "exp") {
            multiply_slot(j, UniExpr::atom(j, Atom{0, scale, Trig::none, 0}), slots);
            return;
        }
        auto [atom, sign] = normalize_atom(0, 0, fn.text == "sin" ? Trig::sin : Trig::cos, scale);
        if (sign == 0) { // sin(0*x)
            coef = 0;
            return;
        }
        multiply_slot(j, UniExpr::atom(j, atom, sign), slots);
    }

    void check_coord(const Token& t, int j) const {
        if (j >= n_)
            throw ParseError(t.line, t.col,
                             t.text + " is out of range for dimension " + std::to_string(n_));
    }

    void multiply_slot(int j, const UniExpr& u, std::vector<UniExpr>& slots) {
        if (slots[j].is_zero())
            slots[j] = u;
        else
            slots[j] = slots[j].product(u);
    }

    ExprSum parse_term(bool negate) {
        Rational coef = negate ? -1 : 1;
        std::vector<UniExpr> slots(n_); // zero UniExpr marks an untouched slot
        parse_factor(coef, slots);
        while (peek().kind == Tok::star) {
            ++pos_;
            parse_factor(coef, slots);
        }
        ExprSum out = ExprSum::constant(n_, coef);
        for (int j = 0; j < n_; ++j)
            if (!slots[j].is_zero()) out = out.product_with(slots[j]);
        return out;
    }

    const std::vector<Token>& toks_;
    std::size_t& pos_;
    int n_;
    const std::map<std::string, Rational>& params_;
};

void skip_seps(const std::vector<Token>& toks, std::size_t& pos) {
    while (toks[pos].kind == Tok::sep) ++pos;
}

int infer_dimension(const std::vector<Token>& toks) {
    int n = 0;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (toks[i].kind != Tok::ident) continue;
        if (toks[i].text == "dim" && i + 2 < toks.size() && toks[i + 1].kind == Tok::equals &&
            toks[i + 2].kind == Tok::number)
            return static_cast<int>(numerator(toks[i + 2].value));
        if (int j = coord_index(toks[i].text); j >= 0) n = std::max(n, j + 1);
        if (int k = component_index(toks[i].text); k >= 0) n = std::max(n, k + 1);
    }
    return n;
}

} // namespace

VectorField FieldDocument::field() const {
    VectorField f(n);
    f.components = components;
    return f;
}

DecomposeOptions FieldDocument::options() const {
    DecomposeOptions opts;
    if (method) opts.method = *method;
    if (lambda_max) opts.lambda_max = *lambda_max;
    return opts;
}

FieldDocument parse_field_document(std::string_view text) {
    const std::vector<Token> toks = Lexer(text).run();
    FieldDocument doc;
    doc.n = infer_dimension(toks);
    if (doc.n <= 0) throw ParseError(1, 1, "cannot determine the dimension (use 'dim = N')");
    doc.components.assign(doc.n, ExprSum(doc.n));

    std::size_t pos = 0;
    skip_seps(toks, pos);
    while (toks[pos].kind != Tok::end) {
        const Token& head = toks[pos];
        if (head.kind != Tok::ident)
            throw ParseError(head.line, head.col, "expected a statement");

        if (head.text == "param") {
            ++pos;
            if (toks[pos].kind != Tok::ident)
                throw ParseError(toks[pos].line, toks[pos].col, "expected a parameter name");
            std::string name = toks[pos].text;
            if (coord_index(name) >= 0)
                throw ParseError(toks[pos].line, toks[pos].col,
                                 "parameter name collides with coordinate " + name);
            ++pos;
            if (toks[pos].kind != Tok::equals)
                throw ParseError(toks[pos].line, toks[pos].col, "expected '='");
            ++pos;
            Rational sign = 1;
            if (toks[pos].kind == Tok::minus) {
                sign = -1;
                ++pos;
            }
            if (toks[pos].kind != Tok::number)
                throw ParseError(toks[pos].line, toks[pos].col, "expected a rational value");
            doc.params[name] = sign * toks[pos].value;
            ++pos;
        } else {
            std::string key = head.text;
            ++pos;
            if (toks[pos].kind != Tok::equals)
                throw ParseError(toks[pos].line, toks[pos].col, "expected '=' after " + key);
            ++pos;

            if (key == "dim") {
                ++pos; // value already consumed by infer_dimension
            } else if (key == "method") {
                if (toks[pos].kind == Tok::ident && toks[pos].text == "auto")
                    doc.method = Method::auto_select;
                else if (toks[pos].kind == Tok::number && toks[pos + 1].kind == Tok::ident &&
                         toks[pos].text == "2" && toks[pos + 1].text == "a")
                    doc.method = Method::force_2a, ++pos;
                else if (toks[pos].kind == Tok::number && toks[pos + 1].kind == Tok::ident &&
                         toks[pos].text == "2" && toks[pos + 1].text == "b")
                    doc.method = Method::force_2b, ++pos;
                else
                    throw ParseError(toks[pos].line, toks[pos].col,
                                     "method must be auto, 2a or 2b");
                ++pos;
            } else if (key == "lambda_max") {
                if (toks[pos].kind != Tok::number || denominator(toks[pos].value) != 1 ||
                    toks[pos].value < 1)
                    throw ParseError(toks[pos].line, toks[pos].col,
                                     "lambda_max must be a positive integer");
                doc.lambda_max = static_cast<int>(numerator(toks[pos].value));
                ++pos;
            } else if (key == "expect.error") {
                if (toks[pos].kind != Tok::ident)
                    throw ParseError(toks[pos].line, toks[pos].col, "expected a failure reason");
                doc.expect_error = toks[pos].text;
                ++pos;
            } else if (key.starts_with("expect.")) {
                ExprSum e = ExprParser(toks, pos, doc.n, doc.params).parse();
                doc.expects.emplace(key.substr(7), std::move(e));
            } else if (int k = component_index(key); k >= 0) {
                if (k >= doc.n)
                    throw ParseError(head.line, head.col,
                                     key + " is out of range for dimension " +
                                         std::to_string(doc.n));
                doc.components[k] = ExprParser(toks, pos, doc.n, doc.params).parse();
            } else {
                throw ParseError(head.line, head.col, "unknown statement '" + key + "'");
            }
        }
        if (toks[pos].kind != Tok::sep && toks[pos].kind != Tok::end)
            throw ParseError(toks[pos].line, toks[pos].col,
                             "unexpected '" + toks[pos].text + "' after statement");
        skip_seps(toks, pos);
    }
    return doc;
}

ExprSum parse_expression(std::string_view text, int n,
                         const std::map<std::string, Rational>& params) {
    const std::vector<Token> toks = Lexer(text).run();
    std::size_t pos = 0;
    skip_seps(toks, pos);
    ExprSum e = ExprParser(toks, pos, n, params).parse();
    skip_seps(toks, pos);
    if (toks[pos].kind != Tok::end)
        throw ParseError(toks[pos].line, toks[pos].col,
                         "unexpected '" + toks[pos].text + "' after expression");
    return e;
}

} // namespace helm
