#pragma once

#include "helm/decompose.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace helm {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, int col, const std::string& message);
    int line;
    int col;
};

class UnboundParameter : public ParseError {
public:
    UnboundParameter(int line, int col, const std::string& name);
    std::string name;
};

// A product mixes coordinates inside one atom call, e.g. exp(x1*x2).
class NonSeparableExpression : public ParseError {
public:
    NonSeparableExpression(int line, int col, const std::string& message);
};

// A parsed field file: dimension, parameter bindings, component expressions
// and the optional fixture directives (forced method, lambda bound, expected
// decomposition parts).
struct FieldDocument {
    int n = 0;
    std::map<std::string, Rational> params;
    std::vector<ExprSum> components;

    std::optional<Method> method;
    std::optional<int> lambda_max;
    std::map<std::string, ExprSum> expects; // keys: G, F11, R12, g1, r1, ...
    std::optional<std::string> expect_error;

    VectorField field() const;
    DecomposeOptions options() const;
};

// Grammar, one statement per line (';' also separates, '#' starts a comment):
//   dim = N
//   param NAME = RATIONAL
//   fK = [-] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := RATIONAL | PARAM | xJ | xJ^INT
//           | (exp|sin|cos) '(' [-] [RATIONAL|PARAM '*'] xJ ')'
// Fixture extras: method = auto|2a|2b, lambda_max = N,
// expect.<part> = expression, expect.error = <reason>.
FieldDocument parse_field_document(std::string_view text);

// Parses a single expression (used for --gauge and structured input).
ExprSum parse_expression(std::string_view text, int n,
                         const std::map<std::string, Rational>& params = {});

} // namespace helm
