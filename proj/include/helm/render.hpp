#pragma once

#include "helm/decompose.hpp"

#include <optional>
#include <string>

namespace helm {

// Expression rendering in the same grammar the parser accepts, so structured
// output round-trips exactly.
std::string render(const ExprSum& e);
std::string render(const SeparableTerm& t, int n);
std::string render_latex(const ExprSum& e);

enum class EmitFormat { text, latex, json, csv_grid };

struct GridSpec {
    double lo = 0;
    double hi = 0;
    double step = 1;
};

// Deterministic byte output. csv_grid samples f, g, r and G on the lattice
// with header "x1,...,xn,f1,...,g1,...,r1,...,G".
std::string emit(const Decomposition& d, EmitFormat format,
                 const std::optional<GridSpec>& grid = std::nullopt);

// Inverse of emit(..., json): rebuilds the decomposition from the structured
// form, parsing every expression back to canonical shape.
Decomposition decomposition_from_json(const std::string& text);

} // namespace helm
