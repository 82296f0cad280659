#pragma once

#include "helm/expr.hpp"

#include <vector>

namespace helm {

// n symbolic components, each a finite sum of separable terms.
struct VectorField {
    int n = 0;
    std::vector<ExprSum> components;

    VectorField() = default;
    explicit VectorField(int dims) : n(dims), components(dims, ExprSum(dims)) {}

    bool is_zero() const {
        for (const auto& c : components)
            if (!c.is_zero()) return false;
        return true;
    }
    bool operator==(const VectorField& o) const = default;
};

// n x n matrix of expression sums. No symmetry is required; the gradient
// potential is the trace and the rotation potential is twice the
// antisymmetric part.
struct PotentialMatrix {
    int n = 0;
    std::vector<ExprSum> entries; // row-major

    PotentialMatrix() = default;
    explicit PotentialMatrix(int dims) : n(dims), entries(dims * dims, ExprSum(dims)) {}

    ExprSum& at(int i, int j) { return entries[i * n + j]; }
    const ExprSum& at(int i, int j) const { return entries[i * n + j]; }

    PotentialMatrix& operator+=(const PotentialMatrix& o) {
        for (std::size_t i = 0; i < entries.size(); ++i) entries[i] += o.entries[i];
        return *this;
    }
    bool operator==(const PotentialMatrix& o) const = default;
};

inline ExprSum trace(const PotentialMatrix& f) {
    ExprSum g(f.n);
    for (int k = 0; k < f.n; ++k) g += f.at(k, k);
    return g;
}

// R_ij = F_ij - F_ji (twice the antisymmetric part).
inline PotentialMatrix antisymmetric_part(const PotentialMatrix& f) {
    PotentialMatrix r(f.n);
    for (int i = 0; i < f.n; ++i)
        for (int j = 0; j < f.n; ++j) r.at(i, j) = f.at(i, j) - f.at(j, i);
    return r;
}

inline VectorField gradient(const ExprSum& g) {
    VectorField out(g.dims());
    for (int i = 0; i < g.dims(); ++i) out.components[i] = g.partial_derivative(i);
    return out;
}

// r_i = sum_k d/dx_k R_ik.
inline VectorField row_divergence(const PotentialMatrix& r) {
    VectorField out(r.n);
    for (int i = 0; i < r.n; ++i)
        for (int k = 0; k < r.n; ++k) out.components[i] += r.at(i, k).partial_derivative(k);
    return out;
}

inline ExprSum divergence(const VectorField& v) {
    ExprSum out(v.n);
    for (int i = 0; i < v.n; ++i) out += v.components[i].partial_derivative(i);
    return out;
}

// d/dx_i v_j - d/dx_j v_i for one coordinate pair.
inline ExprSum curl_pair(const VectorField& v, int i, int j) {
    return v.components[j].partial_derivative(i) - v.components[i].partial_derivative(j);
}

} // namespace helm
