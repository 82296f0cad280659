#pragma once

#include "helm/field.hpp"

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace helm {

class SingularPoint : public std::domain_error {
public:
    explicit SingularPoint(const std::string& what) : std::domain_error(what) {}
};

class SingularEvalPoint : public std::domain_error {
public:
    explicit SingularEvalPoint(const std::string& what) : std::domain_error(what) {}
};

// Volume of the unit n-ball, pi^{n/2} / Gamma(n/2 + 1).
double unit_ball_volume(int n);

// Regularized fundamental-solution difference:
//   n == 2:  (log|x - xi| - log|xi|) / (2 pi)
//   n >= 3:  (|x - xi|^{2-n} - |xi|^{2-n}) / (n (2-n) V_n)
// Throws SingularPoint when |x - xi| or |xi| is below 1e-12.
double kernel_K(std::span<const double> x, std::span<const double> xi, int n);

// Pointwise field evaluators, either closures over symbolic components or
// user-supplied callables. The caller asserts sufficient decay at infinity.
struct FieldSampler {
    int n = 0;
    std::vector<std::function<double(std::span<const double>)>> components;

    static FieldSampler from_field(const VectorField& f);
    double eval(int i, std::span<const double> x) const { return components[i](x); }
};

struct QuadratureSpec {
    double truncation_radius = 6.0;
    double grid_step = 0.05;
    int n = 2;          // 2 or 3
    double stencil_h = 0; // 0 picks grid_step / 2
    bool parallel = true;
};

struct SampledDecomposition {
    // One entry per eval point, n values each.
    std::vector<std::vector<double>> g;
    std::vector<std::vector<double>> r;
};

// Convolution decomposition for decaying fields: the potential matrix is the
// midpoint-rule quadrature of (df_i/dxi_j)(xi) K(x, xi) over the truncated
// box, with the Jacobian taken by central differences (h = grid_step/4) and
// cells whose center lies within grid_step of x or of the origin excluded.
// g and r are then extracted by central differences across the eval-point
// stencil. Cell contributions are tree-summed in a fixed order, so results
// are identical for any thread count.
SampledDecomposition theorem2_decompose(const FieldSampler& f,
                                        const std::vector<std::vector<double>>& eval_points,
                                        const QuadratureSpec& spec);

// Straight-loop single-threaded reference for the same quadrature; kept to
// validate the tree-summed kernel (agreement up to summation-order rounding).
SampledDecomposition theorem2_decompose_reference(
    const FieldSampler& f, const std::vector<std::vector<double>>& eval_points,
    const QuadratureSpec& spec);

// Central-difference oracles, error O(h^2). Default h = 1e-4.
double fd_divergence(const FieldSampler& v, std::span<const double> x, double h = 1e-4);
std::vector<std::tuple<int, int, double>> fd_curl_pairs(const FieldSampler& v,
                                                        std::span<const double> x,
                                                        double h = 1e-4);
std::vector<double> fd_gradient(const std::function<double(std::span<const double>)>& s,
                                std::span<const double> x, double h = 1e-4);

} // namespace helm
