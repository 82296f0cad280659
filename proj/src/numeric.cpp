#include "helm/numeric.hpp"

#include <cmath>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace helm {

double unit_ball_volume(int n) {
    return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

namespace {

double dist(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

double norm(std::span<const double> a) {
    double s = 0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

constexpr int kMaxEntries = 9; // n <= 3 quadrature

// Fixed-structure pairwise reduction: the split points depend only on the
// index range, so serial and parallel runs produce bit-identical sums.
template <class Leaf>
void pairwise_sum(std::size_t lo, std::size_t hi, int nn, const Leaf& leaf, double* out) {
    if (hi - lo <= 64) {
        for (std::size_t c = lo; c < hi; ++c) leaf(c, out);
        return;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    double a[kMaxEntries] = {0}, b[kMaxEntries] = {0};
    pairwise_sum(lo, mid, nn, leaf, a);
    pairwise_sum(mid, hi, nn, leaf, b);
    for (int i = 0; i < nn; ++i) out[i] += a[i] + b[i];
}

template <class Leaf>
void pairwise_sum_tasks(std::size_t lo, std::size_t hi, int nn, const Leaf& leaf, double* out,
                        int depth) {
    if (depth <= 0 || hi - lo <= 8192) {
        pairwise_sum(lo, hi, nn, leaf, out);
        return;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    double a[kMaxEntries] = {0}, b[kMaxEntries] = {0};
#pragma omp task shared(a)
    pairwise_sum_tasks(lo, mid, nn, leaf, a, depth - 1);
#pragma omp task shared(b)
    pairwise_sum_tasks(mid, hi, nn, leaf, b, depth - 1);
#pragma omp taskwait
    for (int i = 0; i < nn; ++i) out[i] += a[i] + b[i];
}

template <class Leaf>
void reduce_cells(std::size_t count, int nn, const Leaf& leaf, double* out, bool parallel) {
    if (!parallel) {
        pairwise_sum(std::size_t{0}, count, nn, leaf, out);
        return;
    }
#pragma omp parallel
#pragma omp single
    pairwise_sum_tasks(std::size_t{0}, count, nn, leaf, out, 8);
}

struct Grid {
    int n;
    int per_axis;
    double origin; // center of cell index 0 along each axis
    double step;

    std::size_t cells() const {
        std::size_t c = 1;
        for (int i = 0; i < n; ++i) c *= static_cast<std::size_t>(per_axis);
        return c;
    }
    void center(std::size_t id, double* out) const {
        for (int a = n - 1; a >= 0; --a) {
            out[a] = origin + static_cast<double>(id % per_axis) * step;
            id /= per_axis;
        }
    }
};

} // namespace

double kernel_K(std::span<const double> x, std::span<const double> xi, int n) {
    const double dxxi = dist(x, xi);
    const double dxi = norm(xi);
    if (dxxi < 1e-12 || dxi < 1e-12)
        throw SingularPoint("kernel evaluated at a singular point");
    if (n == 2) return (std::log(dxxi) - std::log(dxi)) / (2.0 * M_PI);
    const double p = 2.0 - n;
    return (std::pow(dxxi, p) - std::pow(dxi, p)) / (n * p * unit_ball_volume(n));
}

FieldSampler FieldSampler::from_field(const VectorField& f) {
    FieldSampler s;
    s.n = f.n;
    for (const auto& comp : f.components)
        s.components.emplace_back([e = comp](std::span<const double> x) { return e.eval(x); });
    return s;
}

SampledDecomposition theorem2_decompose(const FieldSampler& f,
                                        const std::vector<std::vector<double>>& eval_points,
                                        const QuadratureSpec& spec) {
    const int n = spec.n;
    if (n != 2 && n != 3) throw std::invalid_argument("theorem2: dimension must be 2 or 3");
    if (f.n != n) throw std::invalid_argument("theorem2: sampler dimension mismatch");
    if (spec.truncation_radius <= 0 || spec.grid_step <= 0 ||
        spec.truncation_radius / spec.grid_step > 1e4)
        throw std::invalid_argument("theorem2: need 0 < radius/step <= 1e4 per axis");

    const double step = spec.grid_step;
    const double radius = spec.truncation_radius;
    Grid grid{n, static_cast<int>(std::llround(2.0 * radius / step)), -radius + 0.5 * step, step};
    const std::size_t cells = grid.cells();
    const int nn = n * n;
    double cell_volume = 1.0;
    for (int i = 0; i < n; ++i) cell_volume *= step;

    for (const auto& x : eval_points) {
        if (static_cast<int>(x.size()) != n)
            throw std::invalid_argument("theorem2: eval point dimension mismatch");
        if (norm(x) < step)
            throw SingularEvalPoint("eval point within grid_step of the origin");
        if (norm(x) > radius / 2)
            throw std::invalid_argument("theorem2: eval points must lie within radius/2");
    }

    // Jacobian of f at every cell center, central differences with step/4.
    const double hj = step / 4.0;
    std::vector<double> jac(cells * nn);
#pragma omp parallel for schedule(static) if (spec.parallel)
    for (std::size_t c = 0; c < cells; ++c) {
        double xi[3];
        grid.center(c, xi);
        double plus[3], minus[3];
        for (int j = 0; j < n; ++j) {
            std::memcpy(plus, xi, sizeof plus);
            std::memcpy(minus, xi, sizeof minus);
            plus[j] += hj;
            minus[j] -= hj;
            for (int i = 0; i < n; ++i)
                jac[c * nn + i * n + j] = (f.eval(i, std::span<const double>(plus, n)) -
                                           f.eval(i, std::span<const double>(minus, n))) /
                                          (2.0 * hj);
        }
    }

    const double h = spec.stencil_h > 0 ? spec.stencil_h : step / 2.0;
    SampledDecomposition out;
    out.g.resize(eval_points.size(), std::vector<double>(n, 0.0));
    out.r.resize(eval_points.size(), std::vector<double>(n, 0.0));

    for (std::size_t p = 0; p < eval_points.size(); ++p) {
        const auto& x = eval_points[p];

        // One exclusion set per eval point, shared by the whole stencil, so
        // the sampled F is smooth across the central-difference pairs.
        std::vector<char> keep(cells);
#pragma omp parallel for schedule(static) if (spec.parallel)
        for (std::size_t c = 0; c < cells; ++c) {
            double xi[3];
            grid.center(c, xi);
            std::span<const double> xis(xi, n);
            keep[c] = dist(std::span<const double>(x.data(), n), xis) >= step && norm(xis) >= step;
        }

        // F sampled at the 2n stencil points x +- h e_d.
        std::vector<double> f_plus(n * nn, 0.0), f_minus(n * nn, 0.0);
        for (int d = 0; d < n; ++d) {
            for (int sign = 0; sign < 2; ++sign) {
                double y[3];
                for (int i = 0; i < n; ++i) y[i] = x[i];
                y[d] += sign == 0 ? h : -h;
                std::span<const double> ys(y, n);
                double* acc = (sign == 0 ? f_plus : f_minus).data() + d * nn;
                auto leaf = [&](std::size_t c, double* into) {
                    if (!keep[c]) return;
                    double xi[3];
                    grid.center(c, xi);
                    const double k = kernel_K(ys, std::span<const double>(xi, n), n);
                    const double* jc = jac.data() + c * nn;
                    for (int e = 0; e < nn; ++e) into[e] += jc[e] * k;
                };
                reduce_cells(cells, nn, leaf, acc, spec.parallel);
                for (int e = 0; e < nn; ++e) acc[e] *= cell_volume;
            }
        }

        for (int i = 0; i < n; ++i) {
            double tr_plus = 0, tr_minus = 0;
            for (int k = 0; k < n; ++k) {
                tr_plus += f_plus[i * nn + k * n + k];
                tr_minus += f_minus[i * nn + k * n + k];
            }
            out.g[p][i] = (tr_plus - tr_minus) / (2.0 * h);
            double ri = 0;
            for (int k = 0; k < n; ++k) {
                const double plus = f_plus[k * nn + i * n + k] - f_plus[k * nn + k * n + i];
                const double minus = f_minus[k * nn + i * n + k] - f_minus[k * nn + k * n + i];
                ri += (plus - minus) / (2.0 * h);
            }
            out.r[p][i] = ri;
        }
    }
    return out;
}

SampledDecomposition theorem2_decompose_reference(
    const FieldSampler& f, const std::vector<std::vector<double>>& eval_points,
    const QuadratureSpec& spec) {
    const int n = spec.n;
    if (n != 2 && n != 3) throw std::invalid_argument("theorem2: dimension must be 2 or 3");
    const double step = spec.grid_step;
    const double radius = spec.truncation_radius;
    const int per_axis = static_cast<int>(std::llround(2.0 * radius / step));
    const double h = spec.stencil_h > 0 ? spec.stencil_h : step / 2.0;
    const double hj = step / 4.0;
    double cell_volume = 1.0;
    for (int i = 0; i < n; ++i) cell_volume *= step;

    SampledDecomposition out;
    out.g.resize(eval_points.size(), std::vector<double>(n, 0.0));
    out.r.resize(eval_points.size(), std::vector<double>(n, 0.0));

    std::vector<int> idx(n, 0);
    for (std::size_t p = 0; p < eval_points.size(); ++p) {
        const auto& x = eval_points[p];
        if (norm(x) < step)
            throw SingularEvalPoint("eval point within grid_step of the origin");
        // F at the 2n stencil points, accumulated cell by cell in index order.
        std::vector<double> f_plus(n * n * n, 0.0), f_minus(n * n * n, 0.0);
        std::fill(idx.begin(), idx.end(), 0);
        for (;;) {
            double xi[3];
            for (int a = 0; a < n; ++a) xi[a] = -radius + (idx[a] + 0.5) * step;
            std::span<const double> xis(xi, n);
            if (dist(std::span<const double>(x.data(), n), xis) >= step && norm(xis) >= step) {
                double jac[9];
                double plus[3], minus[3];
                for (int j = 0; j < n; ++j) {
                    std::memcpy(plus, xi, sizeof plus);
                    std::memcpy(minus, xi, sizeof minus);
                    plus[j] += hj;
                    minus[j] -= hj;
                    for (int i = 0; i < n; ++i)
                        jac[i * n + j] = (f.eval(i, std::span<const double>(plus, n)) -
                                          f.eval(i, std::span<const double>(minus, n))) /
                                         (2.0 * hj);
                }
                for (int d = 0; d < n; ++d) {
                    for (int sign = 0; sign < 2; ++sign) {
                        double y[3];
                        for (int i = 0; i < n; ++i) y[i] = x[i];
                        y[d] += sign == 0 ? h : -h;
                        const double k = kernel_K(std::span<const double>(y, n), xis, n);
                        double* acc = (sign == 0 ? f_plus : f_minus).data() + d * n * n;
                        for (int e = 0; e < n * n; ++e) acc[e] += jac[e] * k * cell_volume;
                    }
                }
            }
            int axis = n - 1;
            while (axis >= 0 && ++idx[axis] == per_axis) idx[axis--] = 0;
            if (axis < 0) break;
        }
        for (int i = 0; i < n; ++i) {
            double tr_plus = 0, tr_minus = 0;
            for (int k = 0; k < n; ++k) {
                tr_plus += f_plus[i * n * n + k * n + k];
                tr_minus += f_minus[i * n * n + k * n + k];
            }
            out.g[p][i] = (tr_plus - tr_minus) / (2.0 * h);
            double ri = 0;
            for (int k = 0; k < n; ++k) {
                const double plus = f_plus[k * n * n + i * n + k] - f_plus[k * n * n + k * n + i];
                const double minus =
                    f_minus[k * n * n + i * n + k] - f_minus[k * n * n + k * n + i];
                ri += (plus - minus) / (2.0 * h);
            }
            out.r[p][i] = ri;
        }
    }
    return out;
}

double fd_divergence(const FieldSampler& v, std::span<const double> x, double h) {
    double s = 0;
    std::vector<double> y(x.begin(), x.end());
    for (int i = 0; i < v.n; ++i) {
        y[i] = x[i] + h;
        const double plus = v.eval(i, y);
        y[i] = x[i] - h;
        const double minus = v.eval(i, y);
        y[i] = x[i];
        s += (plus - minus) / (2.0 * h);
    }
    return s;
}

std::vector<std::tuple<int, int, double>> fd_curl_pairs(const FieldSampler& v,
                                                        std::span<const double> x, double h) {
    std::vector<std::tuple<int, int, double>> out;
    std::vector<double> y(x.begin(), x.end());
    auto partial = [&](int comp, int dir) {
        y[dir] = x[dir] + h;
        const double plus = v.eval(comp, y);
        y[dir] = x[dir] - h;
        const double minus = v.eval(comp, y);
        y[dir] = x[dir];
        return (plus - minus) / (2.0 * h);
    };
    for (int i = 0; i < v.n; ++i)
        for (int j = i + 1; j < v.n; ++j) out.emplace_back(i, j, partial(j, i) - partial(i, j));
    return out;
}

std::vector<double> fd_gradient(const std::function<double(std::span<const double>)>& s,
                                std::span<const double> x, double h) {
    std::vector<double> out(x.size());
    std::vector<double> y(x.begin(), x.end());
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] = x[i] + h;
        const double plus = s(y);
        y[i] = x[i] - h;
        const double minus = s(y);
        y[i] = x[i];
        out[i] = (plus - minus) / (2.0 * h);
    }
    return out;
}

} // namespace helm
