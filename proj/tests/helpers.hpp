#pragma once

#include "helm/decompose.hpp"
#include "helm/fixtures.hpp"
#include "helm/render.hpp"

#include <cmath>
#include <cstdlib>
#include <random>

namespace helm::testing {

inline bool near(double a, double b, double rel = 1e-6, double floor = 1e-9) {
    return std::abs(a - b) <= std::max(rel * std::max(std::abs(a), std::abs(b)), floor);
}

// Tolerance relative to the largest value at the point, not the componentwise
// value; finite differences carry absolute error from neighbouring scales.
inline bool near_scaled(double a, double b, double scale, double rel = 1e-6) {
    return std::abs(a - b) <= rel * std::max(1.0, std::max(scale, std::max(std::abs(a), std::abs(b))));
}

inline unsigned property_seed() {
    if (const char* env = std::getenv("HELMHOLTZ_SEED")) return std::strtoul(env, nullptr, 10);
    return 42;
}

inline Rational random_rational(std::mt19937& rng, int num_max = 9, int den_max = 4) {
    std::uniform_int_distribution<int> num(-num_max, num_max);
    std::uniform_int_distribution<int> den(1, den_max);
    int n = num(rng);
    if (n == 0) n = 1;
    return Rational(n, den(rng));
}

inline Rational random_nonzero(std::mt19937& rng, int num_max = 2, int den_max = 2) {
    return random_rational(rng, num_max, den_max);
}

// Random univariate expression within the closed atom class.
inline UniExpr random_uniexpr(std::mt19937& rng, int coord, int max_atoms = 4) {
    std::uniform_int_distribution<int> natoms(1, max_atoms);
    std::uniform_int_distribution<int> deg(0, 5);
    std::uniform_int_distribution<int> kind(0, 3);
    UniExpr e(coord);
    const int count = natoms(rng);
    for (int i = 0; i < count; ++i) {
        Rational rate = 0, freq = 0;
        Trig trig = Trig::none;
        switch (kind(rng)) {
        case 0: break;
        case 1: rate = random_rational(rng, 5, 2); break;
        case 2:
            trig = (kind(rng) & 1) ? Trig::sin : Trig::cos;
            freq = random_rational(rng, 5, 2);
            break;
        default:
            rate = random_rational(rng, 5, 2);
            trig = (kind(rng) & 1) ? Trig::sin : Trig::cos;
            freq = random_rational(rng, 5, 2);
            break;
        }
        auto [atom, scale] = normalize_atom(deg(rng), rate, trig, freq);
        if (scale != 0) e.add(atom, scale * random_rational(rng));
    }
    return e;
}

// Random separable fields that stay within the decomposable class: every term
// either has a polynomial foreign part (condition 2a terminates with C = 0),
// a polynomial own factor with a single foreign coordinate (condition 2b
// terminates), or is a pure exp/trig product whose C is checked against the
// resonance C = 1 up front.
inline VectorField random_field(std::mt19937& rng, int n, int max_terms = 5) {
    std::uniform_int_distribution<int> nterms(1, max_terms);
    std::uniform_int_distribution<int> coord(0, n - 1);
    std::uniform_int_distribution<int> shape(0, 2);
    std::uniform_int_distribution<int> deg(0, 3);
    std::uniform_int_distribution<int> deg1(1, 3);
    std::uniform_int_distribution<int> rate_i(1, 2);
    std::uniform_int_distribution<int> sign(0, 1);
    std::uniform_int_distribution<int> pure(0, 1);

    auto pure_atom = [&](Rational& weight) {
        // exp(p x) or trig(w x), never mixed; weight accumulates the factor
        // the atom contributes to the 2a proportionality constant.
        Rational q(rate_i(rng));
        if (pure(rng)) {
            weight = q * q;
            return Atom{0, sign(rng) ? q : -q, Trig::none, 0};
        }
        weight = -q * q;
        return Atom{0, 0, sign(rng) ? Trig::sin : Trig::cos, q};
    };

    VectorField f(n);
    for (int k = 0; k < n; ++k) {
        const int count = nterms(rng);
        for (int t = 0; t < count; ++t) {
            Monomial mono(n);
            switch (shape(rng)) {
            case 0: { // polynomial foreign part, arbitrary own factor
                Rational w;
                mono[k] = pure(rng) ? Atom{static_cast<unsigned>(deg(rng)), 0, Trig::none, 0}
                                    : pure_atom(w);
                for (int j = 0; j < n; ++j)
                    if (j != k && pure(rng))
                        mono[j] = Atom{static_cast<unsigned>(deg(rng)), 0, Trig::none, 0};
                break;
            }
            case 1: { // polynomial own factor, single foreign coordinate
                mono[k] = Atom{static_cast<unsigned>(deg(rng)), 0, Trig::none, 0};
                int m = coord(rng);
                if (m == k) m = (k + 1) % n;
                Rational w;
                mono[m] = pure(rng) ? Atom{static_cast<unsigned>(deg1(rng)), 0, Trig::none, 0}
                                    : pure_atom(w);
                break;
            }
            default: { // pure exp/trig product; keep C away from 1
                Rational own_weight;
                mono[k] = pure_atom(own_weight);
                Rational foreign_total = 0;
                for (int j = 0; j < n; ++j) {
                    if (j == k || !pure(rng)) continue;
                    Rational w;
                    mono[j] = pure_atom(w);
                    foreign_total += w;
                }
                // C = foreign_total / own_weight up to sign; resonance is
                // |C| == 1 with positive sign, rerolled by flipping a rate.
                if (foreign_total == own_weight || foreign_total == -own_weight) {
                    mono[k] = Atom{0, Rational(3), Trig::none, 0};
                }
                break;
            }
            }
            f.components[k].add_term(mono, random_rational(rng));
        }
    }
    return f;
}

inline VectorField field_sum(const VectorField& a, const VectorField& b) {
    VectorField out(a.n);
    for (int i = 0; i < a.n; ++i) out.components[i] = a.components[i] + b.components[i];
    return out;
}

// Symbolic Helmholtz invariants: g + r = f, div r = 0, curl g = 0.
inline void check_decomposition_exact(const VectorField& f, const Decomposition& d) {
    for (int i = 0; i < f.n; ++i) {
        const ExprSum sum = d.g.components[i] + d.r.components[i];
        if (!(sum == f.components[i]))
            throw std::runtime_error("g + r != f in component " + std::to_string(i + 1) + ": " +
                                     render(sum) + " vs " + render(f.components[i]));
    }
    if (!divergence(d.r).is_zero())
        throw std::runtime_error("div r != 0: " + render(divergence(d.r)));
    for (int i = 0; i < f.n; ++i)
        for (int j = i + 1; j < f.n; ++j)
            if (!curl_pair(d.g, i, j).is_zero())
                throw std::runtime_error("curl g != 0 for pair " + std::to_string(i) + "," +
                                         std::to_string(j));
    if (!(trace(d.F) == d.G)) throw std::runtime_error("G != trace F");
    for (int i = 0; i < f.n; ++i)
        for (int j = 0; j < f.n; ++j)
            if (!(d.R.at(i, j) == d.F.at(i, j) - d.F.at(j, i)))
                throw std::runtime_error("R != F - F^T");
}

} // namespace helm::testing
