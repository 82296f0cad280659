#pragma once

#include "helm/rational.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace helm {

enum class Trig : std::uint8_t { none, sin, cos };

// One univariate basis function x^degree * e^{rate*x} * trig(freq*x).
// Canonical key: freq > 0 whenever trig is present (sign-normalized at
// construction, sin(-w x) = -sin(w x) flips the caller's coefficient),
// freq == 0 and trig == none otherwise. The class of finite linear
// combinations of atoms is closed under differentiation, antidifferentiation
// and multiplication.
struct Atom {
    unsigned degree = 0;
    Rational rate = 0;
    Trig trig = Trig::none;
    Rational freq = 0;

    bool is_one() const { return degree == 0 && rate == 0 && trig == Trig::none; }
    bool operator==(const Atom& o) const {
        return degree == o.degree && trig == o.trig && rate == o.rate && freq == o.freq;
    }
    bool operator<(const Atom& o) const {
        if (degree != o.degree) return degree < o.degree;
        if (rate != o.rate) return rate < o.rate;
        if (trig != o.trig) return trig < o.trig;
        return freq < o.freq;
    }
};

using WeightedAtom = std::pair<Atom, Rational>;
using AtomCombo = std::vector<WeightedAtom>;

// Sign-normalizes (degree, rate, trig, freq); returns the canonical atom and
// the scale factor it contributes (0 when the atom vanishes, e.g. sin(0*x)).
WeightedAtom normalize_atom(unsigned degree, Rational rate, Trig trig, Rational freq);

AtomCombo atom_derivative(const Atom& a);
// Canonical antiderivative: lower-bound-0 for pure powers (x^n -> x^{n+1}/(n+1)),
// the unique in-family antiderivative (no additive constant) as soon as an
// exponential or trigonometric part is present. This keeps iterated
// antiderivatives of exp/trig atoms proportional to the original atom.
AtomCombo atom_antiderivative(const Atom& a);
// Product of two atoms in the same coordinate; trig*trig expands via the
// product-to-sum identities, so the result may hold up to two atoms.
AtomCombo atom_product(const Atom& a, const Atom& b);

double atom_eval(const Atom& a, double x);

// A univariate expression in coordinate `coord` (0-based): a finite linear
// combination of atoms. The empty map is the zero function.
class UniExpr {
public:
    UniExpr() = default;
    explicit UniExpr(int coord) : coord_(coord) {}
    static UniExpr one(int coord);
    static UniExpr atom(int coord, Atom a, Rational c = 1);

    int coord() const { return coord_; }
    const std::map<Atom, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_const() const;
    // The value when the expression is constant (zero map -> 0).
    Rational const_value() const;

    void add(const Atom& a, const Rational& c);
    UniExpr& operator+=(const UniExpr& o);
    UniExpr& operator*=(const Rational& c);

    UniExpr derivative() const;
    UniExpr antiderivative() const;
    UniExpr derivative(unsigned times) const;
    UniExpr antiderivative(unsigned times) const;
    UniExpr product(const UniExpr& o) const;

    double eval(double x) const;

    bool operator==(const UniExpr& o) const { return coord_ == o.coord_ && terms_ == o.terms_; }

private:
    int coord_ = 0;
    std::map<Atom, Rational> terms_;
};

// Product of one atom per coordinate; atoms for coordinates the term does not
// depend on are the constant 1.
using Monomial = std::vector<Atom>;

struct SeparableTerm {
    Rational coef;
    Monomial atoms;
};

// A multivariate expression: finite sum of separable terms in canonical form
// (terms keyed by their monomial, no zero coefficients stored). Equality of
// canonical forms is exact structural equality.
class ExprSum {
public:
    ExprSum() = default;
    explicit ExprSum(int n) : n_(n) {}
    static ExprSum zero(int n) { return ExprSum(n); }
    static ExprSum constant(int n, Rational c);
    static ExprSum from_term(int n, const Rational& coef, Monomial mono);
    // Embeds a univariate expression as a multivariate one.
    static ExprSum from_uniexpr(int n, const UniExpr& u);

    int dims() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Monomial, Rational>& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    void add_term(const Monomial& mono, const Rational& coef);
    ExprSum& operator+=(const ExprSum& o);
    ExprSum& operator-=(const ExprSum& o);
    ExprSum& operator*=(const Rational& c);
    friend ExprSum operator+(ExprSum a, const ExprSum& b) { return a += b; }
    friend ExprSum operator-(ExprSum a, const ExprSum& b) { return a -= b; }
    friend ExprSum operator*(ExprSum a, const Rational& c) { return a *= c; }

    ExprSum partial_derivative(int j) const;
    ExprSum antiderivative(int j) const;
    // Multiplies every term by a univariate expression living in `u.coord()`.
    ExprSum product_with(const UniExpr& u) const;
    // Extracts the coordinate-k part of a single term as a UniExpr.
    static UniExpr own_factor(const SeparableTerm& t, int k);

    double eval(std::span<const double> x) const;

    bool operator==(const ExprSum& o) const { return n_ == o.n_ && terms_ == o.terms_; }

private:
    int n_ = 0;
    std::map<Monomial, Rational> terms_;
};

// Laplacian restricted to the coordinates j != k of a single separable term.
ExprSum laplacian_foreign(const SeparableTerm& t, int k, int n);
ExprSum laplacian_foreign(const ExprSum& e, int k);
// Full Laplacian over all coordinates.
ExprSum laplacian(const ExprSum& e);

// Exact proportionality test: returns C with a == C*b when such a scalar
// exists. a == 0 yields C = 0 (even for b == 0); b == 0 with a != 0 yields
// nothing.
std::optional<Rational> proportionality(const ExprSum& a, const ExprSum& b);

} // namespace helm
