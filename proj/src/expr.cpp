#include "helm/expr.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace helm {

WeightedAtom normalize_atom(unsigned degree, Rational rate, Trig trig, Rational freq) {
    Rational scale = 1;
    if (trig == Trig::none) {
        freq = 0;
    } else if (freq == 0) {
        if (trig == Trig::sin) scale = 0; // sin(0) == 0
        trig = Trig::none;                // cos(0) == 1
    } else if (freq < 0) {
        if (trig == Trig::sin) scale = -1;
        freq = -freq;
    }
    if (scale == 0) return {Atom{}, 0};
    return {Atom{degree, std::move(rate), trig, std::move(freq)}, scale};
}

AtomCombo atom_derivative(const Atom& a) {
    AtomCombo out;
    if (a.degree > 0)
        out.emplace_back(Atom{a.degree - 1, a.rate, a.trig, a.freq}, Rational(a.degree));
    if (a.rate != 0)
        out.emplace_back(a, a.rate);
    if (a.trig == Trig::sin)
        out.emplace_back(Atom{a.degree, a.rate, Trig::cos, a.freq}, a.freq);
    else if (a.trig == Trig::cos)
        out.emplace_back(Atom{a.degree, a.rate, Trig::sin, a.freq}, -a.freq);
    return out;
}

AtomCombo atom_antiderivative(const Atom& a) {
    AtomCombo out;
    if (a.trig == Trig::none && a.rate == 0) {
        // Lower-bound-0 antiderivative of pure powers.
        out.emplace_back(Atom{a.degree + 1, 0, Trig::none, 0}, Rational(1, a.degree + 1));
        return out;
    }
    if (a.trig == Trig::none) {
        // x^n e^{px}: integrate by parts, degree descending.
        Rational c = 1;
        for (unsigned m = a.degree;; --m) {
            c /= a.rate;
            out.emplace_back(Atom{m, a.rate, Trig::none, 0}, c);
            if (m == 0) break;
            c *= -Rational(m);
        }
        return out;
    }
    // x^n e^{px} trig(wx): undetermined coefficients in the span of the same
    // family, degree descending. det = p^2 + w^2 > 0, so always solvable.
    const Rational det = a.rate * a.rate + a.freq * a.freq;
    Rational sin_target = a.trig == Trig::sin ? 1 : 0;
    Rational cos_target = a.trig == Trig::cos ? 1 : 0;
    for (unsigned m = a.degree;; --m) {
        Rational sc = (a.rate * sin_target + a.freq * cos_target) / det;
        Rational cc = (a.rate * cos_target - a.freq * sin_target) / det;
        if (sc != 0) out.emplace_back(Atom{m, a.rate, Trig::sin, a.freq}, sc);
        if (cc != 0) out.emplace_back(Atom{m, a.rate, Trig::cos, a.freq}, cc);
        if (m == 0) break;
        sin_target = -Rational(m) * sc;
        cos_target = -Rational(m) * cc;
    }
    return out;
}

AtomCombo atom_product(const Atom& a, const Atom& b) {
    const unsigned degree = a.degree + b.degree;
    const Rational rate = a.rate + b.rate;
    AtomCombo out;
    auto push = [&](unsigned d, Rational p, Trig t, Rational w, Rational c) {
        auto [atom, scale] = normalize_atom(d, std::move(p), t, std::move(w));
        if (scale != 0) out.emplace_back(atom, scale * c);
    };
    if (a.trig == Trig::none || b.trig == Trig::none) {
        const Atom& t = a.trig == Trig::none ? b : a;
        push(degree, rate, t.trig, t.freq, 1);
        return out;
    }
    const Rational sum = a.freq + b.freq;
    const Rational diff = a.freq - b.freq;
    const Rational half(1, 2);
    if (a.trig == Trig::sin && b.trig == Trig::sin) {
        push(degree, rate, Trig::cos, diff, half);
        push(degree, rate, Trig::cos, sum, -half);
    } else if (a.trig == Trig::cos && b.trig == Trig::cos) {
        push(degree, rate, Trig::cos, diff, half);
        push(degree, rate, Trig::cos, sum, half);
    } else {
        // sin * cos (either order): 1/2 [sin(w1+w2) + sin(w1-w2)] with w1 the
        // sine frequency.
        const Rational& ws = a.trig == Trig::sin ? a.freq : b.freq;
        const Rational& wc = a.trig == Trig::sin ? b.freq : a.freq;
        push(degree, rate, Trig::sin, ws + wc, half);
        push(degree, rate, Trig::sin, ws - wc, half);
    }
    return out;
}

double atom_eval(const Atom& a, double x) {
    double v = 1.0;
    for (unsigned i = 0; i < a.degree; ++i) v *= x;
    if (a.rate != 0) v *= std::exp(to_double(a.rate) * x);
    if (a.trig == Trig::sin)
        v *= std::sin(to_double(a.freq) * x);
    else if (a.trig == Trig::cos)
        v *= std::cos(to_double(a.freq) * x);
    return v;
}

// ---------------------------------------------------------------------------
// UniExpr

UniExpr UniExpr::one(int coord) {
    UniExpr e(coord);
    e.add(Atom{}, 1);
    return e;
}

UniExpr UniExpr::atom(int coord, Atom a, Rational c) {
    UniExpr e(coord);
    e.add(a, c);
    return e;
}

bool UniExpr::is_const() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational UniExpr::const_value() const {
    assert(is_const());
    return terms_.empty() ? Rational(0) : terms_.begin()->second;
}

void UniExpr::add(const Atom& a, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(a, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

UniExpr& UniExpr::operator+=(const UniExpr& o) {
    assert(coord_ == o.coord_ || is_zero() || o.is_zero());
    if (is_zero()) coord_ = o.coord_;
    for (const auto& [a, c] : o.terms_) add(a, c);
    return *this;
}

UniExpr& UniExpr::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [a, v] : terms_) v *= c;
    return *this;
}

UniExpr UniExpr::derivative() const {
    UniExpr out(coord_);
    for (const auto& [a, c] : terms_)
        for (const auto& [da, dc] : atom_derivative(a)) out.add(da, dc * c);
    return out;
}

UniExpr UniExpr::antiderivative() const {
    UniExpr out(coord_);
    for (const auto& [a, c] : terms_)
        for (const auto& [aa, ac] : atom_antiderivative(a)) out.add(aa, ac * c);
    return out;
}

UniExpr UniExpr::derivative(unsigned times) const {
    UniExpr out = *this;
    for (unsigned i = 0; i < times; ++i) out = out.derivative();
    return out;
}

UniExpr UniExpr::antiderivative(unsigned times) const {
    UniExpr out = *this;
    for (unsigned i = 0; i < times; ++i) out = out.antiderivative();
    return out;
}

UniExpr UniExpr::product(const UniExpr& o) const {
    assert(coord_ == o.coord_ || is_zero() || o.is_zero());
    UniExpr out(coord_);
    for (const auto& [a, ca] : terms_)
        for (const auto& [b, cb] : o.terms_)
            for (const auto& [p, cp] : atom_product(a, b)) out.add(p, cp * ca * cb);
    return out;
}

double UniExpr::eval(double x) const {
    double v = 0.0;
    for (const auto& [a, c] : terms_) v += to_double(c) * atom_eval(a, x);
    return v;
}

// ---------------------------------------------------------------------------
// ExprSum

ExprSum ExprSum::constant(int n, Rational c) {
    ExprSum e(n);
    e.add_term(Monomial(n), c);
    return e;
}

ExprSum ExprSum::from_term(int n, const Rational& coef, Monomial mono) {
    assert(static_cast<int>(mono.size()) == n);
    ExprSum e(n);
    e.add_term(mono, coef);
    return e;
}

ExprSum ExprSum::from_uniexpr(int n, const UniExpr& u) {
    ExprSum e(n);
    for (const auto& [a, c] : u.terms()) {
        Monomial mono(n);
        mono[u.coord()] = a;
        e.add_term(mono, c);
    }
    return e;
}

void ExprSum::add_term(const Monomial& mono, const Rational& coef) {
    assert(static_cast<int>(mono.size()) == n_);
    if (coef == 0) return;
    auto [it, inserted] = terms_.emplace(mono, coef);
    if (!inserted) {
        it->second += coef;
        if (it->second == 0) terms_.erase(it);
    }
}

ExprSum& ExprSum::operator+=(const ExprSum& o) {
    assert(n_ == o.n_);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

ExprSum& ExprSum::operator-=(const ExprSum& o) {
    assert(n_ == o.n_);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

ExprSum& ExprSum::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

ExprSum ExprSum::partial_derivative(int j) const {
    ExprSum out(n_);
    for (const auto& [mono, coef] : terms_) {
        for (const auto& [da, dc] : atom_derivative(mono[j])) {
            Monomial m = mono;
            m[j] = da;
            out.add_term(m, dc * coef);
        }
    }
    return out;
}

ExprSum ExprSum::antiderivative(int j) const {
    ExprSum out(n_);
    for (const auto& [mono, coef] : terms_) {
        for (const auto& [aa, ac] : atom_antiderivative(mono[j])) {
            Monomial m = mono;
            m[j] = aa;
            out.add_term(m, ac * coef);
        }
    }
    return out;
}

ExprSum ExprSum::product_with(const UniExpr& u) const {
    const int j = u.coord();
    ExprSum out(n_);
    for (const auto& [mono, coef] : terms_) {
        for (const auto& [ua, uc] : u.terms()) {
            for (const auto& [pa, pc] : atom_product(mono[j], ua)) {
                Monomial m = mono;
                m[j] = pa;
                out.add_term(m, pc * uc * coef);
            }
        }
    }
    return out;
}

UniExpr ExprSum::own_factor(const SeparableTerm& t, int k) {
    return UniExpr::atom(k, t.atoms[k], 1);
}

double ExprSum::eval(std::span<const double> x) const {
    assert(static_cast<int>(x.size()) == n_);
    double v = 0.0;
    for (const auto& [mono, coef] : terms_) {
        double t = to_double(coef);
        for (int j = 0; j < n_; ++j)
            if (!mono[j].is_one()) t *= atom_eval(mono[j], x[j]);
        v += t;
    }
    return v;
}

// ---------------------------------------------------------------------------

ExprSum laplacian_foreign(const SeparableTerm& t, int k, int n) {
    ExprSum out(n);
    for (int j = 0; j < n; ++j) {
        if (j == k) continue;
        UniExpr second = UniExpr::atom(j, t.atoms[j], 1).derivative(2);
        if (second.is_zero()) continue;
        Monomial m = t.atoms;
        m[j] = Atom{};
        out += ExprSum::from_term(n, t.coef, m).product_with(second);
    }
    return out;
}

ExprSum laplacian_foreign(const ExprSum& e, int k) {
    ExprSum out(e.dims());
    for (const auto& [mono, coef] : e.terms())
        out += laplacian_foreign(SeparableTerm{coef, mono}, k, e.dims());
    return out;
}

ExprSum laplacian(const ExprSum& e) {
    ExprSum out(e.dims());
    for (int j = 0; j < e.dims(); ++j) out += e.partial_derivative(j).partial_derivative(j);
    return out;
}

std::optional<Rational> proportionality(const ExprSum& a, const ExprSum& b) {
    if (a.is_zero()) return Rational(0);
    if (b.is_zero()) return std::nullopt;
    if (a.term_count() != b.term_count()) return std::nullopt;
    std::optional<Rational> ratio;
    auto ia = a.terms().begin();
    auto ib = b.terms().begin();
    for (; ia != a.terms().end(); ++ia, ++ib) {
        if (ia->first != ib->first) return std::nullopt;
        Rational c = ia->second / ib->second;
        if (!ratio)
            ratio = c;
        else if (*ratio != c)
            return std::nullopt;
    }
    return ratio;
}

} // namespace helm
