#include "helm/decompose.hpp"

#include "helm/render.hpp"

#include <cassert>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace helm {

const char* to_string(TermMethod m) {
    switch (m) {
    case TermMethod::cor5: return "Cor5";
    case TermMethod::cor6: return "Cor6";
    case TermMethod::cor7: return "Cor7";
    case TermMethod::cor8: return "Cor8";
    case TermMethod::cond_2a: return "Cond2a";
    case TermMethod::cond_2b: return "Cond2b";
    }
    return "?";
}

const char* to_string(FailureReason r) {
    switch (r) {
    case FailureReason::lambda_exceeded: return "LambdaExceeded";
    case FailureReason::resonance_c_equals_1: return "ResonanceCEquals1";
    case FailureReason::multi_foreign_2b_inapplicable: return "MultiForeign2bInapplicable";
    }
    return "?";
}

NoDecomposition::NoDecomposition(int component_, std::string term_text_, FailureReason reason_)
    : std::runtime_error("no decomposition for component " + std::to_string(component_ + 1) +
                         " term " + term_text_ + ": " + to_string(reason_)),
      component(component_), term_text(std::move(term_text_)), reason(reason_) {}

namespace {

UniExpr own_uniexpr(const SeparableTerm& t, int k) { return UniExpr::atom(k, t.atoms[k], 1); }

// The foreign product v_k(x_{!=k}) of a term, as an ExprSum with the
// coordinate-k slot set to the constant atom and coefficient 1.
ExprSum foreign_part(const SeparableTerm& t, int k, int n) {
    Monomial m = t.atoms;
    m[k] = Atom{};
    return ExprSum::from_term(n, 1, m);
}

ExprSum unit_term(const SeparableTerm& t, int n) { return ExprSum::from_term(n, 1, t.atoms); }

std::vector<int> nonconst_foreign(const SeparableTerm& t, int k, int n) {
    std::vector<int> out;
    for (int j = 0; j < n; ++j)
        if (j != k && !t.atoms[j].is_one()) out.push_back(j);
    return out;
}

} // namespace

ConditionSearch find_condition_2a(const SeparableTerm& t, int k, int n, int lambda_max) {
    ConditionSearch s;
    const ExprSum target = unit_term(t, n);
    UniExpr au = own_uniexpr(t, k); // A^{2 lambda} u
    ExprSum dv = foreign_part(t, k, n); // Lap^lambda v
    for (int lambda = 1; lambda <= lambda_max; ++lambda) {
        au = au.antiderivative(2);
        dv = laplacian_foreign(dv, k);
        ExprSum lhs = dv.product_with(au);
        if (lambda % 2) lhs *= Rational(-1);
        if (auto c = proportionality(lhs, target)) {
            if (*c != 1) {
                s.hit = ConditionHit{lambda, *c, -1};
                return s;
            }
            s.resonance_seen = true;
        }
    }
    return s;
}

ConditionSearch find_condition_2b(const SeparableTerm& t, int k, int n, int lambda_max) {
    ConditionSearch s;
    const auto foreign = nonconst_foreign(t, k, n);
    if (foreign.size() != 1) {
        s.applicable = false;
        return s;
    }
    const int m = foreign.front();
    const ExprSum target = unit_term(t, n);
    UniExpr du = own_uniexpr(t, k);              // d^{2 lambda} u
    UniExpr av = UniExpr::atom(m, t.atoms[m], 1); // A^{2 lambda} v
    for (int lambda = 1; lambda <= lambda_max; ++lambda) {
        du = du.derivative(2);
        av = av.antiderivative(2);
        ExprSum lhs = ExprSum::from_uniexpr(n, av).product_with(du);
        if (lambda % 2) lhs *= Rational(-1);
        if (auto c = proportionality(lhs, target)) {
            if (*c != 1) {
                s.hit = ConditionHit{lambda, *c, m};
                return s;
            }
            s.resonance_seen = true;
        }
    }
    return s;
}

PotentialMatrix potential_from_2a(const SeparableTerm& t, int k, int n, int lambda,
                                  const Rational& c) {
    assert(c != 1 && lambda >= 1);
    PotentialMatrix f(n);
    const Rational scale = t.coef / (1 - c);
    UniExpr a_odd = own_uniexpr(t, k).antiderivative(); // A^{2p+1} u
    ExprSum dv = foreign_part(t, k, n);                 // Lap^p v
    for (int p = 0; p < lambda; ++p) {
        const Rational sp = (p % 2) ? -scale : scale;
        const UniExpr a_even = a_odd.antiderivative(); // A^{2p+2} u
        f.at(k, k) += dv.product_with(a_odd) * sp;
        for (int j = 0; j < n; ++j) {
            if (j == k) continue;
            ExprSum dj = dv.partial_derivative(j);
            if (!dj.is_zero()) f.at(k, j) += dj.product_with(a_even) * sp;
        }
        if (p + 1 < lambda) {
            a_odd = a_even.antiderivative();
            dv = laplacian_foreign(dv, k);
        }
    }
    return f;
}

PotentialMatrix potential_from_2b(const SeparableTerm& t, int k, int n, int lambda,
                                  const Rational& c, int m) {
    assert(c != 1 && lambda >= 1 && m != k);
    PotentialMatrix f(n);
    const Rational scale = t.coef / (1 - c);
    UniExpr du = own_uniexpr(t, k);                                 // d^{2p} u
    UniExpr av = UniExpr::atom(m, t.atoms[m], 1).antiderivative(); // A^{2p+1} v
    for (int p = 0; p < lambda; ++p) {
        const Rational sp = (p % 2) ? -scale : scale;
        const UniExpr av2 = av.antiderivative(); // A^{2p+2} v
        f.at(k, m) += ExprSum::from_uniexpr(n, av).product_with(du) * sp;
        UniExpr du1 = du.derivative(); // d^{2p+1} u
        if (!du1.is_zero()) f.at(m, m) += ExprSum::from_uniexpr(n, av2).product_with(du1) * sp;
        if (p + 1 < lambda) {
            du = du1.derivative();
            av = av2.antiderivative();
        }
    }
    return f;
}

namespace {

struct TermOutcome {
    PotentialMatrix f;
    TermReport report;
};

PotentialMatrix corollary5(const SeparableTerm& t, int k, int n) {
    PotentialMatrix f(n);
    f.at(k, k) = ExprSum::from_uniexpr(n, own_uniexpr(t, k).antiderivative()) * t.coef;
    return f;
}

PotentialMatrix corollary6(const SeparableTerm& t, int k, int n, int m) {
    PotentialMatrix f(n);
    f.at(k, m) =
        ExprSum::from_uniexpr(n, UniExpr::atom(m, t.atoms[m], 1).antiderivative()) * t.coef;
    return f;
}

PotentialMatrix corollary8(const SeparableTerm& t, int k, int n, int m) {
    PotentialMatrix f(n);
    const UniExpr u = own_uniexpr(t, k);
    const UniExpr v = UniExpr::atom(m, t.atoms[m], 1);
    f.at(k, k) = ExprSum::from_uniexpr(n, v.antiderivative(2)).product_with(u.derivative()) * t.coef;
    f.at(k, m) = ExprSum::from_uniexpr(n, v.antiderivative()).product_with(u) * t.coef;
    return f;
}

TermOutcome decompose_term(const SeparableTerm& t, int k, int n, const DecomposeOptions& opts) {
    auto fail = [&](FailureReason reason) -> NoDecomposition {
        return NoDecomposition(k, render(t, n), reason);
    };
    auto from_hit = [&](const ConditionHit& hit, TermMethod method) {
        PotentialMatrix f = method == TermMethod::cond_2b
                                ? potential_from_2b(t, k, n, hit.lambda, hit.c, hit.m)
                                : potential_from_2a(t, k, n, hit.lambda, hit.c);
        return TermOutcome{std::move(f), TermReport{k, t, method, hit.lambda, hit.c}};
    };

    if (opts.method == Method::force_2a) {
        ConditionSearch s = find_condition_2a(t, k, n, opts.lambda_max);
        if (s.hit) return from_hit(*s.hit, TermMethod::cond_2a);
        throw fail(s.resonance_seen ? FailureReason::resonance_c_equals_1
                                    : FailureReason::lambda_exceeded);
    }
    if (opts.method == Method::force_2b) {
        ConditionSearch s = find_condition_2b(t, k, n, opts.lambda_max);
        if (s.hit) return from_hit(*s.hit, TermMethod::cond_2b);
        if (!s.applicable) throw fail(FailureReason::multi_foreign_2b_inapplicable);
        throw fail(s.resonance_seen ? FailureReason::resonance_c_equals_1
                                    : FailureReason::lambda_exceeded);
    }

    // Fast paths first. Constant terms count as own-coordinate-only.
    const auto foreign = nonconst_foreign(t, k, n);
    const Atom& own = t.atoms[k];
    if (foreign.empty())
        return {corollary5(t, k, n), TermReport{k, t, TermMethod::cor5, 1, 0}};
    if (own.is_one() && foreign.size() == 1)
        return {corollary6(t, k, n, foreign.front()),
                TermReport{k, t, TermMethod::cor6, 1, 0}};
    if (laplacian_foreign(t, k, n).is_zero())
        return {potential_from_2a(t, k, n, 1, 0), TermReport{k, t, TermMethod::cor7, 1, 0}};
    if (own.degree == 1 && own.rate == 0 && own.trig == Trig::none && foreign.size() == 1)
        return {corollary8(t, k, n, foreign.front()),
                TermReport{k, t, TermMethod::cor8, 1, 0}};

    ConditionSearch s2a = find_condition_2a(t, k, n, opts.lambda_max);
    ConditionSearch s2b = find_condition_2b(t, k, n, opts.lambda_max);
    if (s2a.hit && (!s2b.hit || s2a.hit->lambda <= s2b.hit->lambda))
        return from_hit(*s2a.hit, TermMethod::cond_2a);
    if (s2b.hit) return from_hit(*s2b.hit, TermMethod::cond_2b);
    if (s2a.resonance_seen || s2b.resonance_seen) throw fail(FailureReason::resonance_c_equals_1);
    throw fail(FailureReason::lambda_exceeded);
}

Decomposition assemble(PotentialMatrix f, std::vector<TermReport> reports) {
    Decomposition d;
    d.G = trace(f);
    d.R = antisymmetric_part(f);
    d.g = gradient(d.G);
    d.r = row_divergence(d.R);
    d.F = std::move(f);
    d.reports = std::move(reports);
    return d;
}

} // namespace

Decomposition decompose(const VectorField& f, const DecomposeOptions& opts) {
    const int n = f.n;
    struct Item {
        int k;
        SeparableTerm term;
    };
    std::vector<Item> items;
    for (int k = 0; k < n; ++k)
        for (const auto& [mono, coef] : f.components[k].terms())
            items.push_back({k, SeparableTerm{coef, mono}});

    // Terms are independent; results merge in term order so the output is
    // identical regardless of thread count.
    std::vector<TermOutcome> outcomes(items.size());
    std::vector<std::unique_ptr<NoDecomposition>> errors(items.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < items.size(); ++i) {
        try {
            outcomes[i] = decompose_term(items[i].term, items[i].k, n, opts);
        } catch (const NoDecomposition& e) {
            errors[i] = std::make_unique<NoDecomposition>(e);
        }
    }
    for (const auto& e : errors)
        if (e) throw *e;

    PotentialMatrix F(n);
    std::vector<TermReport> reports;
    reports.reserve(items.size());
    for (auto& out : outcomes) {
        F += out.f;
        reports.push_back(std::move(out.report));
    }
    return assemble(std::move(F), std::move(reports));
}

VectorField linear_vector_field(const std::vector<std::vector<Rational>>& m) {
    const int n = static_cast<int>(m.size());
    VectorField f(n);
    for (int i = 0; i < n; ++i) {
        assert(static_cast<int>(m[i].size()) == n);
        for (int j = 0; j < n; ++j) {
            Monomial mono(n);
            mono[j] = Atom{1, 0, Trig::none, 0};
            f.components[i].add_term(mono, m[i][j]);
        }
    }
    return f;
}

Decomposition linear_field_decompose(const std::vector<std::vector<Rational>>& m) {
    const int n = static_cast<int>(m.size());
    PotentialMatrix f(n);
    std::vector<TermReport> reports;
    const Rational half(1, 2);
    for (int i = 0; i < n; ++i) {
        assert(static_cast<int>(m[i].size()) == n);
        for (int j = 0; j < n; ++j) {
            if (m[i][j] == 0) continue;
            // F_ij = M_ij x_j^2 / 2: the diagonal feeds the gradient
            // potential, off-diagonal entries feed the rotation potential.
            Monomial quad(n);
            quad[j] = Atom{2, 0, Trig::none, 0};
            f.at(i, j) += ExprSum::from_term(n, half * m[i][j], quad);
            Monomial term(n);
            term[j] = Atom{1, 0, Trig::none, 0};
            reports.push_back(TermReport{i, SeparableTerm{m[i][j], term},
                                         i == j ? TermMethod::cor5 : TermMethod::cor6, 1, 0});
        }
    }
    return assemble(std::move(f), std::move(reports));
}

PotentialMatrix rotation_potential(const VectorField& w) {
    const int n = w.n;
    if (!divergence(w).is_zero())
        throw std::invalid_argument("rotation_potential: field is not divergence-free");
    PotentialMatrix r(n);
    if (w.is_zero()) return r;
    if (n < 2)
        throw std::invalid_argument("rotation_potential: need n >= 2 for a nonzero field");

    const int last = n - 1;
    for (int i = 0; i < last; ++i) {
        ExprSum a = w.components[i].antiderivative(last);
        r.at(i, last) += a;
        r.at(last, i) -= a;
    }
    // Terms of w_last independent of x_last are not reproduced by
    // d/dx_last A_last w_i; route each through an antiderivative in some
    // coordinate it depends on (any coordinate works for constants).
    for (const auto& [mono, coef] : w.components[last].terms()) {
        if (!mono[last].is_one()) continue;
        int j = 0;
        for (int cand = 0; cand < last; ++cand)
            if (!mono[cand].is_one()) {
                j = cand;
                break;
            }
        ExprSum a = ExprSum::from_term(n, coef, mono).antiderivative(j);
        r.at(last, j) += a;
        r.at(j, last) -= a;
    }
    return r;
}

Decomposition apply_gauge(const Decomposition& d, const ExprSum& h) {
    if (!laplacian(h).is_zero())
        throw HarmonicCheckFailed("gauge function is not harmonic (Laplacian != 0)");
    const int n = h.dims();
    VectorField w = gradient(h);
    for (auto& c : w.components) c *= Rational(-1);
    if (n < 2 && !w.is_zero())
        throw std::invalid_argument("apply_gauge: nonconstant gauge needs n >= 2");

    PotentialMatrix rh = rotation_potential(w);
    PotentialMatrix f = d.F;
    const Rational half(1, 2);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) f.at(i, j) += rh.at(i, j) * half;
    f.at(0, 0) += h;
    return assemble(std::move(f), d.reports);
}

} // namespace helm
