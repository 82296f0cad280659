#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helm/decompose.hpp"
#include "helm/parse.hpp"
#include "helm/render.hpp"
#include "helpers.hpp"

#include <random>

using namespace helm;
using helm::testing::check_decomposition_exact;
using helm::testing::field_sum;

namespace {

SeparableTerm single_term(const ExprSum& e) {
    REQUIRE(e.term_count() == 1);
    return SeparableTerm{e.terms().begin()->second, e.terms().begin()->first};
}

SeparableTerm term_of(const std::string& text, int n) {
    return single_term(parse_expression(text, n));
}

VectorField field_of(std::initializer_list<std::string> comps, int n) {
    VectorField f(n);
    int i = 0;
    for (const auto& c : comps) f.components[i++] = parse_expression(c, n);
    return f;
}

} // namespace

TEST_CASE("condition 2a search on the appendix cases") {
    // x1^a x2^2 x3^2 with a = 2: Laplacian chain dies after three rounds
    auto poly = find_condition_2a(term_of("x1^2*x2^2*x3^2", 3), 0, 3, 16);
    REQUIRE(poly.hit.has_value());
    CHECK(poly.hit->lambda == 3);
    CHECK(poly.hit->c == Rational(0));

    // cos(w x1) exp(a x3), w = 1, a = 2: lambda = 1, C = a^2/w^2
    auto ce = find_condition_2a(term_of("cos(x1)*exp(2*x3)", 3), 0, 3, 16);
    REQUIRE(ce.hit.has_value());
    CHECK(ce.hit->lambda == 1);
    CHECK(ce.hit->c == Rational(4));

    // e^{p x1} e^{q x2}, p = 1, q = 2: C = -q^2/p^2
    auto ee = find_condition_2a(term_of("exp(x1)*exp(2*x2)", 2), 0, 2, 16);
    REQUIRE(ee.hit.has_value());
    CHECK(ee.hit->lambda == 1);
    CHECK(ee.hit->c == Rational(-4));
}

TEST_CASE("condition 2b search on the appendix cases") {
    // x1^2 x2^a with a = 1: fourth own derivative vanishes
    auto poly = find_condition_2b(term_of("x1^2*x2", 2), 0, 2, 16);
    REQUIRE(poly.hit.has_value());
    CHECK(poly.hit->lambda == 2);
    CHECK(poly.hit->c == Rational(0));
    CHECK(poly.hit->m == 1);

    // constant own factor: lambda = 1, C = 0 immediately
    auto cst = find_condition_2b(term_of("sin(2*x3)", 3), 0, 3, 16);
    REQUIRE(cst.hit.has_value());
    CHECK(cst.hit->lambda == 1);
    CHECK(cst.hit->c == Rational(0));
    CHECK(cst.hit->m == 2);

    // e^{p x1} e^{q x2}: C = -p^2/q^2
    auto ee = find_condition_2b(term_of("exp(x1)*exp(2*x2)", 2), 0, 2, 16);
    REQUIRE(ee.hit.has_value());
    CHECK(ee.hit->lambda == 1);
    CHECK(ee.hit->c == Rational(-1, 4));

    // two nonconstant foreign factors: not applicable
    auto multi = find_condition_2b(term_of("x1^2*x2^2*x3^2", 3), 0, 3, 16);
    CHECK(!multi.applicable);
    CHECK(!multi.hit.has_value());
}

TEST_CASE("reported lambda is minimal") {
    auto hit = find_condition_2b(term_of("x1^2*x2", 2), 0, 2, 16).hit;
    REQUIRE(hit.has_value());
    // lambda = 1 must not satisfy the proportionality: check directly that
    // -(d^2 u)(A^2 v) is not a multiple of u v.
    ExprSum lhs = parse_expression("-2*1/6*x2^3", 2); // -(2)(x2^3/6)
    CHECK(!proportionality(lhs, parse_expression("x1^2*x2", 2)).has_value());
    CHECK(hit->lambda == 2);
}

TEST_CASE("potential matrices of the worked example, both routes") {
    const SeparableTerm t = term_of("exp(x1)*exp(2*x2)", 2);

    PotentialMatrix f2a = potential_from_2a(t, 0, 2, 1, Rational(-4));
    CHECK(f2a.at(0, 0) == parse_expression("1/5*exp(x1)*exp(2*x2)", 2));
    CHECK(f2a.at(0, 1) == parse_expression("2/5*exp(x1)*exp(2*x2)", 2));
    CHECK(f2a.at(1, 0).is_zero());
    CHECK(f2a.at(1, 1).is_zero());

    PotentialMatrix f2b = potential_from_2b(t, 0, 2, 1, Rational(-1, 4), 1);
    CHECK(f2b.at(0, 0).is_zero());
    CHECK(f2b.at(0, 1) == parse_expression("2/5*exp(x1)*exp(2*x2)", 2));
    CHECK(f2b.at(1, 0).is_zero());
    CHECK(f2b.at(1, 1) == parse_expression("1/5*exp(x1)*exp(2*x2)", 2));
}

TEST_CASE("2b with a pure foreign term reduces to the single antiderivative") {
    const SeparableTerm t = term_of("exp(3*x2)", 2);
    PotentialMatrix f = potential_from_2b(t, 0, 2, 1, 0, 1);
    CHECK(f.at(0, 1) == parse_expression("1/3*exp(3*x2)", 2));
    CHECK(f.at(0, 0).is_zero());
    CHECK(f.at(1, 1).is_zero());
}

TEST_CASE("cosine-exponential potential, lambda = 1, C = 4") {
    const SeparableTerm t = term_of("cos(x1)*exp(2*x3)", 3);
    PotentialMatrix f = potential_from_2a(t, 0, 3, 1, Rational(4));
    CHECK(f.at(0, 0) == parse_expression("-1/3*sin(x1)*exp(2*x3)", 3));
    CHECK(f.at(0, 2) == parse_expression("2/3*cos(x1)*exp(2*x3)", 3));
    CHECK(f.at(0, 1).is_zero());
}

TEST_CASE("dispatch order prefers the fast paths") {
    // Roessler with symbolic parameters bound to rationals
    FieldDocument doc = parse_field_document(
        "dim = 3\nparam a = 1/5\nparam b = 1/5\nparam c = 57/10\n"
        "f1 = -x2 - x3\nf2 = x1 + a*x2\nf3 = b + x1*x3 - c*x3\n");
    Decomposition d = decompose(doc.field());
    check_decomposition_exact(doc.field(), d);

    std::map<std::string, TermMethod> methods;
    for (const auto& rep : d.reports)
        methods["f" + std::to_string(rep.component + 1) + ":" + render(rep.term, 3)] = rep.method;
    CHECK(methods.at("f1:-x2") == TermMethod::cor6);
    CHECK(methods.at("f1:-x3") == TermMethod::cor6);
    CHECK(methods.at("f2:x1") == TermMethod::cor6);
    CHECK(methods.at("f2:1/5*x2") == TermMethod::cor5);
    CHECK(methods.at("f3:1/5") == TermMethod::cor5);
    CHECK(methods.at("f3:x1*x3") == TermMethod::cor7); // harmonic foreign part wins over Cor8
    CHECK(methods.at("f3:-57/10*x3") == TermMethod::cor5);

    // linear own factor with a non-harmonic single foreign coordinate
    Decomposition d8 = decompose(field_of({"x1*x2^2", "0"}, 2));
    REQUIRE(d8.reports.size() == 1);
    CHECK(d8.reports[0].method == TermMethod::cor8);
    CHECK(d8.reports[0].lambda == 1);
    CHECK(d8.reports[0].c_value == Rational(0));

    // general searches tie at lambda = 1, preferring 2a
    Decomposition dtie = decompose(field_of({"exp(x1)*exp(2*x2)", "0"}, 2));
    REQUIRE(dtie.reports.size() == 1);
    CHECK(dtie.reports[0].method == TermMethod::cond_2a);
}

TEST_CASE("linear-own-factor fast path construction") {
    Decomposition d = decompose(field_of({"x1*x2^2", "0"}, 2));
    check_decomposition_exact(field_of({"x1*x2^2", "0"}, 2), d);
    // F_kk = (du)(A^2 v), F_km = u (A v) for a linear own factor
    CHECK(d.F.at(0, 0) == parse_expression("1/12*x2^4", 2));
    CHECK(d.F.at(0, 1) == parse_expression("1/3*x1*x2^3", 2));
    CHECK(d.g.components[1] == parse_expression("1/3*x2^3", 2));
    CHECK(d.r.components[0] == parse_expression("x1*x2^2", 2));
    CHECK(d.r.components[1] == parse_expression("-1/3*x2^3", 2));
}

TEST_CASE("fast paths agree with the general machinery on g and r") {
    struct Case {
        VectorField f;
        Method forced;
    };
    std::vector<Case> cases;
    // Each fast-path shape forced through the matching general search.
    // F may differ; the decomposition may not.
    cases.push_back({field_of({"x1^3 + exp(2*x1)", "0"}, 2), Method::force_2a});
    cases.push_back({field_of({"sin(3*x2)", "0"}, 2), Method::force_2b});
    cases.push_back({field_of({"exp(x1)*x2", "0", "0"}, 3), Method::force_2a});
    cases.push_back({field_of({"x1*x2^2", "0"}, 2), Method::force_2b});
    for (const auto& c : cases) {
        Decomposition fast = decompose(c.f);
        Decomposition general = decompose(c.f, {16, c.forced});
        check_decomposition_exact(c.f, fast);
        check_decomposition_exact(c.f, general);
        CHECK(fast.g == general.g);
        CHECK(fast.r == general.r);
    }
}

TEST_CASE("pure gradient and pure rotation detection") {
    // all components own-coordinate only: r = 0
    VectorField grad_only = field_of({"x1^3 + sin(2*x1)", "exp(x2)", "x3"}, 3);
    Decomposition dg = decompose(grad_only);
    check_decomposition_exact(grad_only, dg);
    CHECK(dg.r.is_zero());
    CHECK(dg.g == grad_only);

    // all components single-foreign only: g = 0
    VectorField rot_only = field_of({"x2^2", "cos(x3)", "exp(x1)"}, 3);
    Decomposition dr = decompose(rot_only);
    check_decomposition_exact(rot_only, dr);
    CHECK(dr.g.is_zero());
    CHECK(dr.r == rot_only);
}

TEST_CASE("both conditions give valid but different potential matrices") {
    VectorField f = field_of({"exp(x1)*exp(2*x2)", "0"}, 2);
    Decomposition a = decompose(f, {16, Method::force_2a});
    Decomposition b = decompose(f, {16, Method::force_2b});
    check_decomposition_exact(f, a);
    check_decomposition_exact(f, b);
    CHECK(!(a.F == b.F)); // non-uniqueness of the potential matrix
}

TEST_CASE("resonance C = 1 is rejected under every method") {
    VectorField f = field_of({"cos(x1)*exp(x3)", "0", "0"}, 3);
    for (Method m : {Method::auto_select, Method::force_2a, Method::force_2b}) {
        try {
            decompose(f, {16, m});
            FAIL("expected NoDecomposition");
        } catch (const NoDecomposition& e) {
            CHECK(e.reason == FailureReason::resonance_c_equals_1);
            CHECK(e.component == 0);
        }
    }
}

TEST_CASE("failure reasons: lambda bound and inapplicable 2b") {
    VectorField f = field_of({"x1^2*x2^8", "0"}, 2);
    try {
        decompose(f, {2, Method::force_2a}); // needs lambda = 5
        FAIL("expected NoDecomposition");
    } catch (const NoDecomposition& e) {
        CHECK(e.reason == FailureReason::lambda_exceeded);
    }
    VectorField multi = field_of({"exp(x1)*x2^2*x3^2", "0", "0"}, 3);
    try {
        decompose(multi, {16, Method::force_2b});
        FAIL("expected NoDecomposition");
    } catch (const NoDecomposition& e) {
        CHECK(e.reason == FailureReason::multi_foreign_2b_inapplicable);
    }
}

TEST_CASE("linear field decomposition") {
    using Row = std::vector<Rational>;
    // identity: pure gradient
    Decomposition id2 = linear_field_decompose({Row{1, 0}, Row{0, 1}});
    CHECK(id2.G == parse_expression("1/2*x1^2 + 1/2*x2^2", 2));
    CHECK(id2.r.is_zero());
    CHECK(id2.g == field_of({"x1", "x2"}, 2));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(id2.R.at(i, j).is_zero());

    // pure rotation
    Decomposition rot = linear_field_decompose({Row{0, -1}, Row{1, 0}});
    CHECK(rot.G.is_zero());
    CHECK(rot.g.is_zero());
    CHECK(rot.R.at(0, 1) == parse_expression("-1/2*x1^2 - 1/2*x2^2", 2));
    CHECK(rot.r == field_of({"-x2", "x1"}, 2));

    // linear part of the Roessler system: matches the full decomposition's
    // quadratic potential entries
    Decomposition lin = linear_field_decompose(
        {Row{0, -1, -1}, Row{1, Rational(1, 5), 0}, Row{0, 0, 0}});
    CHECK(lin.F.at(0, 1) == parse_expression("-1/2*x2^2", 3));
    CHECK(lin.F.at(0, 2) == parse_expression("-1/2*x3^2", 3));
    CHECK(lin.F.at(1, 0) == parse_expression("1/2*x1^2", 3));
    CHECK(lin.F.at(1, 1) == parse_expression("1/10*x2^2", 3));
    CHECK(lin.g == field_of({"0", "1/5*x2", "0"}, 3));
    CHECK(lin.r == field_of({"-x2 - x3", "x1", "0"}, 3));
}

TEST_CASE("linear fast path agrees with the general driver") {
    std::mt19937 rng(99);
    for (int rep = 0; rep < 20; ++rep) {
        std::uniform_int_distribution<int> dims(2, 5);
        const int n = dims(rng);
        std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
        for (auto& row : m)
            for (auto& v : row) v = helm::testing::random_rational(rng);
        Decomposition direct = linear_field_decompose(m);
        Decomposition general = decompose(linear_vector_field(m));
        CHECK(direct.F == general.F);
        CHECK(direct.g == general.g);
        CHECK(direct.r == general.r);
        check_decomposition_exact(linear_vector_field(m), direct);
    }
}

TEST_CASE("rotation potential reproduces divergence-free fields") {
    // rotation parts of decompositions are divergence-free by construction
    std::mt19937 rng(2024);
    for (int rep = 0; rep < 25; ++rep) {
        std::uniform_int_distribution<int> dims(2, 4);
        VectorField f = helm::testing::random_field(rng, dims(rng), 3);
        Decomposition d = decompose(f);
        PotentialMatrix rp = rotation_potential(d.r);
        CHECK(row_divergence(rp) == d.r);
        for (int i = 0; i < f.n; ++i)
            for (int j = 0; j < f.n; ++j) CHECK(rp.at(i, j) == ExprSum(f.n) - rp.at(j, i));
    }
    CHECK_THROWS_AS(rotation_potential(field_of({"x1", "0"}, 2)), std::invalid_argument);
}

TEST_CASE("harmonic gauge") {
    VectorField f = field_of({"exp(x1) + exp(x2)", "exp(x2) - exp(x1)"}, 2);
    Decomposition d = decompose(f);

    // H = 0 leaves everything unchanged
    Decomposition same = apply_gauge(d, ExprSum(2));
    CHECK(same.F == d.F);
    CHECK(same.g == d.g);
    CHECK(same.r == d.r);

    // H = x1 x2
    Decomposition g1 = apply_gauge(d, parse_expression("x1*x2", 2));
    check_decomposition_exact(f, g1);
    CHECK(g1.G == d.G + parse_expression("x1*x2", 2));
    CHECK(g1.g.components[0] == d.g.components[0] + parse_expression("x2", 2));
    CHECK(g1.g.components[1] == d.g.components[1] + parse_expression("x1", 2));
    CHECK(g1.r.components[0] == d.r.components[0] - parse_expression("x2", 2));
    CHECK(g1.r.components[1] == d.r.components[1] - parse_expression("x1", 2));

    // H = x1^2 - x2^2
    Decomposition g2 = apply_gauge(d, parse_expression("x1^2 - x2^2", 2));
    check_decomposition_exact(f, g2);
    CHECK(divergence(g2.r).is_zero());
    CHECK(g2.r.components[0] == d.r.components[0] - parse_expression("2*x1", 2));
    CHECK(g2.r.components[1] == d.r.components[1] + parse_expression("2*x2", 2));

    // a 3-d harmonic with a coordinate-free defect path: H = x1 x2 x3
    VectorField lorenz = field_of({"10*x2 - 10*x1", "28*x1 - x1*x3 - x2", "x1*x2 - 8/3*x3"}, 3);
    Decomposition dl = decompose(lorenz);
    Decomposition g3 = apply_gauge(dl, parse_expression("x1*x2*x3", 3));
    check_decomposition_exact(lorenz, g3);

    // non-harmonic gauges are rejected symbolically
    CHECK_THROWS_AS(apply_gauge(d, parse_expression("x1^2", 2)), HarmonicCheckFailed);
}

TEST_CASE("per-term linearity over disjoint term sets") {
    std::mt19937 rng(31415);
    for (int rep = 0; rep < 10; ++rep) {
        const int n = 3;
        // disjoint by construction: f1 terms carry even x1 degrees, f2 odd
        VectorField f1(n), f2(n);
        std::uniform_int_distribution<int> deg(0, 2);
        for (int k = 0; k < n; ++k) {
            for (int t = 0; t < 2; ++t) {
                Monomial m1(n), m2(n);
                m1[k] = Atom{2 * static_cast<unsigned>(deg(rng)), 0, Trig::none, 0};
                m1[(k + 1) % n] = Atom{static_cast<unsigned>(deg(rng)), 0, Trig::none, 0};
                m2[k] = Atom{2 * static_cast<unsigned>(deg(rng)) + 1, 0, Trig::none, 0};
                m2[(k + 2) % n] = Atom{static_cast<unsigned>(deg(rng)), 0, Trig::none, 0};
                f1.components[k].add_term(m1, helm::testing::random_rational(rng));
                f2.components[k].add_term(m2, helm::testing::random_rational(rng));
            }
        }
        const Rational alpha(3, 2), beta(-2, 5);
        VectorField combined(n);
        for (int k = 0; k < n; ++k)
            combined.components[k] = f1.components[k] * alpha + f2.components[k] * beta;

        Decomposition d1 = decompose(f1);
        Decomposition d2 = decompose(f2);
        Decomposition dc = decompose(combined);
        check_decomposition_exact(combined, dc);
        for (int k = 0; k < n; ++k) {
            CHECK(dc.g.components[k] ==
                  d1.g.components[k] * alpha + d2.g.components[k] * beta);
            CHECK(dc.r.components[k] ==
                  d1.r.components[k] * alpha + d2.r.components[k] * beta);
        }
    }
}

TEST_CASE("method choice matters for lopsided polynomial degrees") {
    // x1 x2^100: integrating the foreign coordinate closes after one round,
    // integrating the own coordinate needs lambda = 51.
    VectorField f = field_of({"x1*x2^100", "0", "0"}, 3);
    const SeparableTerm t = term_of("x1*x2^100", 3);

    auto s2b = find_condition_2b(t, 0, 3, 16);
    REQUIRE(s2b.hit.has_value());
    CHECK(s2b.hit->lambda == 1);
    auto s2a_short = find_condition_2a(t, 0, 3, 16);
    CHECK(!s2a_short.hit.has_value());
    auto s2a = find_condition_2a(t, 0, 3, 60);
    REQUIRE(s2a.hit.has_value());
    CHECK(s2a.hit->lambda == 51);

    Decomposition fast = decompose(f);
    REQUIRE(fast.reports.size() == 1);
    CHECK(fast.reports[0].method == TermMethod::cor8);
    check_decomposition_exact(f, fast);

    // the expensive route still yields a valid decomposition
    Decomposition slow = decompose(f, {60, Method::force_2a});
    check_decomposition_exact(f, slow);

    // and the mirrored field closes with one harmonic round
    VectorField g = field_of({"x1^100*x2", "0", "0"}, 3);
    Decomposition dg = decompose(g);
    REQUIRE(dg.reports.size() == 1);
    CHECK(dg.reports[0].method == TermMethod::cor7);
    check_decomposition_exact(g, dg);
}

TEST_CASE("mixed exponential-trigonometric own factors decompose via 2a") {
    // e^{x1} sin(x1) is a single atom; its iterated antiderivatives leave the
    // one-atom span, so only the vanishing foreign Laplacian can close the
    // search: lambda = 2, C = 0 for a quadratic foreign factor.
    VectorField f = field_of({"exp(x1)*sin(x1)*x2^2", "0"}, 2);
    Decomposition d = decompose(f);
    check_decomposition_exact(f, d);
    REQUIRE(d.reports.size() == 1);
    CHECK(d.reports[0].method == TermMethod::cond_2a);
    CHECK(d.reports[0].lambda == 2);
    CHECK(d.reports[0].c_value == Rational(0));

    // and the same shape through 2b, closed by the own factor's derivatives
    VectorField g = field_of({"x1^3*exp(x2)*cos(x2)", "0"}, 2);
    Decomposition dg = decompose(g);
    check_decomposition_exact(g, dg);
    REQUIRE(dg.reports.size() == 1);
    CHECK(dg.reports[0].method == TermMethod::cond_2b);
    CHECK(dg.reports[0].lambda == 2);
    CHECK(dg.reports[0].c_value == Rational(0));
}

TEST_CASE("zero field decomposes to zero") {
    Decomposition d = decompose(VectorField(3));
    CHECK(d.G.is_zero());
    CHECK(d.g.is_zero());
    CHECK(d.r.is_zero());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            CHECK(d.F.at(i, j).is_zero());
            CHECK(d.R.at(i, j).is_zero());
        }
    CHECK(d.reports.empty());
}
