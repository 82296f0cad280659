#include "helm/render.hpp"

#include "helm/parse.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>

namespace helm {

namespace {

std::string coord_name(int j) { return "x" + std::to_string(j + 1); }

// Scale prefix inside a function call: "", "-", or "c*".
std::string call_scale(const Rational& r) {
    if (r == 1) return "";
    if (r == -1) return "-";
    return to_string(r) + "*";
}

void atom_pieces(const Atom& a, int j, std::vector<std::string>& pieces) {
    if (a.degree == 1)
        pieces.push_back(coord_name(j));
    else if (a.degree > 1)
        pieces.push_back(coord_name(j) + "^" + std::to_string(a.degree));
    if (a.rate != 0) pieces.push_back("exp(" + call_scale(a.rate) + coord_name(j) + ")");
    if (a.trig != Trig::none)
        pieces.push_back(std::string(a.trig == Trig::sin ? "sin" : "cos") + "(" +
                         call_scale(a.freq) + coord_name(j) + ")");
}

std::string term_body(const Rational& coef_abs, const Monomial& mono) {
    std::vector<std::string> pieces;
    for (std::size_t j = 0; j < mono.size(); ++j) atom_pieces(mono[j], static_cast<int>(j), pieces);
    if (pieces.empty() || coef_abs != 1) pieces.insert(pieces.begin(), to_string(coef_abs));
    std::string out = pieces.front();
    for (std::size_t i = 1; i < pieces.size(); ++i) out += "*" + pieces[i];
    return out;
}

std::string latex_rational(const Rational& r) {
    std::string sign = r < 0 ? "-" : "";
    Rational a = r < 0 ? Rational(-r) : r;
    if (denominator(a) == 1) return sign + numerator(a).str();
    return sign + "\\frac{" + numerator(a).str() + "}{" + denominator(a).str() + "}";
}

std::string latex_scale(const Rational& r) {
    if (r == 1) return "";
    if (r == -1) return "-";
    return latex_rational(r) + " ";
}

std::string latex_term_body(const Rational& coef_abs, const Monomial& mono) {
    std::vector<std::string> pieces;
    for (std::size_t j = 0; j < mono.size(); ++j) {
        const Atom& a = mono[j];
        std::string x = "x_{" + std::to_string(j + 1) + "}";
        if (a.degree == 1)
            pieces.push_back(x);
        else if (a.degree > 1)
            pieces.push_back(x + "^{" + std::to_string(a.degree) + "}");
        if (a.rate != 0) pieces.push_back("e^{" + latex_scale(a.rate) + x + "}");
        if (a.trig != Trig::none)
            pieces.push_back(std::string(a.trig == Trig::sin ? "\\sin" : "\\cos") + "(" +
                             latex_scale(a.freq) + x + ")");
    }
    if (pieces.empty() || coef_abs != 1) pieces.insert(pieces.begin(), latex_rational(coef_abs));
    std::string out = pieces.front();
    for (std::size_t i = 1; i < pieces.size(); ++i) out += " " + pieces[i];
    return out;
}

template <class Body>
std::string join_terms(const ExprSum& e, Body&& body) {
    if (e.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [mono, coef] : e.terms()) {
        const bool neg = coef < 0;
        const Rational abs_coef = neg ? Rational(-coef) : coef;
        if (first)
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        out += body(abs_coef, mono);
        first = false;
    }
    return out;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v); // canonicalize -0
    return buf;
}

std::string render_vector(const VectorField& v) {
    std::string out = "[";
    for (int i = 0; i < v.n; ++i) {
        if (i) out += ", ";
        out += render(v.components[i]);
    }
    return out + "]";
}

std::string render_matrix(const PotentialMatrix& m, const std::string& indent) {
    std::string out = "[\n";
    for (int i = 0; i < m.n; ++i) {
        out += indent + "  [";
        for (int j = 0; j < m.n; ++j) {
            if (j) out += ", ";
            out += render(m.at(i, j));
        }
        out += i + 1 < m.n ? "],\n" : "]\n";
    }
    return out + indent + "]";
}

std::string latex_matrix(const PotentialMatrix& m) {
    std::string out = "\\begin{pmatrix}\n";
    for (int i = 0; i < m.n; ++i) {
        out += "  ";
        for (int j = 0; j < m.n; ++j) {
            if (j) out += " & ";
            out += render_latex(m.at(i, j));
        }
        if (i + 1 < m.n) out += " \\\\";
        out += "\n";
    }
    return out + "\\end{pmatrix}";
}

std::string latex_vector(const VectorField& v) {
    std::string out = "\\left[ ";
    for (int i = 0; i < v.n; ++i) {
        if (i) out += ",\\; ";
        out += render_latex(v.components[i]);
    }
    return out + " \\right]";
}

std::string emit_text(const Decomposition& d) {
    std::string out;
    out += "n = " + std::to_string(d.F.n) + "\n";
    out += "G = " + render(d.G) + "\n";
    out += "g = " + render_vector(d.g) + "\n";
    out += "r = " + render_vector(d.r) + "\n";
    out += "F = " + render_matrix(d.F, "") + "\n";
    out += "R = " + render_matrix(d.R, "") + "\n";
    if (!d.reports.empty()) {
        out += "terms:\n";
        for (const auto& rep : d.reports)
            out += "  f" + std::to_string(rep.component + 1) + ": " +
                   render(rep.term, d.F.n) + "  [" + to_string(rep.method) +
                   ", lambda=" + std::to_string(rep.lambda) + ", C=" + to_string(rep.c_value) +
                   "]\n";
    }
    return out;
}

std::string emit_latex(const Decomposition& d) {
    std::string out;
    out += "F(x) = " + latex_matrix(d.F) + "\n\n";
    out += "G(x) = " + render_latex(d.G) + "\n\n";
    out += "R(x) = " + latex_matrix(d.R) + "\n\n";
    out += "g(x) = " + latex_vector(d.g) + "\n\n";
    out += "r(x) = " + latex_vector(d.r) + "\n";
    return out;
}

std::string emit_json(const Decomposition& d) {
    nlohmann::json j;
    j["schema"] = 1;
    j["n"] = d.F.n;
    const int n = d.F.n;
    auto matrix = [n](const PotentialMatrix& m) {
        std::vector<std::vector<std::string>> rows(n);
        for (int i = 0; i < n; ++i)
            for (int jj = 0; jj < n; ++jj) rows[i].push_back(render(m.at(i, jj)));
        return rows;
    };
    auto vector = [n](const VectorField& v) {
        std::vector<std::string> out;
        for (int i = 0; i < n; ++i) out.push_back(render(v.components[i]));
        return out;
    };
    j["F"] = matrix(d.F);
    j["R"] = matrix(d.R);
    j["G"] = render(d.G);
    j["g"] = vector(d.g);
    j["r"] = vector(d.r);
    auto reports = nlohmann::json::array();
    for (const auto& rep : d.reports) {
        reports.push_back({{"component", rep.component + 1},
                           {"term", render(rep.term, n)},
                           {"method", to_string(rep.method)},
                           {"lambda", rep.lambda},
                           {"c", to_string(rep.c_value)}});
    }
    j["reports"] = reports;
    return j.dump(2) + "\n";
}

std::string emit_csv(const Decomposition& d, const GridSpec& grid) {
    const int n = d.F.n;
    VectorField f(n);
    for (int i = 0; i < n; ++i) f.components[i] = d.g.components[i] + d.r.components[i];

    std::string out;
    for (int i = 0; i < n; ++i) out += (i ? "," : "") + coord_name(i);
    for (int i = 0; i < n; ++i) out += ",f" + std::to_string(i + 1);
    for (int i = 0; i < n; ++i) out += ",g" + std::to_string(i + 1);
    for (int i = 0; i < n; ++i) out += ",r" + std::to_string(i + 1);
    out += ",G\n";

    const int count = static_cast<int>(std::floor((grid.hi - grid.lo) / grid.step + 1e-9)) + 1;
    std::vector<double> x(n, grid.lo);
    std::vector<int> idx(n, 0);
    for (;;) {
        for (int i = 0; i < n; ++i) x[i] = grid.lo + idx[i] * grid.step;
        for (int i = 0; i < n; ++i) out += (i ? "," : "") + fmt_double(x[i]);
        for (int i = 0; i < n; ++i) out += "," + fmt_double(f.components[i].eval(x));
        for (int i = 0; i < n; ++i) out += "," + fmt_double(d.g.components[i].eval(x));
        for (int i = 0; i < n; ++i) out += "," + fmt_double(d.r.components[i].eval(x));
        out += "," + fmt_double(d.G.eval(x)) + "\n";
        int axis = n - 1;
        while (axis >= 0 && ++idx[axis] == count) idx[axis--] = 0;
        if (axis < 0) break;
    }
    return out;
}

} // namespace

std::string render(const ExprSum& e) { return join_terms(e, term_body); }

std::string render(const SeparableTerm& t, int n) {
    ExprSum e(n);
    e.add_term(t.atoms, t.coef);
    return render(e);
}

std::string render_latex(const ExprSum& e) { return join_terms(e, latex_term_body); }

std::string emit(const Decomposition& d, EmitFormat format, const std::optional<GridSpec>& grid) {
    switch (format) {
    case EmitFormat::text: return emit_text(d);
    case EmitFormat::latex: return emit_latex(d);
    case EmitFormat::json: return emit_json(d);
    case EmitFormat::csv_grid:
        if (!grid) throw std::invalid_argument("csv-grid output needs a grid specification");
        return emit_csv(d, *grid);
    }
    throw std::invalid_argument("unknown emit format");
}

Decomposition decomposition_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (!j.contains("schema") || j["schema"].get<int>() != 1)
        throw std::invalid_argument("unsupported schema");
    const int n = j["n"].get<int>();
    Decomposition d;
    d.F = PotentialMatrix(n);
    d.R = PotentialMatrix(n);
    d.g = VectorField(n);
    d.r = VectorField(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            d.F.at(i, k) = parse_expression(j["F"][i][k].get<std::string>(), n);
            d.R.at(i, k) = parse_expression(j["R"][i][k].get<std::string>(), n);
        }
    d.G = parse_expression(j["G"].get<std::string>(), n);
    for (int i = 0; i < n; ++i) {
        d.g.components[i] = parse_expression(j["g"][i].get<std::string>(), n);
        d.r.components[i] = parse_expression(j["r"][i].get<std::string>(), n);
    }
    for (const auto& rep : j["reports"]) {
        TermReport t;
        t.component = rep["component"].get<int>() - 1;
        ExprSum e = parse_expression(rep["term"].get<std::string>(), n);
        if (e.term_count() != 1) throw std::invalid_argument("report term is not a single term");
        t.term = SeparableTerm{e.terms().begin()->second, e.terms().begin()->first};
        const std::string m = rep["method"].get<std::string>();
        if (m == "Cor5") t.method = TermMethod::cor5;
        else if (m == "Cor6") t.method = TermMethod::cor6;
        else if (m == "Cor7") t.method = TermMethod::cor7;
        else if (m == "Cor8") t.method = TermMethod::cor8;
        else if (m == "Cond2a") t.method = TermMethod::cond_2a;
        else if (m == "Cond2b") t.method = TermMethod::cond_2b;
        else throw std::invalid_argument("unknown method " + m);
        t.lambda = rep["lambda"].get<int>();
        auto c = parse_rational(rep["c"].get<std::string>());
        if (!c) throw std::invalid_argument("bad rational " + rep["c"].get<std::string>());
        t.c_value = *c;
        d.reports.push_back(std::move(t));
    }
    return d;
}

} // namespace helm
