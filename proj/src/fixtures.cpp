#include "helm/fixtures.hpp"

#include "helm/render.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace helm {

namespace {

std::string read_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Resolves an expect key ("G", "F12", "R21", "g3", "r1") against a result.
const ExprSum* lookup_part(const Decomposition& d, const std::string& key) {
    const int n = d.F.n;
    auto index = [n](char c) { return c >= '1' && c <= '0' + n ? c - '1' : -1; };
    if (key == "G") return &d.G;
    if (key.size() == 3 && (key[0] == 'F' || key[0] == 'R')) {
        const int i = index(key[1]), j = index(key[2]);
        if (i < 0 || j < 0) return nullptr;
        return key[0] == 'F' ? &d.F.at(i, j) : &d.R.at(i, j);
    }
    if (key.size() == 2 && (key[0] == 'g' || key[0] == 'r')) {
        const int i = index(key[1]);
        if (i < 0) return nullptr;
        return key[0] == 'g' ? &d.g.components[i] : &d.r.components[i];
    }
    return nullptr;
}

} // namespace

Fixture load_fixture(const std::filesystem::path& file) {
    Fixture fx;
    fx.name = file.stem().string();
    fx.doc = parse_field_document(read_file(file));
    return fx;
}

std::vector<Fixture> load_fixture_dir(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.path().extension() == ".field") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<Fixture> out;
    for (const auto& f : files) out.push_back(load_fixture(f));
    return out;
}

FixtureReport run_fixture(const Fixture& fx) {
    FixtureReport report;
    report.name = fx.name;
    report.passed = true;

    std::optional<Decomposition> d;
    try {
        d = decompose(fx.doc.field(), fx.doc.options());
    } catch (const NoDecomposition& e) {
        if (fx.doc.expect_error && *fx.doc.expect_error == to_string(e.reason)) {
            report.checks.push_back({"error", true, *fx.doc.expect_error, to_string(e.reason)});
            return report;
        }
        report.passed = false;
        report.note = e.what();
        return report;
    }
    if (fx.doc.expect_error) {
        report.passed = false;
        report.note = "expected failure " + *fx.doc.expect_error + " but decomposition succeeded";
        return report;
    }

    for (const auto& [key, expected] : fx.doc.expects) {
        const ExprSum* actual = lookup_part(*d, key);
        FixtureCheck check;
        check.part = key;
        if (!actual) {
            check.passed = false;
            check.actual = "unknown part '" + key + "'";
        } else {
            check.passed = *actual == expected;
            check.expected = render(expected);
            check.actual = render(*actual);
        }
        report.passed = report.passed && check.passed;
        report.checks.push_back(std::move(check));
    }
    return report;
}

OracleSample oracle_from_F(const PotentialMatrix& f, std::span<const double> x, double h) {
    const int n = f.n;
    OracleSample out;
    out.g.assign(n, 0.0);
    out.r.assign(n, 0.0);
    std::vector<double> y(x.begin(), x.end());
    auto entry_partial = [&](int i, int j, int dir) {
        y[dir] = x[dir] + h;
        const double plus = f.at(i, j).eval(y);
        y[dir] = x[dir] - h;
        const double minus = f.at(i, j).eval(y);
        y[dir] = x[dir];
        return (plus - minus) / (2.0 * h);
    };
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            out.g[i] += entry_partial(k, k, i);
            out.r[i] += entry_partial(i, k, k) - entry_partial(k, i, k);
        }
    }
    return out;
}

} // namespace helm
