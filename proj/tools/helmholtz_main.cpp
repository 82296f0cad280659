#include "helm/fixtures.hpp"
#include "helm/numeric.hpp"
#include "helm/parse.hpp"
#include "helm/render.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

helm::EmitFormat parse_format(const std::string& f) {
    if (f == "text") return helm::EmitFormat::text;
    if (f == "latex") return helm::EmitFormat::latex;
    if (f == "json") return helm::EmitFormat::json;
    if (f == "csv") return helm::EmitFormat::csv_grid;
    throw CLI::ValidationError("--format", "must be text, latex, json or csv");
}

helm::GridSpec parse_grid(const std::string& box, const std::string& step) {
    auto colon = box.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("--grid", "box must look like LO:HI");
    helm::GridSpec g;
    g.lo = std::stod(box.substr(0, colon));
    g.hi = std::stod(box.substr(colon + 1));
    g.step = std::stod(step);
    if (g.step <= 0 || g.hi < g.lo) throw CLI::ValidationError("--grid", "bad grid range");
    return g;
}

std::vector<std::vector<double>> read_points(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<double>> points;
    std::string line;
    while (std::getline(in, line)) {
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream ss(line);
        std::vector<double> p;
        double v;
        while (ss >> v) p.push_back(v);
        if (p.empty()) continue;
        if (static_cast<int>(p.size()) != n)
            throw std::runtime_error("point with " + std::to_string(p.size()) +
                                     " coordinates, expected " + std::to_string(n));
        points.push_back(std::move(p));
    }
    return points;
}

int run_decompose(const std::string& file, int lambda_max, const std::string& method,
                  const std::string& gauge, const std::string& format,
                  const std::vector<std::string>& grid_args) {
    helm::FieldDocument doc = helm::parse_field_document(read_file(file));
    helm::DecomposeOptions opts = doc.options();
    if (lambda_max > 0) opts.lambda_max = lambda_max;
    if (method == "2a") opts.method = helm::Method::force_2a;
    else if (method == "2b") opts.method = helm::Method::force_2b;
    else if (method == "auto") opts.method = helm::Method::auto_select;

    std::optional<helm::GridSpec> grid;
    if (!grid_args.empty()) grid = parse_grid(grid_args[0], grid_args[1]);
    if (format == "csv" && !grid) {
        std::cerr << "error: --format csv needs --grid LO:HI STEP\n";
        return 1;
    }

    helm::Decomposition d = helm::decompose(doc.field(), opts);
    if (!gauge.empty())
        d = helm::apply_gauge(d, helm::parse_expression(gauge, doc.n, doc.params));
    std::cout << helm::emit(d, parse_format(format), grid);
    return 0;
}

int run_theorem2(const std::string& file, double radius, double step,
                 const std::string& points_file, double stencil, bool serial) {
    helm::FieldDocument doc = helm::parse_field_document(read_file(file));
    helm::QuadratureSpec spec;
    spec.truncation_radius = radius;
    spec.grid_step = step;
    spec.n = doc.n;
    spec.stencil_h = stencil;
    auto sampler = helm::FieldSampler::from_field(doc.field());
    auto points = read_points(points_file, doc.n);
    auto result = serial ? helm::theorem2_decompose_reference(sampler, points, spec)
                         : helm::theorem2_decompose(sampler, points, spec);

    const int n = doc.n;
    for (int i = 0; i < n; ++i) std::printf("%sx%d", i ? "," : "", i + 1);
    for (int i = 0; i < n; ++i) std::printf(",g%d", i + 1);
    for (int i = 0; i < n; ++i) std::printf(",r%d", i + 1);
    std::printf("\n");
    for (std::size_t p = 0; p < points.size(); ++p) {
        for (int i = 0; i < n; ++i) std::printf("%s%.12g", i ? "," : "", points[p][i]);
        for (int i = 0; i < n; ++i) std::printf(",%.12g", result.g[p][i]);
        for (int i = 0; i < n; ++i) std::printf(",%.12g", result.r[p][i]);
        std::printf("\n");
    }
    return 0;
}

int run_fixtures(const std::string& dir, const std::vector<std::string>& names) {
    auto fixtures = helm::load_fixture_dir(dir);
    if (!names.empty()) {
        std::erase_if(fixtures, [&](const helm::Fixture& fx) {
            return std::find(names.begin(), names.end(), fx.name) == names.end();
        });
        if (fixtures.empty()) {
            std::cerr << "no matching fixtures\n";
            return 1;
        }
    }
    bool all_passed = true;
    for (const auto& fx : fixtures) {
        helm::FixtureReport report = helm::run_fixture(fx);
        std::printf("%s %s\n", report.passed ? "PASS" : "FAIL", report.name.c_str());
        if (!report.note.empty()) std::printf("     %s\n", report.note.c_str());
        for (const auto& check : report.checks) {
            if (check.passed) continue;
            std::printf("     %s:\n       expected %s\n       actual   %s\n", check.part.c_str(),
                        check.expected.c_str(), check.actual.c_str());
        }
        all_passed = all_passed && report.passed;
    }
    return all_passed ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symbolic Helmholtz decomposition via potential matrices"};
    app.require_subcommand(1);

    std::string file, method = "auto", gauge, format = "text";
    std::vector<std::string> grid_args;
    int lambda_max = 0;
    auto* dec = app.add_subcommand("decompose", "decompose a symbolic field file");
    dec->add_option("file", file, "field file")->required();
    dec->add_option("--lambda-max", lambda_max, "search bound for lambda (default 16)");
    dec->add_option("--method", method, "auto, 2a or 2b")
        ->check(CLI::IsMember({"auto", "2a", "2b"}));
    dec->add_option("--gauge", gauge, "harmonic gauge expression added to G");
    dec->add_option("--format", format, "text, latex, json or csv")
        ->check(CLI::IsMember({"text", "latex", "json", "csv"}));
    dec->add_option("--grid", grid_args, "sampling box LO:HI and step (csv format)")->expected(2);

    std::string t2_file, t2_points;
    double t2_radius = 6.0, t2_step = 0.05, t2_stencil = 0.0;
    bool t2_serial = false;
    auto* t2 = app.add_subcommand("theorem2", "numeric convolution decomposition for decaying fields");
    t2->add_option("file", t2_file, "field file")->required();
    t2->add_option("--radius", t2_radius, "truncation radius")->required();
    t2->add_option("--step", t2_step, "grid step")->required();
    t2->add_option("--points", t2_points, "file with one eval point per line")->required();
    t2->add_option("--stencil", t2_stencil, "derivative stencil width (default step/2)");
    t2->add_flag("--serial", t2_serial, "use the serial reference implementation");

    std::string fx_dir = "fixtures";
    std::vector<std::string> fx_names;
    auto* fx = app.add_subcommand("fixtures", "golden fixture suite");
    auto* fx_run = fx->add_subcommand("run", "run fixtures and report pass/fail");
    fx_run->add_option("names", fx_names, "fixture names (default: all)");
    fx_run->add_option("--dir", fx_dir, "fixture directory");
    fx->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (dec->parsed())
            return run_decompose(file, lambda_max, dec->count("--method") ? method : "", gauge,
                                 format, grid_args);
        if (t2->parsed())
            return run_theorem2(t2_file, t2_radius, t2_step, t2_points, t2_stencil, t2_serial);
        if (fx->parsed()) return run_fixtures(fx_dir, fx_names);
    } catch (const helm::NoDecomposition& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (e.reason == helm::FailureReason::resonance_c_equals_1)
            std::cerr << "the term hits the resonance C = 1 excluded by the method; "
                         "both search directions only reproduce the term itself\n";
        return 1;
    } catch (const helm::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
