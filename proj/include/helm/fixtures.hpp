#pragma once

#include "helm/numeric.hpp"
#include "helm/parse.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace helm {

// A golden-comparison case: a field plus any subset of expected decomposition
// parts (F11, G, R12, g1, r1, ... in canonical form), or an expected failure.
struct Fixture {
    std::string name;
    FieldDocument doc;
};

struct FixtureCheck {
    std::string part;
    bool passed = false;
    std::string expected;
    std::string actual;
};

struct FixtureReport {
    std::string name;
    bool passed = false;
    std::vector<FixtureCheck> checks;
    std::string note; // failure reason text when decomposition itself failed
};

Fixture load_fixture(const std::filesystem::path& file);
// All *.field files in a directory, sorted by name.
std::vector<Fixture> load_fixture_dir(const std::filesystem::path& dir);

FixtureReport run_fixture(const Fixture& fx);

// Independent numeric oracle: evaluates the potential matrix entries and
// recovers g and r purely by finite differences of the evaluated entries,
// bypassing the symbolic derivative path entirely.
struct OracleSample {
    std::vector<double> g;
    std::vector<double> r;
};
OracleSample oracle_from_F(const PotentialMatrix& f, std::span<const double> x, double h = 1e-4);

} // namespace helm
