#pragma once

#include "helm/field.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace helm {

enum class Method { auto_select, force_2a, force_2b };

enum class TermMethod { cor5, cor6, cor7, cor8, cond_2a, cond_2b };

enum class FailureReason { lambda_exceeded, resonance_c_equals_1, multi_foreign_2b_inapplicable };

const char* to_string(TermMethod m);
const char* to_string(FailureReason r);

struct DecomposeOptions {
    int lambda_max = 16;
    Method method = Method::auto_select;
};

// Per-term provenance: which construction fired and with which lambda_k, C_k.
// Fast paths always record lambda = 1, C = 0.
struct TermReport {
    int component = 0; // 0-based
    SeparableTerm term;
    TermMethod method = TermMethod::cor5;
    int lambda = 1;
    Rational c_value = 0;
};

struct Decomposition {
    PotentialMatrix F;
    ExprSum G;
    PotentialMatrix R;
    VectorField g;
    VectorField r;
    std::vector<TermReport> reports;
};

class NoDecomposition : public std::runtime_error {
public:
    NoDecomposition(int component, std::string term_text, FailureReason reason);
    int component;         // 0-based
    std::string term_text; // rendered offending term
    FailureReason reason;
};

class HarmonicCheckFailed : public std::runtime_error {
public:
    explicit HarmonicCheckFailed(std::string what) : std::runtime_error(std::move(what)) {}
};

struct ConditionHit {
    int lambda = 0;
    Rational c = 0;
    int m = -1; // foreign coordinate, condition 2b only
};

struct ConditionSearch {
    std::optional<ConditionHit> hit;
    bool applicable = true;     // 2b requires exactly one nonconstant foreign factor
    bool resonance_seen = false; // some lambda produced C == 1
};

// Smallest lambda in [1..lambda_max] with
//   (-1)^lambda (A^{2 lambda} u_k)(Laplacian^lambda v_k) = C u_k v_k,  C != 1.
ConditionSearch find_condition_2a(const SeparableTerm& t, int k, int n, int lambda_max);
// Smallest lambda with (-1)^lambda (d^{2 lambda} u_k)(A^{2 lambda} v_k) = C u_k v_k,
// C != 1; requires the foreign part to live in a single coordinate m.
ConditionSearch find_condition_2b(const SeparableTerm& t, int k, int n, int lambda_max);

// Potential matrix of one separable term under condition 2a: row k holds
//   F_kj = sum_{p=0}^{lambda-1} (-1)^p/(1-C) d/dx_j (A^{2p+2} u)(Lap^p v),
// every other entry is zero.
PotentialMatrix potential_from_2a(const SeparableTerm& t, int k, int n, int lambda,
                                  const Rational& c);
// Potential matrix under condition 2b. Entries (k,m) and (m,m) are populated
// so that the diagonal entry is the gradient potential and the off-diagonal
// entry is the rotation potential, matching the two-sided construction the
// condition is derived from:
//   F_km = sum_p (-1)^p/(1-C) (d^{2p}   u)(A^{2p+1} v),
//   F_mm = sum_p (-1)^p/(1-C) (d^{2p+1} u)(A^{2p+2} v).
PotentialMatrix potential_from_2b(const SeparableTerm& t, int k, int n, int lambda,
                                  const Rational& c, int m);

// Full per-term driver: fast paths in order (own-coordinate only;
// single foreign coordinate only; harmonic foreign part; linear own factor
// with single foreign coordinate), then the general 2a/2b search picking the
// smaller lambda with ties going to 2a. Throws NoDecomposition.
Decomposition decompose(const VectorField& f, const DecomposeOptions& opts = {});

// Closed form for linear fields f(x) = Mx: g = diag(M) x and r = offdiag(M) x, with
// F_kk = M_kk x_k^2/2 and F_ij = M_ij x_j^2/2 for i != j.
Decomposition linear_field_decompose(const std::vector<std::vector<Rational>>& m);

// The field f(x) = Mx as a symbolic vector field.
VectorField linear_vector_field(const std::vector<std::vector<Rational>>& m);

// Antisymmetric matrix R with sum_k d/dx_k R_ik = w_i for a symbolically
// divergence-free field w. Used to keep gauged decompositions consistent.
PotentialMatrix rotation_potential(const VectorField& w);

// Gauge freedom: G' = G + H, g' = grad(G + H), r' = r - grad H for harmonic H.
// F and R are adjusted so all Decomposition invariants keep holding.
Decomposition apply_gauge(const Decomposition& d, const ExprSum& h);

} // namespace helm
