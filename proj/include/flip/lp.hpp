#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flip/config.hpp"
#include "flip/params.hpp"
#include "flip/rational.hpp"

namespace flip {

// Expected local distance change attributed to one color's configuration, as a
// function of the flip parameters. Exact.
Rational H_value(const Configuration& cfg, const FlipParams& p);

// Pairing-free upper bound on H: (A-2)p_A + (B-2)p_B + sum_i of the unpaired branch
// cost a_i p_{a_i} + b_i p_{b_i} - min(p_{a_i}, p_{b_i}).
Rational H_crude_bound(const Configuration& cfg, const FlipParams& p);

// All configuration templates of size m < m_star with branch entries in [0, n_max]:
// the main two-sided family (joint all-zero excluded) and the one-sided family for
// c = sigma(v) with sorted entries.
std::vector<Configuration> enumerate_realizable(int m_star, int n_max);

struct LinearConstraint {
    std::vector<std::pair<int, Rational>> terms;  // variable index -> coefficient
    Rational rhs;                                 // terms . vars <= rhs
    std::string tag;
};

struct LPInstance {
    std::vector<std::string> var_names;
    std::vector<LinearConstraint> constraints;
    int objective_var = -1;  // minimized
    std::string name;

    int var(const std::string& name) const;
    std::string export_text() const;
};

enum class LPKind {
    lp1_restricted,  // truncated realizable family, a relaxation of the full program
    lp2,             // adds the one-sided family and the x/y closure for m >= m_star
    lp3,             // two-constraint certificate with exact rational optimum 11/6
    lp4,             // p_3 pinned family with exact rational optimum 161/88
    lp5_mixed        // lp2 with per-class lambdas linked through a mixing weight
};

LPInstance build_lp(LPKind kind, int m_star = 3, int n_max = 6,
                    std::optional<double> gamma = std::nullopt);

struct SolveResult {
    std::string status;  // "optimal", "infeasible", "unbounded"
    double objective = 0.0;
    std::map<std::string, double> assignment;
    double duality_gap = 0.0;
};

struct ExactSolveResult {
    std::string status;
    Rational objective;
    std::map<std::string, Rational> assignment;
};

// Dense simplex over doubles with a dual certificate check.
SolveResult solve_lp(const LPInstance& lp);

// Same pivoting over exact rationals with Bland's rule.
ExactSolveResult solve_lp_exact(const LPInstance& lp);

struct ConstraintSlack {
    std::string tag;
    Rational slack;  // rhs - lhs, negative means violated
};

// Evaluates every constraint at the given assignment; missing variables default to 0.
std::vector<ConstraintSlack> check_feasible(const LPInstance& lp,
                                            const std::map<std::string, Rational>& assignment);

bool is_feasible(const LPInstance& lp, const std::map<std::string, Rational>& assignment,
                 const Rational& tol = Rational(0));

// Tags of constraints with |slack| <= tol at the assignment.
std::vector<std::string> tight_constraints(const LPInstance& lp,
                                           const std::map<std::string, Rational>& assignment,
                                           const Rational& tol = Rational(0));

struct DppReport {
    bool feasible = false;
    std::vector<std::string> violations;    // serialized templates with H > -1 + lambda m
    std::vector<std::string> equality_set;  // m = 2 templates meeting the bound exactly
};

// Exhaustively certifies that the stated parameters satisfy every truncated-family
// constraint at lambda = 161/88 except the four canonical shapes, including the
// closure arguments for m >= 3, and reports the exact m = 2 equality set.
DppReport verify_dpp_feasibility(const FlipParams& p);

// The Hamming-metric optimum as an exact rational certificate.
Rational lp3_exact_optimum();
// The pinned-family optimum as an exact rational certificate.
Rational lp4_exact_optimum();

std::map<std::string, Rational> eq11_assignment();  // flip parameters plus lambda, x, y
std::map<std::string, Rational> obs51_assignment();
std::map<std::string, Rational> eq12_assignment(double gamma);

}  // namespace flip
