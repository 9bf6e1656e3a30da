#pragma once

// Check pipelines over seeded sample sets.
//
// run_check executes, in order: tensor structure, spectral verdict, torsion,
// distribution rank, Lagrangian residual, relatedness, integrability on both
// phase bundles, then two non-gating diagnostics (separation residuals in
// the given coordinates, transversality).  Points where the spectral verdict
// fails or a distribution is rank-deficient are skipped by the checks that
// assume those hypotheses; a check fails outright if more than 10% of its
// points are skipped.
//
// run_transform verifies a coordinate change against a base problem
// (round trip, Jacobian consistency, canonicity of the lifted map, optional
// reference Hamiltonian) and reports the pushforward tensor's diagonality
// plus a coarse eigenvalue-dependence heuristic.  It returns the problem
// respecified in the new coordinates: the original sources plus the
// transform block, which downstream checks evaluate compositionally.

#include <hjsep/problem.hpp>
#include <hjsep/report.hpp>

namespace hjsep {

struct CheckOptions {
    bool fast = false;  // skip the cotangent-bundle integrability test
};

// Digest over the problem's canonical serialization and the effective
// options, so reports identify their exact input.
std::string problem_digest(const ProblemSpec& spec, const CheckOptions& opts = {});
std::string transform_digest(const ProblemSpec& spec, const TransformSpec& ts);

DiagnosticsReport run_check(const CompiledProblem& prob, const CheckOptions& opts = {});

struct TransformRunResult {
    DiagnosticsReport report;
    ProblemSpec transformed;
};

TransformRunResult run_transform(const ProblemSpec& base, const TransformSpec& ts);

// Fraction of points a check may skip before it fails.
inline constexpr double kMaxSkipFraction = 0.10;

}  // namespace hjsep
