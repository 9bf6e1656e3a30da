#pragma once

// Problem files: the JSON description of (H, R, domain, sampling, tolerances)
// plus an optional coordinate change, and its compiled runtime form.
//
// A problem with a "transform" block is evaluated in the new coordinates:
// the Hamiltonian becomes K = H - p_l dq^l/dt composed with the inverse map,
// the tensor becomes its pushforward, and sample points are drawn in the
// original coordinates and carried across by the lifted phase map.  The
// original sources stay in the file untouched so the change is auditable.

#include <hjsep/dynamics.hpp>
#include <hjsep/sampling.hpp>
#include <hjsep/transform.hpp>

#include <json.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hjsep {

struct ProblemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Tolerances {
    double pass = 1e-8;      // residual threshold for gating checks
    double rank = 1e-9;      // singular-value cutoff for rank decisions
    double distinct = 1e-7;  // eigenvalue separation threshold
};

struct TransformSpec {
    std::vector<std::string> forward;  // Q^i(t, q1..qn)
    std::vector<std::string> inverse;  // q^i(t, Q1..Qn)
    std::optional<std::string> reference_hamiltonian;  // expected K over (t, q1..qn, p1..pn)
};

struct ProblemSpec {
    int n = 0;
    std::map<std::string, double> parameters;
    std::string hamiltonian;
    std::vector<std::vector<std::string>> tensor_qq;
    std::vector<std::string> tensor_q0;
    SampleDomain domain;
    int samples = 100;
    uint64_t seed = 42;
    Tolerances tol;
    std::optional<TransformSpec> transform;

    static ProblemSpec from_json(const nlohmann::json& j);
    static ProblemSpec load(const std::string& path);
    nlohmann::ordered_json to_json() const;
    void save(const std::string& path) const;
};

// Reads a standalone transform file ({"forward": [...], "inverse": [...],
// "reference_hamiltonian": "..."}).
TransformSpec transform_from_json(const nlohmann::json& j);
TransformSpec load_transform(const std::string& path);
nlohmann::ordered_json transform_to_json(const TransformSpec& ts);

struct CompiledProblem {
    int n = 0;
    std::unique_ptr<HamiltonianField> hamiltonian;
    std::unique_ptr<TensorField> tensor;
    std::optional<PointTransform> transform;
    std::optional<ExprHamiltonian> reference;  // parsed reference K, if provided
    SampleDomain domain;
    int samples = 0;
    uint64_t seed = 0;
    Tolerances tol;

    // Sample `index` in evaluation coordinates: drawn from the declared
    // domain and, when a transform is present, pushed through the lifted
    // phase map.
    PointDual draw(int index) const;
};

// Validates and parses every expression; throws ProblemError with the
// offending field in the message.
CompiledProblem compile(const ProblemSpec& spec);

}  // namespace hjsep
