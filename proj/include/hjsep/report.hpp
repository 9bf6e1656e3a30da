#pragma once

// Machine-readable diagnostics report.  Serialization is deterministic:
// keys keep insertion order, doubles use shortest-round-trip formatting,
// and the only non-reproducible field ("generated_at") is excluded from
// the input digest so two runs over the same input compare byte-identical
// once that field is stripped.

#include <hjsep/geometry.hpp>

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hjsep {

inline constexpr const char* kToolVersion = "1.0.0";

// FNV-1a over the bytes of `data`, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

// Current UTC time, ISO 8601 (second resolution).
std::string iso_timestamp();

struct CheckRecord {
    std::string name;
    bool gating = true;
    int evaluated = 0;
    int skipped = 0;
    double max_residual = 0.0;
    int argmax_index = -1;          // sample index of the worst residual, -1 if none
    std::optional<PointDual> argmax_point;
    double threshold = 0.0;
    bool passed = true;
    std::string note;               // free-form detail, may be empty
};

struct DiagnosticsReport {
    std::string tool_version = kToolVersion;
    std::string input_digest;
    std::string command;
    std::vector<CheckRecord> checks;
    bool overall_pass = true;

    nlohmann::ordered_json to_json() const;
    std::string to_string() const;  // dump(2) with trailing newline

    const CheckRecord* find(const std::string& name) const;
};

}  // namespace hjsep
