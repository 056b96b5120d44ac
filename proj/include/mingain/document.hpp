#pragma once

// JSON evidence documents read by the command-line tool, and the result
// documents it writes.
//
// Input schema (unknown keys are rejected):
//   {
//     "frame": ["t1", "t2", ...],
//     "evidence": [ {"name": "...", "focal": [ {"set": ["t1"], "mass": 0.5}, ... ]}, ... ],
//     "conditionals": [ {"given": "s1", "then": "s2", "prob": 0.25}, ... ],          optional
//     "joint_compatibility": [ {"left": "s1", "right": "s2", "target": "t1"}, ... ]  optional
//   }
// "given"/"left" name elements of the first body's abstract frame and
// "then"/"right" elements of the second's (s1, s2, ... in focal order).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mingain/constraints.hpp"
#include "mingain/core.hpp"
#include "mingain/evidence.hpp"
#include "mingain/fusion.hpp"

namespace mingain {

struct NamedBpa {
    std::string name;
    BPA bpa;
};

struct ConditionalSpec {
    std::string given;
    std::string then;
    double prob;
};

struct TripleSpec {
    std::string left;
    std::string right;
    std::string target;
};

struct EvidenceDocument {
    Frame frame;
    std::vector<NamedBpa> evidence;
    std::vector<ConditionalSpec> conditionals;
    std::vector<TripleSpec> joint_compatibility;
};

/// Parses and validates. Syntax errors and schema violations raise
/// Error(ParseError) naming the offending field; bpa violations keep their
/// own codes (MassSumViolation, DuplicateFocal, ...) with the field prefixed.
EvidenceDocument parse_document(std::string_view text);

/// Resolves conditional names against the abstract frames of the first two
/// bodies. Throws Error(UnknownLabel) for names that do not exist.
std::vector<Conditional> resolve_conditionals(const EvidenceDocument& doc);
std::optional<JointCompatibility> resolve_joint_compatibility(const EvidenceDocument& doc);

struct OutputOptions {
    int precision = 6;
    bool bits = false;
    /// Cap on belief-table rows (focal elements plus their pairwise unions).
    std::size_t belief_rows = 64;
};

/// Rounds to `precision` decimals; never returns -0.
double round_to(double value, int precision);

nlohmann::json result_document(const FoldResult& result, const OutputOptions& options);
nlohmann::json conflict_document(Rule rule, const Error& error, const OutputOptions& options);

/// Parses a result document's "combined" list back into a bpa.
BPA bpa_from_result(const nlohmann::json& result, const Frame& frame);

}  // namespace mingain
