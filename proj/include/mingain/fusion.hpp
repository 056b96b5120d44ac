#pragma once

// Combination rules: Dempster, Bayes conditionalization and minimum
// information gain, plus left-folding over several bodies of evidence.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mingain/constraints.hpp"
#include "mingain/core.hpp"
#include "mingain/evidence.hpp"
#include "mingain/infomeasures.hpp"
#include "mingain/joint.hpp"
#include "mingain/maxent.hpp"

namespace mingain {

enum class Rule { Dempster, Bayes, MinGain };

std::string_view to_string(Rule rule);
std::optional<Rule> parse_rule(std::string_view name);

/// Raised by min_gain_combine when no extension exists.
class ConflictError : public Error {
public:
    explicit ConflictError(ConflictCertificate certificate);

    const ConflictCertificate& certificate() const noexcept { return certificate_; }

private:
    ConflictCertificate certificate_;
};

struct CombinedResult {
    /// Combined bpa over the target frame, focal elements in canonical order.
    BPA bpa;
    JointDistribution joint;
    Rule rule;
    /// Dempster's K; 1 for the other rules.
    double normalization = 1.0;
    /// Product mass that fell on dead pairs (Dempster only).
    double conflict_mass = 0.0;
    InformationReport measures;
    std::optional<SolverReport> solver;
    EvidenceBody left;
    EvidenceBody right;
};

/// Views a joint distribution as an evidence body over S x S': one element
/// per positive cell, labelled "(s,s')", compatible with the cell's targets.
EvidenceBody joint_evidence(const JointDistribution& joint, const JointCompatibility& relation);

/// Masses of cells aggregated by the target set each (s, s') pair implies.
BPA combined_bpa(const JointDistribution& joint, const JointCompatibility& relation);

CombinedResult dempster_combine(const BPA& b1, const BPA& b2);

CombinedResult min_gain_combine(const BPA& b1, const BPA& b2, std::span<const Conditional> conditionals = {},
                                const std::optional<JointCompatibility>& explicit_joint = std::nullopt,
                                double tol = kDefaultSolverTolerance,
                                std::size_t max_iter = kDefaultMaxIterations);

/// `full_conditionals` must give P({s'} | {s}) for every pair, each s
/// summing to 1.
CombinedResult bayes_combine(const BPA& b1, const BPA& b2, std::span<const Conditional> full_conditionals);

struct CombineOptions {
    std::vector<Conditional> conditionals;
    std::optional<JointCompatibility> explicit_joint;
    double tol = kDefaultSolverTolerance;
    std::size_t max_iter = kDefaultMaxIterations;
};

struct FoldResult {
    BPA bpa;
    Rule rule;
    /// One entry per pairwise combination, in order.
    std::vector<CombinedResult> steps;
};

/// Left fold in input order. Conditionals and an explicit joint relation
/// refer to the abstract frames of the first two bodies, so they are only
/// accepted when exactly two bodies are given; Bayes likewise needs two.
FoldResult combine_all(std::span<const BPA> bodies, Rule rule, const CombineOptions& options = {});

}  // namespace mingain
