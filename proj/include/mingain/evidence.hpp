#pragma once

// Compatibility relations between an evidence frame and the target frame,
// the evidence bodies built on them, and the joint relation used when two
// bodies are combined.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mingain/core.hpp"

namespace mingain {

/// Relation s C t between a source (evidence) frame and a target frame,
/// stored one row per source element as the set of compatible targets.
class CompatibilityRelation {
public:
    /// Every source element must be compatible with at least one target.
    CompatibilityRelation(Frame source, Frame target, std::vector<Proposition> rows);

    const Frame& source() const noexcept { return source_; }
    const Frame& target() const noexcept { return target_; }

    bool compatible(std::size_t s, std::size_t t) const { return rows_.at(s).contains(t); }
    /// Targets compatible with source element `s`.
    const Proposition& targets_of(std::size_t s) const { return rows_.at(s); }
    /// Source elements compatible with target element `t` (the transpose).
    Proposition sources_of(std::size_t t) const;

private:
    Frame source_;
    Frame target_;
    std::vector<Proposition> rows_;
};

/// Union over s in `a` of the targets compatible with s.
Proposition implies(const CompatibilityRelation& rel, const Proposition& a);

/// For a relation-induced implication the implied set is already minimal,
/// so this coincides with implies().
Proposition exactly_implies(const CompatibilityRelation& rel, const Proposition& a);

/// A probability function on an evidence frame together with its
/// compatibility relation to the target frame.
class EvidenceBody {
public:
    /// Rejects zero-probability source elements.
    EvidenceBody(ProbabilityFunction prob, CompatibilityRelation relation);

    const Frame& frame() const noexcept { return prob_.frame(); }
    const Frame& target() const noexcept { return relation_.target(); }
    const ProbabilityFunction& prob() const noexcept { return prob_; }
    const CompatibilityRelation& relation() const noexcept { return relation_; }

private:
    ProbabilityFunction prob_;
    CompatibilityRelation relation_;
};

/// Builds the abstract evidence frame of a bpa: element s_i stands for the
/// i-th focal element (in the bpa's focal order), is compatible with exactly
/// its members and carries its mass as probability. Labels are "s1", "s2", ...
EvidenceBody abstract_evidence(const BPA& bpa, const Frame& target);
EvidenceBody abstract_evidence(const BPA& bpa);

/// Transfers the body's probability onto the target frame: each source
/// element's mass goes to the set it exactly implies. Focal elements appear
/// in order of first occurrence among the source elements.
BPA bpa_from_evidence(const EvidenceBody& body);

/// Ternary relation (s, s') C+C' t. Each (s, s') pair stores the set of
/// targets it is compatible with; an empty set marks a dead pair.
class JointCompatibility {
public:
    struct Triple {
        std::size_t left;
        std::size_t right;
        std::size_t target;
    };

    JointCompatibility(Frame left, Frame right, Frame target, std::vector<Proposition> cells);
    static JointCompatibility from_triples(Frame left, Frame right, Frame target,
                                           std::span<const Triple> triples);

    const Frame& left() const noexcept { return left_; }
    const Frame& right() const noexcept { return right_; }
    const Frame& target() const noexcept { return target_; }

    const Proposition& targets(std::size_t s, std::size_t s2) const
    {
        return cells_.at(s * right_.size() + s2);
    }
    bool compatible(std::size_t s, std::size_t s2, std::size_t t) const
    {
        return targets(s, s2).contains(t);
    }
    bool is_dead(std::size_t s, std::size_t s2) const { return targets(s, s2).empty(); }
    std::vector<std::pair<std::size_t, std::size_t>> dead_pairs() const;

private:
    Frame left_;
    Frame right_;
    Frame target_;
    std::vector<Proposition> cells_;
};

/// (s, s') is compatible with t iff s C t and s' C' t.
JointCompatibility default_joint_compatibility(const CompatibilityRelation& c,
                                               const CompatibilityRelation& c2);

}  // namespace mingain
