#include "mingain/evidence.hpp"

#include <unordered_map>

namespace mingain {

CompatibilityRelation::CompatibilityRelation(Frame source, Frame target, std::vector<Proposition> rows)
    : source_(std::move(source)), target_(std::move(target)), rows_(std::move(rows))
{
    if (rows_.size() != source_.size())
        throw Error(ErrorCode::InvalidRelation, "relation needs one row per source element");
    for (std::size_t s = 0; s < rows_.size(); ++s) {
        if (!(rows_[s].frame() == target_))
            throw Error(ErrorCode::FrameMismatch, "relation row is not over the target frame");
        if (rows_[s].empty())
            throw Error(ErrorCode::InvalidRelation,
                        "source element '" + source_.label(s) + "' is compatible with no target");
    }
}

Proposition CompatibilityRelation::sources_of(std::size_t t) const
{
    Proposition out(source_);
    for (std::size_t s = 0; s < rows_.size(); ++s)
        if (rows_[s].contains(t))
            out.insert(s);
    return out;
}

Proposition implies(const CompatibilityRelation& rel, const Proposition& a)
{
    if (!(a.frame() == rel.source()))
        throw Error(ErrorCode::FrameMismatch, "proposition is not over the relation's source frame");
    Proposition out(rel.target());
    for (auto s : a.members())
        out = out | rel.targets_of(s);
    return out;
}

Proposition exactly_implies(const CompatibilityRelation& rel, const Proposition& a)
{
    return implies(rel, a);
}

EvidenceBody::EvidenceBody(ProbabilityFunction prob, CompatibilityRelation relation)
    : prob_(std::move(prob)), relation_(std::move(relation))
{
    if (!(relation_.source() == prob_.frame()))
        throw Error(ErrorCode::FrameMismatch, "relation source differs from the probability frame");
    for (std::size_t s = 0; s < prob_.size(); ++s)
        if (prob_[s] <= 0.0)
            throw Error(ErrorCode::InvalidProbability,
                        "evidence element '" + prob_.frame().label(s) + "' has zero probability");
}

EvidenceBody abstract_evidence(const BPA& bpa, const Frame& target)
{
    if (!(bpa.frame() == target))
        throw Error(ErrorCode::FrameMismatch, "bpa is not over the target frame");
    std::vector<std::string> labels;
    std::vector<double> probs;
    std::vector<Proposition> rows;
    for (const auto& fe : bpa.focal()) {
        labels.push_back("s" + std::to_string(labels.size() + 1));
        probs.push_back(fe.mass);
        rows.push_back(fe.set);
    }
    Frame source(std::move(labels));
    return EvidenceBody(ProbabilityFunction(source, std::move(probs)),
                        CompatibilityRelation(source, target, std::move(rows)));
}

EvidenceBody abstract_evidence(const BPA& bpa)
{
    return abstract_evidence(bpa, bpa.frame());
}

BPA bpa_from_evidence(const EvidenceBody& body)
{
    std::vector<FocalElement> focal;
    std::unordered_map<Proposition, std::size_t, PropositionHash> slot;
    double total = 0.0;
    const auto& rel = body.relation();
    for (std::size_t s = 0; s < body.frame().size(); ++s) {
        Proposition single(body.frame());
        single.insert(s);
        auto implied = exactly_implies(rel, single);
        double p = body.prob()[s];
        total += p;
        auto [it, fresh] = slot.emplace(implied, focal.size());
        if (fresh)
            focal.push_back({std::move(implied), p});
        else
            focal[it->second].mass += p;
    }
    if (total <= 0.0)
        throw Error(ErrorCode::ZeroTotalMass, "evidence body carries no probability");
    return BPA(body.target(), std::move(focal));
}

JointCompatibility::JointCompatibility(Frame left, Frame right, Frame target, std::vector<Proposition> cells)
    : left_(std::move(left)), right_(std::move(right)), target_(std::move(target)), cells_(std::move(cells))
{
    if (cells_.size() != left_.size() * right_.size())
        throw Error(ErrorCode::InvalidRelation, "joint relation needs one entry per (s, s') pair");
    for (const auto& c : cells_)
        if (!(c.frame() == target_))
            throw Error(ErrorCode::FrameMismatch, "joint relation entry is not over the target frame");
}

JointCompatibility JointCompatibility::from_triples(Frame left, Frame right, Frame target,
                                                    std::span<const Triple> triples)
{
    std::vector<Proposition> cells(left.size() * right.size(), Proposition(target));
    for (const auto& tr : triples) {
        if (tr.left >= left.size() || tr.right >= right.size() || tr.target >= target.size())
            throw Error(ErrorCode::InvalidRelation, "joint relation triple out of range");
        cells[tr.left * right.size() + tr.right].insert(tr.target);
    }
    return JointCompatibility(std::move(left), std::move(right), std::move(target), std::move(cells));
}

std::vector<std::pair<std::size_t, std::size_t>> JointCompatibility::dead_pairs() const
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t s = 0; s < left_.size(); ++s)
        for (std::size_t s2 = 0; s2 < right_.size(); ++s2)
            if (is_dead(s, s2))
                out.emplace_back(s, s2);
    return out;
}

JointCompatibility default_joint_compatibility(const CompatibilityRelation& c,
                                               const CompatibilityRelation& c2)
{
    if (!(c.target() == c2.target()))
        throw Error(ErrorCode::FrameMismatch, "relations map onto different target frames");
    std::vector<Proposition> cells;
    cells.reserve(c.source().size() * c2.source().size());
    for (std::size_t s = 0; s < c.source().size(); ++s)
        for (std::size_t s2 = 0; s2 < c2.source().size(); ++s2)
            cells.push_back(c.targets_of(s) & c2.targets_of(s2));
    return JointCompatibility(c.source(), c2.source(), c.target(), std::move(cells));
}

}  // namespace mingain
