#include "mingain/fusion.hpp"

#include <cmath>
#include <sstream>

namespace mingain {

std::string_view to_string(Rule rule)
{
    switch (rule) {
    case Rule::Dempster: return "dempster";
    case Rule::Bayes: return "bayes";
    case Rule::MinGain: return "mingain";
    }
    return "unknown";
}

std::optional<Rule> parse_rule(std::string_view name)
{
    if (name == "dempster")
        return Rule::Dempster;
    if (name == "bayes")
        return Rule::Bayes;
    if (name == "mingain")
        return Rule::MinGain;
    return std::nullopt;
}

namespace {

std::string describe(const ConflictCertificate& c)
{
    auto list = [](const std::vector<std::string>& labels) {
        std::string s = "{";
        for (std::size_t k = 0; k < labels.size(); ++k)
            s += (k ? "," : "") + labels[k];
        return s + "}";
    };
    std::ostringstream os;
    os << "rows " << list(c.row_labels) << " carry mass " << c.row_mass << " but reachable columns "
       << list(c.col_labels) << " carry only " << c.reachable_mass;
    return os.str();
}

void require_same_frame(const BPA& b1, const BPA& b2)
{
    if (!(b1.frame() == b2.frame()))
        throw Error(ErrorCode::FrameMismatch, "bpas are over different frames");
}

}  // namespace

ConflictError::ConflictError(ConflictCertificate certificate)
    : Error(ErrorCode::ConflictDetected, describe(certificate)), certificate_(std::move(certificate))
{
}

EvidenceBody joint_evidence(const JointDistribution& joint, const JointCompatibility& relation)
{
    if (!(joint.left() == relation.left()) || !(joint.right() == relation.right()))
        throw Error(ErrorCode::FrameMismatch, "joint and relation are over different frames");
    std::vector<std::string> labels;
    std::vector<double> probs;
    std::vector<Proposition> rows;
    double total = 0.0;
    for (std::size_t s = 0; s < joint.left().size(); ++s)
        for (std::size_t s2 = 0; s2 < joint.right().size(); ++s2) {
            double p = joint(s, s2);
            if (p <= 0.0)
                continue;
            if (relation.is_dead(s, s2))
                throw Error(ErrorCode::InvalidRelation, "joint puts mass on the dead pair (" + joint.left().label(s)
                                                            + "," + joint.right().label(s2) + ")");
            labels.push_back("(" + joint.left().label(s) + "," + joint.right().label(s2) + ")");
            probs.push_back(p);
            rows.push_back(relation.targets(s, s2));
            total += p;
        }
    if (labels.empty())
        throw Error(ErrorCode::ZeroTotalMass, "joint carries no mass on compatible pairs");
    for (auto& p : probs)
        p /= total;
    Frame frame(std::move(labels));
    return EvidenceBody(ProbabilityFunction(frame, std::move(probs)),
                        CompatibilityRelation(frame, relation.target(), std::move(rows)));
}

BPA combined_bpa(const JointDistribution& joint, const JointCompatibility& relation)
{
    return bpa_from_evidence(joint_evidence(joint, relation)).canonical();
}

CombinedResult dempster_combine(const BPA& b1, const BPA& b2)
{
    require_same_frame(b1, b2);
    auto left = abstract_evidence(b1);
    auto right = abstract_evidence(b2);
    auto relation = default_joint_compatibility(left.relation(), right.relation());

    const auto nr = left.frame().size();
    const auto nc = right.frame().size();
    Matrix cells(nr, nc);
    double live = 0.0;
    double conflict = 0.0;
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) {
            double p = left.prob()[i] * right.prob()[j];
            if (relation.is_dead(i, j)) {
                conflict += p;
            } else {
                cells(i, j) = p;
                live += p;
            }
        }
    if (live <= 0.0)
        throw Error(ErrorCode::TotalConflict, "every pair of focal elements is disjoint");
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j)
            cells(i, j) /= live;

    JointDistribution joint(left.frame(), right.frame(), std::move(cells));
    auto measures = information_report(joint, left.prob(), right.prob());
    auto bpa = combined_bpa(joint, relation);
    return CombinedResult{std::move(bpa), std::move(joint), Rule::Dempster, 1.0 / live, conflict,
                          measures, std::nullopt, std::move(left), std::move(right)};
}

CombinedResult min_gain_combine(const BPA& b1, const BPA& b2, std::span<const Conditional> conditionals,
                                const std::optional<JointCompatibility>& explicit_joint, double tol,
                                std::size_t max_iter)
{
    require_same_frame(b1, b2);
    auto left = abstract_evidence(b1);
    auto right = abstract_evidence(b2);
    auto relation = explicit_joint ? *explicit_joint : default_joint_compatibility(left.relation(), right.relation());

    auto cs = assemble(left, right, relation, conditionals);
    auto feas = check_feasible(cs);
    if (!feas.feasible())
        throw ConflictError(*feas.certificate);

    auto solution = solve_maxent(cs, tol, max_iter);
    auto measures = information_report(solution.joint, left.prob(), right.prob());
    auto bpa = combined_bpa(solution.joint, relation);
    return CombinedResult{std::move(bpa),   std::move(solution.joint), Rule::MinGain,     1.0, 0.0, measures,
                          solution.report, std::move(left),           std::move(right)};
}

CombinedResult bayes_combine(const BPA& b1, const BPA& b2, std::span<const Conditional> full_conditionals)
{
    require_same_frame(b1, b2);
    auto left = abstract_evidence(b1);
    auto right = abstract_evidence(b2);
    auto relation = default_joint_compatibility(left.relation(), right.relation());

    const auto nr = left.frame().size();
    const auto nc = right.frame().size();
    std::vector<double> cond(nr * nc, -1.0);
    for (const auto& c : full_conditionals) {
        if (c.given >= nr || c.then >= nc)
            throw Error(ErrorCode::InconsistentConditional, "conditional refers to an unknown element");
        if (!std::isfinite(c.prob) || c.prob < 0.0 || c.prob > 1.0 + kMassTolerance)
            throw Error(ErrorCode::InconsistentConditional, "conditional probability outside [0, 1]");
        auto& slot = cond[c.given * nc + c.then];
        if (slot >= 0.0)
            throw Error(ErrorCode::InconsistentConditional, "conditional for (" + left.frame().label(c.given) + ", "
                                                                + right.frame().label(c.then) + ") given twice");
        slot = c.prob;
    }

    Matrix cells(nr, nc);
    for (std::size_t i = 0; i < nr; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < nc; ++j) {
            double c = cond[i * nc + j];
            if (c < 0.0)
                throw Error(ErrorCode::IncompleteConditionals, "missing P(" + right.frame().label(j) + " | "
                                                                   + left.frame().label(i) + ")");
            sum += c;
            double p = left.prob()[i] * c;
            if (relation.is_dead(i, j)) {
                if (p > kMassTolerance)
                    throw Error(ErrorCode::InconsistentConditional,
                                "conditional puts mass on the incompatible pair (" + left.frame().label(i) + ", "
                                    + right.frame().label(j) + ")");
                p = 0.0;
            }
            cells(i, j) = p;
        }
        if (std::abs(sum - 1.0) > kMassTolerance)
            throw Error(ErrorCode::InconsistentConditional,
                        "conditionals given '" + left.frame().label(i) + "' do not sum to 1");
    }
    auto col = cells.col_sums();
    for (std::size_t j = 0; j < nc; ++j)
        if (std::abs(col[j] - right.prob()[j]) > kMassTolerance) {
            std::ostringstream os;
            os << "conditionals give '" << right.frame().label(j) << "' mass " << col[j] << ", its marginal is "
               << right.prob()[j];
            throw Error(ErrorCode::InconsistentConditional, os.str());
        }

    JointDistribution joint(left.frame(), right.frame(), std::move(cells));
    auto measures = information_report(joint, left.prob(), right.prob());
    auto bpa = combined_bpa(joint, relation);
    return CombinedResult{std::move(bpa), std::move(joint), Rule::Bayes, 1.0, 0.0,
                          measures,       std::nullopt,     std::move(left), std::move(right)};
}

FoldResult combine_all(std::span<const BPA> bodies, Rule rule, const CombineOptions& options)
{
    if (bodies.empty())
        throw Error(ErrorCode::ZeroTotalMass, "nothing to combine");
    const bool pairwise_only = !options.conditionals.empty() || options.explicit_joint || rule == Rule::Bayes;
    if (pairwise_only && bodies.size() != 2)
        throw Error(ErrorCode::InconsistentConditional,
                    "conditionals, explicit joint relations and the Bayes rule need exactly two bodies");

    FoldResult out{bodies.front(), rule, {}};
    for (std::size_t k = 1; k < bodies.size(); ++k) {
        const auto& next = bodies[k];
        switch (rule) {
        case Rule::Dempster: out.steps.push_back(dempster_combine(out.bpa, next)); break;
        case Rule::Bayes: out.steps.push_back(bayes_combine(out.bpa, next, options.conditionals)); break;
        case Rule::MinGain:
            out.steps.push_back(min_gain_combine(out.bpa, next, options.conditionals, options.explicit_joint,
                                                 options.tol, options.max_iter));
            break;
        }
        out.bpa = out.steps.back().bpa;
    }
    return out;
}

}  // namespace mingain
