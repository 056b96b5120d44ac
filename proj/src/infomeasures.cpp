#include "mingain/infomeasures.hpp"

#include <algorithm>
#include <cmath>

#include "mingain/maxent.hpp"

namespace mingain {

double entropy(std::span<const double> probs)
{
    double h = 0.0;
    for (double p : probs)
        if (p > 0.0)
            h -= p * std::log(p);
    return h;
}

double entropy(const ProbabilityFunction& p)
{
    return entropy(p.probs());
}

double information(const ProbabilityFunction& p)
{
    // sum p ln(|S| p) equals ln|S| - H(S) but is exact at both extremes.
    const double n = static_cast<double>(p.size());
    double info = 0.0;
    for (double v : p.probs())
        if (v > 0.0)
            info += v * std::log(n * v);
    return std::max(0.0, info);
}

double info_gain(const JointDistribution& joint, const ProbabilityFunction& ps, const ProbabilityFunction& ps2)
{
    if (joint.cells().rows() != ps.size() || joint.cells().cols() != ps2.size())
        throw Error(ErrorCode::DimensionMismatch, "joint does not match the two probability functions");
    return entropy(ps) + entropy(ps2) - joint_entropy(joint);
}

double cross_entropy(std::span<const double> prior, std::span<const double> posterior)
{
    if (prior.size() != posterior.size())
        throw Error(ErrorCode::DimensionMismatch, "prior and posterior differ in size");
    double d = 0.0;
    for (std::size_t k = 0; k < prior.size(); ++k) {
        if (posterior[k] <= 0.0)
            continue;
        if (prior[k] <= 0.0)
            return kUnbounded;
        d += posterior[k] * std::log(posterior[k] / prior[k]);
    }
    return std::max(d, 0.0);
}

double cross_entropy(const JointDistribution& prior, const JointDistribution& posterior)
{
    if (prior.cells().rows() != posterior.cells().rows() || prior.cells().cols() != posterior.cells().cols())
        throw Error(ErrorCode::DimensionMismatch, "prior and posterior differ in shape");
    return cross_entropy(prior.cells().data(), posterior.cells().data());
}

double mutual_information(const JointDistribution& joint)
{
    auto product = JointDistribution::product(joint.left_marginal(), joint.right_marginal());
    return cross_entropy(product, joint);
}

InformationReport information_report(const JointDistribution& joint, const ProbabilityFunction& ps,
                                     const ProbabilityFunction& ps2)
{
    InformationReport r;
    r.h_left = entropy(ps);
    r.h_right = entropy(ps2);
    r.h_joint = joint_entropy(joint);
    r.info_left = information(ps);
    r.info_right = information(ps2);
    r.info_joint = std::log(static_cast<double>(ps.size() * ps2.size())) - r.h_joint;
    r.gain = info_gain(joint, ps, ps2);
    r.mutual = mutual_information(joint);
    return r;
}

}  // namespace mingain
