#pragma once

// Entropy, information content, information gain and cross-entropy. All
// values are in nats.

#include <limits>
#include <span>

#include "mingain/core.hpp"
#include "mingain/joint.hpp"

namespace mingain {

/// Value returned by cross_entropy when the posterior puts mass on a cell
/// the prior rules out.
inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

inline bool is_unbounded(double v) noexcept { return v == kUnbounded; }

double entropy(std::span<const double> probs);
double entropy(const ProbabilityFunction& p);

/// ln|S| - H(S): zero for the uniform distribution, ln|S| for a point mass.
double information(const ProbabilityFunction& p);

/// H(S) + H(S') - H(S x S'). The joint's own marginals need not match
/// `ps` and `ps2`.
double info_gain(const JointDistribution& joint, const ProbabilityFunction& ps, const ProbabilityFunction& ps2);

/// Kullback divergence sum q ln(q / p) of `posterior` q from `prior` p.
double cross_entropy(std::span<const double> prior, std::span<const double> posterior);
double cross_entropy(const JointDistribution& prior, const JointDistribution& posterior);

/// Cross-entropy of a joint relative to the product of its own marginals.
double mutual_information(const JointDistribution& joint);

struct InformationReport {
    double h_left = 0.0;
    double h_right = 0.0;
    double h_joint = 0.0;
    double info_left = 0.0;
    double info_right = 0.0;
    double info_joint = 0.0;
    double gain = 0.0;
    double mutual = 0.0;
};

InformationReport information_report(const JointDistribution& joint, const ProbabilityFunction& ps,
                                     const ProbabilityFunction& ps2);

}  // namespace mingain
