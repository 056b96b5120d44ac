#pragma once

// Maximum-entropy (equivalently minimum information gain) joint distribution
// under a ConstraintSystem.

#include <cstddef>
#include <string_view>

#include "mingain/constraints.hpp"
#include "mingain/joint.hpp"

namespace mingain {

inline constexpr double kDefaultSolverTolerance = 1e-10;
inline constexpr std::size_t kDefaultMaxIterations = 100000;

enum class SolverMethod { IterativeScaling, DualAscentFallback };

std::string_view to_string(SolverMethod method);

struct SolverReport {
    std::size_t iterations = 0;
    /// Largest absolute row or column marginal deviation at termination.
    double residual = 0.0;
    /// Entropy of the returned joint, in nats.
    double entropy = 0.0;
    SolverMethod method = SolverMethod::IterativeScaling;
};

struct MaxEntSolution {
    JointDistribution joint;
    SolverReport report;
};

/// Entropy-maximizing joint satisfying `cs`.
///
/// Free cells that are zero in every extension are identified first (see
/// extension_support), then iterative proportional fitting runs on the
/// remaining cells starting from a uniform table. If scaling does not reach
/// `tol` within `max_iter` sweeps, a damped Newton ascent on the row/column
/// multipliers takes over with the same iteration budget.
///
/// Throws Error(NotFeasible) when the constraints admit no extension and
/// Error(NoConvergence) when neither method reaches `tol`.
MaxEntSolution solve_maxent(const ConstraintSystem& cs, double tol = kDefaultSolverTolerance,
                            std::size_t max_iter = kDefaultMaxIterations);

/// -sum p ln p over all cells, with 0 ln 0 = 0.
double joint_entropy(const JointDistribution& joint);

namespace detail {

/// Runs only the multiplier (dual Newton) method. Exposed for tests.
MaxEntSolution solve_maxent_dual(const ConstraintSystem& cs, double tol, std::size_t max_iter);

}  // namespace detail

}  // namespace mingain
