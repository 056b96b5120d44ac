#pragma once

// Linear constraints on a joint distribution over S x S' and the
// feasibility test that decides whether two bodies of evidence conflict.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mingain/evidence.hpp"
#include "mingain/joint.hpp"

namespace mingain {

/// Tolerance used when deciding feasibility.
inline constexpr double kFeasibilityTolerance = 1e-9;

struct Cell {
    std::size_t row;
    std::size_t col;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct FixedCell {
    Cell cell;
    double value;
};

/// A conditional probability P({s'} | {s}) given by abstract element indices.
struct Conditional {
    std::size_t given;
    std::size_t then;
    double prob;
};

enum class CellKind : unsigned char { Free, Forbidden, Fixed };

/// Row marginals P({s}), column marginals P({s'}), cells forced to zero and
/// cells fixed to a known value. A fixed value of zero is stored as
/// forbidden.
class ConstraintSystem {
public:
    ConstraintSystem(Frame left, Frame right, std::vector<double> rows, std::vector<double> cols,
                     std::span<const Cell> forbidden = {}, std::span<const FixedCell> fixed = {});

    /// Convenience for tests and ad-hoc systems: frames are named r1.. and c1..
    static ConstraintSystem from_marginals(std::vector<double> rows, std::vector<double> cols,
                                           std::span<const Cell> forbidden = {},
                                           std::span<const FixedCell> fixed = {});

    const Frame& left() const noexcept { return left_; }
    const Frame& right() const noexcept { return right_; }
    std::span<const double> rows() const noexcept { return rows_; }
    std::span<const double> cols() const noexcept { return cols_; }
    std::size_t row_count() const noexcept { return rows_.size(); }
    std::size_t col_count() const noexcept { return cols_.size(); }

    CellKind kind(std::size_t i, std::size_t j) const { return kinds_[i * cols_.size() + j]; }
    bool is_free(std::size_t i, std::size_t j) const { return kind(i, j) == CellKind::Free; }
    /// Fixed value of a cell; 0 for forbidden cells, nullopt for free ones.
    std::optional<double> fixed_value(std::size_t i, std::size_t j) const;

    std::vector<Cell> forbidden_cells() const;
    std::vector<FixedCell> fixed_cells() const;
    std::size_t free_count() const;

    /// Marginals left after removing the mass of fixed cells. Values within
    /// 1e-13 of zero are snapped to zero.
    const std::vector<double>& residual_rows() const noexcept { return residual_rows_; }
    const std::vector<double>& residual_cols() const noexcept { return residual_cols_; }

    /// Same system with rows and columns swapped.
    ConstraintSystem transposed() const;

private:
    Frame left_;
    Frame right_;
    std::vector<double> rows_;
    std::vector<double> cols_;
    std::vector<CellKind> kinds_;
    std::vector<double> fixed_;
    std::vector<double> residual_rows_;
    std::vector<double> residual_cols_;
};

/// Builds the system for two evidence bodies: marginals from their
/// probability functions, forbidden cells from dead pairs and fixed cells
/// P({s}) * P({s'} | {s}) from the conditionals.
ConstraintSystem assemble(const EvidenceBody& left, const EvidenceBody& right,
                          const JointCompatibility& joint, std::span<const Conditional> conditionals);

/// A set R of rows whose residual mass exceeds the residual mass of every
/// column reachable from R through free cells.
struct ConflictCertificate {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> reachable_cols;
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    double row_mass = 0.0;
    double reachable_mass = 0.0;

    double margin() const noexcept { return row_mass - reachable_mass; }
};

struct Feasibility {
    enum class Status { Feasible, Conflict };

    Status status = Status::Feasible;
    std::optional<JointDistribution> witness;
    std::optional<ConflictCertificate> certificate;

    bool feasible() const noexcept { return status == Status::Feasible; }
};

/// Decides by maximum flow on the free cells whether any joint distribution
/// meets every constraint within `tol`.
Feasibility check_feasible(const ConstraintSystem& cs, double tol = kFeasibilityTolerance);

/// Free cells that are positive in at least one feasible joint, given any
/// feasible `witness`. Row-major, one flag per cell. The remaining free
/// cells are zero in every extension.
std::vector<bool> extension_support(const ConstraintSystem& cs, const JointDistribution& witness);

}  // namespace mingain
