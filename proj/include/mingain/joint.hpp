#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mingain/core.hpp"

namespace mingain {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, value)
    {
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> data() const noexcept { return data_; }

    std::vector<double> row_sums() const;
    std::vector<double> col_sums() const;
    Matrix transposed() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Probability function on the product S x S' of two evidence frames.
class JointDistribution {
public:
    /// Cells must be nonnegative and sum to 1 within kMassTolerance.
    JointDistribution(Frame left, Frame right, Matrix cells);

    const Frame& left() const noexcept { return left_; }
    const Frame& right() const noexcept { return right_; }
    const Matrix& cells() const noexcept { return cells_; }
    double operator()(std::size_t s, std::size_t s2) const { return cells_(s, s2); }

    ProbabilityFunction left_marginal() const;
    ProbabilityFunction right_marginal() const;

    /// P({s}) * P({s'}) for every cell.
    static JointDistribution product(const ProbabilityFunction& left, const ProbabilityFunction& right);

private:
    Frame left_;
    Frame right_;
    Matrix cells_;
};

}  // namespace mingain
