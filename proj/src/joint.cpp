#include "mingain/joint.hpp"

#include <cmath>

namespace mingain {

std::vector<double> Matrix::row_sums() const
{
    std::vector<double> out(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            out[i] += (*this)(i, j);
    return out;
}

std::vector<double> Matrix::col_sums() const
{
    std::vector<double> out(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            out[j] += (*this)(i, j);
    return out;
}

Matrix Matrix::transposed() const
{
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            out(j, i) = (*this)(i, j);
    return out;
}

JointDistribution::JointDistribution(Frame left, Frame right, Matrix cells)
    : left_(std::move(left)), right_(std::move(right)), cells_(std::move(cells))
{
    if (cells_.rows() != left_.size() || cells_.cols() != right_.size())
        throw Error(ErrorCode::DimensionMismatch, "joint cells do not match the frames");
    double total = 0.0;
    for (double v : cells_.data()) {
        if (!std::isfinite(v) || v < 0.0)
            throw Error(ErrorCode::InvalidProbability, "joint cells must be finite and nonnegative");
        total += v;
    }
    if (std::abs(total - 1.0) > kMassTolerance)
        throw Error(ErrorCode::InvalidProbability, "joint cells do not sum to 1");
}

ProbabilityFunction JointDistribution::left_marginal() const
{
    return ProbabilityFunction(left_, cells_.row_sums());
}

ProbabilityFunction JointDistribution::right_marginal() const
{
    return ProbabilityFunction(right_, cells_.col_sums());
}

JointDistribution JointDistribution::product(const ProbabilityFunction& left, const ProbabilityFunction& right)
{
    Matrix m(left.size(), right.size());
    for (std::size_t i = 0; i < left.size(); ++i)
        for (std::size_t j = 0; j < right.size(); ++j)
            m(i, j) = left[i] * right[j];
    return JointDistribution(left.frame(), right.frame(), std::move(m));
}

}  // namespace mingain
