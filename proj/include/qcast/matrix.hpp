#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qcast {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles. Rows are observations, columns are
/// variables. Deliberately minimal: the heavy lifting is delegated to the
/// linear-algebra backend inside the .cpp files.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    /// Adopts `values` as row-major storage; size must equal rows * cols.
    Matrix(std::size_t rows, std::size_t cols, Vector values);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

    [[nodiscard]] std::span<const double> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }

    /// Copy of column c.
    [[nodiscard]] Vector column(std::size_t c) const;

    /// Contiguous window of `count` rows starting at `first`.
    [[nodiscard]] Matrix row_window(std::size_t first, std::size_t count) const;

    [[nodiscard]] const Vector& data() const noexcept { return data_; }
    [[nodiscard]] Vector& data() noexcept { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vector data_;
};

/// Least-squares solution of X b ~= y via column-pivoted Householder QR.
/// X is used exactly as given (append a column of ones yourself if you want
/// an intercept). Requires rows >= cols >= 1. A pivot below 1e-12 relative
/// to the largest raises SingularityError naming the first dependent column.
[[nodiscard]] Vector least_squares(const Matrix& X, std::span<const double> y);

}  // namespace qcast
