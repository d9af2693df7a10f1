#include "qcast/matrix.hpp"

#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "qcast/errors.hpp"

namespace qcast {

Matrix::Matrix(std::size_t rows, std::size_t cols, Vector values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
    if (data_.size() != rows_ * cols_) {
        throw std::invalid_argument("Matrix: storage size does not match dimensions");
    }
}

Vector Matrix::column(std::size_t c) const {
    if (c >= cols_) {
        throw std::invalid_argument("Matrix::column: index out of range");
    }
    Vector out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        out[r] = data_[r * cols_ + c];
    }
    return out;
}

Matrix Matrix::row_window(std::size_t first, std::size_t count) const {
    if (first + count > rows_) {
        throw std::invalid_argument("Matrix::row_window: window out of range");
    }
    Matrix out(count, cols_);
    std::copy(data_.begin() + static_cast<std::ptrdiff_t>(first * cols_),
              data_.begin() + static_cast<std::ptrdiff_t>((first + count) * cols_),
              out.data_.begin());
    return out;
}

Vector least_squares(const Matrix& X, std::span<const double> y) {
    if (X.cols() == 0) {
        throw std::invalid_argument("least_squares: design has no columns");
    }
    if (X.rows() != y.size()) {
        throw std::invalid_argument("least_squares: row count does not match response length");
    }
    if (X.rows() < X.cols()) {
        throw std::invalid_argument("least_squares: fewer rows than columns");
    }

    using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMajorMatrix> design(X.data().data(),
                                            static_cast<Eigen::Index>(X.rows()),
                                            static_cast<Eigen::Index>(X.cols()));
    Eigen::Map<const Eigen::VectorXd> rhs(y.data(), static_cast<Eigen::Index>(y.size()));

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-12);  // relative to the largest pivot
    const auto rank = qr.rank();
    if (rank < static_cast<Eigen::Index>(X.cols())) {
        // The permutation sends original columns to pivot positions; the
        // first non-pivoted slot holds the column that failed the threshold.
        const auto& perm = qr.colsPermutation().indices();
        const std::ptrdiff_t offending = static_cast<std::ptrdiff_t>(perm(rank));
        throw SingularityError(
            "least_squares: design is rank deficient; column " + std::to_string(offending) +
                " is numerically dependent on the others",
            offending);
    }

    const Eigen::VectorXd beta = qr.solve(rhs);
    return Vector(beta.data(), beta.data() + beta.size());
}

}  // namespace qcast
