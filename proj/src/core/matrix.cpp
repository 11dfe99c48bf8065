#include "netcpd/core/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace netcpd {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw std::invalid_argument("Matrix: ragged initializer list");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

void Matrix::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

Matrix Matrix::permuted(std::span<const std::size_t> perm) const {
    if (perm.size() != rows_ || rows_ != cols_) {
        throw std::invalid_argument("Matrix::permuted: permutation size mismatch");
    }
    Matrix out(rows_, cols_);
    for (std::size_t k = 0; k < rows_; ++k) {
        for (std::size_t m = 0; m < cols_; ++m) {
            out(perm[k], perm[m]) = (*this)(k, m);
        }
    }
    return out;
}

double max_abs_difference(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("max_abs_difference: shape mismatch");
    }
    double worst = 0.0;
    auto av = a.values();
    auto bv = b.values();
    for (std::size_t i = 0; i < av.size(); ++i) {
        worst = std::max(worst, std::abs(av[i] - bv[i]));
    }
    return worst;
}

} // namespace netcpd
