#include "sgdnet/sparse.hpp"

#include "sgdnet/errors.hpp"
#include "sgdnet/parallel.hpp"

#include <algorithm>
#include <string>

namespace sgdnet {

CsrMatrix::CsrMatrix(NodeId rows, NodeId cols)
    : rows_(rows), cols_(cols), row_ptr_(static_cast<std::size_t>(rows) + 1, 0) {}

CsrMatrix::CsrMatrix(NodeId rows, NodeId cols, std::vector<Offset> row_ptr,
                     std::vector<NodeId> col_idx, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
    if (row_ptr_.size() != static_cast<std::size_t>(rows_) + 1 || row_ptr_.front() != 0 ||
        row_ptr_.back() != values_.size() || col_idx_.size() != values_.size()) {
        throw ArgumentError("CsrMatrix: inconsistent CSR arrays");
    }
    for (NodeId r = 0; r < rows_; ++r) {
        if (row_ptr_[r] > row_ptr_[r + 1]) throw ArgumentError("CsrMatrix: row_ptr not monotone");
        for (Offset k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            if (col_idx_[k] >= cols_) throw ArgumentError("CsrMatrix: column index out of range");
            if (k > row_ptr_[r] && col_idx_[k] <= col_idx_[k - 1]) {
                throw ArgumentError("CsrMatrix: columns not strictly increasing in row " +
                                    std::to_string(r));
            }
        }
    }
}

CsrMatrix CsrMatrix::from_triplets(NodeId rows, NodeId cols, std::vector<Triplet> triplets) {
    for (const auto& t : triplets) {
        if (t.row >= rows || t.col >= cols) {
            throw ArgumentError("CsrMatrix::from_triplets: index out of range");
        }
    }
    std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    CsrMatrix out(rows, cols);
    out.col_idx_.reserve(triplets.size());
    out.values_.reserve(triplets.size());
    for (std::size_t i = 0; i < triplets.size();) {
        const auto& t = triplets[i];
        double v = 0.0;
        std::size_t j = i;
        for (; j < triplets.size() && triplets[j].row == t.row && triplets[j].col == t.col; ++j) {
            v += triplets[j].value;
        }
        out.col_idx_.push_back(t.col);
        out.values_.push_back(v);
        ++out.row_ptr_[static_cast<std::size_t>(t.row) + 1];
        i = j;
    }
    for (NodeId r = 0; r < rows; ++r) out.row_ptr_[r + 1] += out.row_ptr_[r];
    return out;
}

double CsrMatrix::row_sum(NodeId r) const {
    double s = 0.0;
    for (Offset k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += values_[k];
    return s;
}

double CsrMatrix::at(NodeId r, NodeId c) const {
    const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
    const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
    const auto it = std::lower_bound(first, last, c);
    if (it == last || *it != c) return 0.0;
    return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

CsrMatrix CsrMatrix::transpose() const {
    CsrMatrix t(cols_, rows_);
    t.col_idx_.resize(values_.size());
    t.values_.resize(values_.size());
    for (NodeId c : col_idx_) ++t.row_ptr_[static_cast<std::size_t>(c) + 1];
    for (NodeId r = 0; r < cols_; ++r) t.row_ptr_[r + 1] += t.row_ptr_[r];
    std::vector<Offset> cursor(t.row_ptr_.begin(), t.row_ptr_.end() - 1);
    // Visiting source rows in order keeps the transposed rows sorted.
    for (NodeId r = 0; r < rows_; ++r) {
        for (Offset k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            const Offset dst = cursor[col_idx_[k]]++;
            t.col_idx_[dst] = r;
            t.values_[dst] = values_[k];
        }
    }
    return t;
}

CsrMatrix CsrMatrix::scale_rows(std::span<const double> scale) const {
    if (scale.size() != rows_) throw ArgumentError("CsrMatrix::scale_rows: size mismatch");
    CsrMatrix out = *this;
    for (NodeId r = 0; r < rows_; ++r) {
        for (Offset k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) out.values_[k] *= scale[r];
    }
    return out;
}

Matrix CsrMatrix::to_dense() const {
    Matrix d = Matrix::Zero(rows_, cols_);
    for (NodeId r = 0; r < rows_; ++r) {
        for (Offset k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) d(r, col_idx_[k]) += values_[k];
    }
    return d;
}

Matrix CsrMatrix::multiply(const Matrix& x) const {
    Matrix y = Matrix::Zero(rows_, x.cols());
    multiply_add(x, 1.0, y);
    return y;
}

void CsrMatrix::multiply_add(const Matrix& x, double alpha, Matrix& y) const {
    if (x.rows() != cols_ || y.rows() != rows_ || y.cols() != x.cols()) {
        throw ArgumentError("CsrMatrix::multiply_add: dimension mismatch");
    }
    parallel_for(0, rows_, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t r = lo; r < hi; ++r) {
            auto yr = y.row(static_cast<Eigen::Index>(r));
            for (Offset k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
                yr.noalias() += (alpha * values_[k]) * x.row(col_idx_[k]);
            }
        }
    });
}

}  // namespace sgdnet
