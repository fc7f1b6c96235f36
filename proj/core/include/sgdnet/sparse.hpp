#pragma once

#include "sgdnet/matrix.hpp"

#include <span>
#include <vector>

namespace sgdnet {

struct Triplet {
    NodeId row;
    NodeId col;
    double value;
};

/// Compressed sparse row matrix with 64-bit row offsets and 32-bit column ids.
/// Column indices within each row are sorted ascending.
class CsrMatrix {
public:
    CsrMatrix() = default;
    CsrMatrix(NodeId rows, NodeId cols);
    CsrMatrix(NodeId rows, NodeId cols, std::vector<Offset> row_ptr, std::vector<NodeId> col_idx,
              std::vector<double> values);

    /// Builds from unordered triplets; repeated (row, col) entries are summed.
    static CsrMatrix from_triplets(NodeId rows, NodeId cols, std::vector<Triplet> triplets);

    NodeId rows() const noexcept { return rows_; }
    NodeId cols() const noexcept { return cols_; }
    Offset nnz() const noexcept { return static_cast<Offset>(values_.size()); }

    std::span<const Offset> row_ptr() const noexcept { return row_ptr_; }
    std::span<const NodeId> col_idx() const noexcept { return col_idx_; }
    std::span<const double> values() const noexcept { return values_; }

    Offset row_nnz(NodeId r) const { return row_ptr_[r + 1] - row_ptr_[r]; }
    double row_sum(NodeId r) const;
    /// Value at (r, c), zero when not stored. Binary search within the row.
    double at(NodeId r, NodeId c) const;

    CsrMatrix transpose() const;
    /// Multiplies every stored value in row r by scale[r].
    CsrMatrix scale_rows(std::span<const double> scale) const;
    Matrix to_dense() const;

    /// y = A x; rows of x are indexed by columns of A.
    Matrix multiply(const Matrix& x) const;
    /// y += alpha * A x.
    void multiply_add(const Matrix& x, double alpha, Matrix& y) const;

    friend bool operator==(const CsrMatrix&, const CsrMatrix&) = default;

private:
    NodeId rows_ = 0;
    NodeId cols_ = 0;
    std::vector<Offset> row_ptr_{0};
    std::vector<NodeId> col_idx_;
    std::vector<double> values_;
};

}  // namespace sgdnet
