#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "textgcn/dense_matrix.hpp"

namespace textgcn {

using Index = std::uint32_t;

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Compressed sparse row matrix in canonical form: column indices strictly
/// increasing within each row, no stored zeros. Immutable once built.
class SparseMatrix {
 public:
  SparseMatrix() : row_ptr_(1, 0) {}

  /// Duplicates are summed; entries that sum to zero are dropped.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> triplets);
  /// Validates the canonical-form invariants and throws malformed_graph if any fail.
  static SparseMatrix from_csr(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                               std::vector<Index> col_idx, std::vector<double> values);
  static SparseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const Index> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  std::span<const Index> row_cols(std::size_t r) const {
    return {col_idx_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }
  std::span<const double> row_values(std::size_t r) const {
    return {values_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }

  /// Stored value at (r, c), or 0 when absent.
  double at(std::size_t r, std::size_t c) const;
  std::optional<double> find(std::size_t r, std::size_t c) const;

  /// True when the matrix is square and a(i, j) == a(j, i) bitwise for all entries.
  /// Computed once at construction.
  bool symmetric() const { return symmetric_; }

  SparseMatrix transpose() const;
  DenseMatrix to_dense() const;
  std::vector<double> row_sums() const;
  std::vector<Triplet> triplets() const;

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.row_ptr_ == b.row_ptr_ &&
           a.col_idx_ == b.col_idx_ && a.values_ == b.values_;
  }

 private:
  void detect_symmetry();

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<Index> col_idx_;
  std::vector<double> values_;
  bool symmetric_ = false;
};

/// a · b. Parallel over output rows; each row is reduced in storage order, so
/// the result does not depend on the thread count.
DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& b);

/// aᵀ · b. Uses spmm directly when `a` is symmetric.
DenseMatrix spmm_transpose(const SparseMatrix& a, const DenseMatrix& b);

/// D^{-1/2} A D^{-1/2} with D the row sums of `a`.
SparseMatrix normalize_symmetric(const SparseMatrix& a);

}  // namespace textgcn
