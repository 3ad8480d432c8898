#include "textgcn/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "textgcn/error.hpp"

namespace textgcn {

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row >= rows || t.col >= cols) {
      throw Error(ErrorCode::dimension_mismatch,
                  "triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                      ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_ptr_.assign(rows + 1, 0);
  m.col_idx_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  for (std::size_t i = 0; i < triplets.size();) {
    const Index r = triplets[i].row;
    const Index c = triplets[i].col;
    double sum = 0.0;
    for (; i < triplets.size() && triplets[i].row == r && triplets[i].col == c; ++i) {
      sum += triplets[i].value;
    }
    if (sum == 0.0) continue;
    m.col_idx_.push_back(c);
    m.values_.push_back(sum);
    ++m.row_ptr_[r + 1];
  }
  std::partial_sum(m.row_ptr_.begin(), m.row_ptr_.end(), m.row_ptr_.begin());
  m.detect_symmetry();
  return m;
}

SparseMatrix SparseMatrix::from_csr(std::size_t rows, std::size_t cols,
                                    std::vector<std::size_t> row_ptr, std::vector<Index> col_idx,
                                    std::vector<double> values) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::malformed_graph, what); };
  if (row_ptr.size() != rows + 1) fail("row_ptr length must be rows + 1");
  if (col_idx.size() != values.size()) fail("col_idx and values differ in length");
  if (row_ptr.front() != 0 || row_ptr.back() != values.size()) fail("row_ptr endpoints invalid");
  for (std::size_t r = 0; r < rows; ++r) {
    if (row_ptr[r] > row_ptr[r + 1]) fail("row_ptr decreases at row " + std::to_string(r));
    for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) {
      if (col_idx[p] >= cols) fail("column index out of range in row " + std::to_string(r));
      if (p > row_ptr[r] && col_idx[p] <= col_idx[p - 1]) {
        fail("columns not strictly increasing in row " + std::to_string(r));
      }
      if (values[p] == 0.0) fail("explicit zero stored in row " + std::to_string(r));
    }
  }
  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_ptr_ = std::move(row_ptr);
  m.col_idx_ = std::move(col_idx);
  m.values_ = std::move(values);
  m.detect_symmetry();
  return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<std::size_t> ptr(n + 1);
  std::iota(ptr.begin(), ptr.end(), std::size_t{0});
  std::vector<Index> cols(n);
  std::iota(cols.begin(), cols.end(), Index{0});
  return from_csr(n, n, std::move(ptr), std::move(cols), std::vector<double>(n, 1.0));
}

std::optional<double> SparseMatrix::find(std::size_t r, std::size_t c) const {
  auto cs = row_cols(r);
  auto it = std::lower_bound(cs.begin(), cs.end(), static_cast<Index>(c));
  if (it == cs.end() || *it != c) return std::nullopt;
  return values_[row_ptr_[r] + static_cast<std::size_t>(it - cs.begin())];
}

double SparseMatrix::at(std::size_t r, std::size_t c) const { return find(r, c).value_or(0.0); }

void SparseMatrix::detect_symmetry() {
  symmetric_ = false;
  if (rows_ != cols_) return;
  for (std::size_t r = 0; r < rows_; ++r) {
    auto cs = row_cols(r);
    auto vs = row_values(r);
    for (std::size_t p = 0; p < cs.size(); ++p) {
      auto mirrored = find(cs[p], r);
      if (!mirrored || *mirrored != vs[p]) return;
    }
  }
  symmetric_ = true;
}

SparseMatrix SparseMatrix::transpose() const {
  // Counting sort by column keeps each transposed row in increasing order.
  std::vector<std::size_t> ptr(cols_ + 1, 0);
  for (Index c : col_idx_) ++ptr[c + 1];
  std::partial_sum(ptr.begin(), ptr.end(), ptr.begin());
  std::vector<std::size_t> next(ptr.begin(), ptr.end() - 1);
  std::vector<Index> cols(nnz());
  std::vector<double> vals(nnz());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
      const std::size_t dst = next[col_idx_[p]]++;
      cols[dst] = static_cast<Index>(r);
      vals[dst] = values_[p];
    }
  }
  SparseMatrix t;
  t.rows_ = cols_;
  t.cols_ = rows_;
  t.row_ptr_ = std::move(ptr);
  t.col_idx_ = std::move(cols);
  t.values_ = std::move(vals);
  t.symmetric_ = symmetric_;
  return t;
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) d(r, col_idx_[p]) = values_[p];
  }
  return d;
}

std::vector<double> SparseMatrix::row_sums() const {
  std::vector<double> sums(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (double v : row_values(r)) sums[r] += v;
  }
  return sums;
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
      out.push_back({static_cast<Index>(r), col_idx_[p], values_[p]});
    }
  }
  return out;
}

DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::dimension_mismatch,
                "spmm: sparse has " + std::to_string(a.cols()) + " columns, dense has " +
                    std::to_string(b.rows()) + " rows");
  }
  DenseMatrix out(a.rows(), b.cols());
  const std::size_t width = b.cols();
  const auto n = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto r = static_cast<std::size_t>(i);
    auto dst = out.row(r);
    auto cs = a.row_cols(r);
    auto vs = a.row_values(r);
    for (std::size_t p = 0; p < cs.size(); ++p) {
      const double v = vs[p];
      const double* src = b.row(cs[p]).data();
      for (std::size_t j = 0; j < width; ++j) dst[j] += v * src[j];
    }
  }
  return out;
}

DenseMatrix spmm_transpose(const SparseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) {
    throw Error(ErrorCode::dimension_mismatch,
                "spmm_transpose: sparse has " + std::to_string(a.rows()) + " rows, dense has " +
                    std::to_string(b.rows()));
  }
  if (a.symmetric()) return spmm(a, b);
  return spmm(a.transpose(), b);
}

SparseMatrix normalize_symmetric(const SparseMatrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::malformed_graph, "normalize_symmetric needs a square matrix");
  }
  const auto degree = a.row_sums();
  for (std::size_t i = 0; i < degree.size(); ++i) {
    if (!(degree[i] > 0.0)) {
      throw Error(ErrorCode::malformed_graph,
                  "node " + std::to_string(i) + " has non-positive degree");
    }
  }
  auto ptr = std::vector<std::size_t>(a.row_ptr().begin(), a.row_ptr().end());
  auto cols = std::vector<Index>(a.col_idx().begin(), a.col_idx().end());
  std::vector<double> vals(a.nnz());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t p = ptr[r]; p < ptr[r + 1]; ++p) {
      // d_i * d_j is commutative, so mirrored entries get bitwise equal values.
      vals[p] = a.values()[p] / std::sqrt(degree[r] * degree[cols[p]]);
    }
  }
  return SparseMatrix::from_csr(a.rows(), a.cols(), std::move(ptr), std::move(cols),
                                std::move(vals));
}

}  // namespace textgcn
