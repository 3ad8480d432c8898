#pragma once

#include <filesystem>
#include <iosfwd>

#include "textgcn/sparse_matrix.hpp"

namespace textgcn {

enum class MatrixMarketSymmetry { general, symmetric };

/// Writes `%%MatrixMarket matrix coordinate real <symmetry>` with 1-based
/// indices and values printed at round-trip precision. The symmetric form
/// stores the lower triangle only and requires `m.symmetric()`.
void write_matrix_market(std::ostream& out, const SparseMatrix& m,
                         MatrixMarketSymmetry symmetry = MatrixMarketSymmetry::general);
void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& m,
                         MatrixMarketSymmetry symmetry = MatrixMarketSymmetry::general);

/// Reads coordinate real general/symmetric files. Comment lines are skipped.
SparseMatrix read_matrix_market(std::istream& in);
SparseMatrix read_matrix_market(const std::filesystem::path& path);

}  // namespace textgcn
