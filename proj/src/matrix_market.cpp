#include "textgcn/matrix_market.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "textgcn/error.hpp"

namespace textgcn {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

void write_matrix_market(std::ostream& out, const SparseMatrix& m,
                         MatrixMarketSymmetry symmetry) {
  const bool sym = symmetry == MatrixMarketSymmetry::symmetric;
  if (sym && !m.symmetric()) {
    throw Error(ErrorCode::invalid_argument, "symmetric Matrix Market output needs a symmetric matrix");
  }
  std::size_t count = 0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (Index c : m.row_cols(r)) {
      if (!sym || c <= r) ++count;
    }
  }
  out << "%%MatrixMarket matrix coordinate real " << (sym ? "symmetric" : "general") << '\n';
  out << m.rows() << ' ' << m.cols() << ' ' << count << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto cs = m.row_cols(r);
    auto vs = m.row_values(r);
    for (std::size_t p = 0; p < cs.size(); ++p) {
      if (sym && cs[p] > r) continue;
      out << fmt::format("{} {} {}\n", r + 1, cs[p] + 1, vs[p]);
    }
  }
}

void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& m,
                         MatrixMarketSymmetry symmetry) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  write_matrix_market(out, m, symmetry);
  if (!out) throw Error(ErrorCode::io, "write failed for " + path.string());
}

SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::parse, "empty Matrix Market input");
  std::istringstream header(lower(line));
  std::string banner, object, format, field, sym;
  header >> banner >> object >> format >> field >> sym;
  if (banner != "%%matrixmarket" || object != "matrix" || format != "coordinate") {
    throw Error(ErrorCode::parse, "unsupported Matrix Market header: " + line);
  }
  if (field != "real" && field != "integer") {
    throw Error(ErrorCode::parse, "unsupported Matrix Market field: " + field);
  }
  if (sym != "general" && sym != "symmetric") {
    throw Error(ErrorCode::parse, "unsupported Matrix Market symmetry: " + sym);
  }
  const bool symmetric = sym == "symmetric";

  while (std::getline(in, line) && (line.empty() || line[0] == '%')) {
  }
  std::size_t rows = 0, cols = 0, entries = 0;
  {
    std::istringstream size_line(line);
    if (!(size_line >> rows >> cols >> entries)) {
      throw Error(ErrorCode::parse, "bad Matrix Market size line: " + line);
    }
  }
  std::vector<Triplet> triplets;
  triplets.reserve(symmetric ? 2 * entries : entries);
  for (std::size_t k = 0; k < entries; ++k) {
    std::size_t r = 0, c = 0;
    double v = 0.0;
    if (!(in >> r >> c >> v)) {
      throw Error(ErrorCode::parse, "Matrix Market entry " + std::to_string(k + 1) + " unreadable");
    }
    if (r == 0 || c == 0 || r > rows || c > cols) {
      throw Error(ErrorCode::parse, "Matrix Market entry " + std::to_string(k + 1) + " out of range");
    }
    triplets.push_back({static_cast<Index>(r - 1), static_cast<Index>(c - 1), v});
    if (symmetric && r != c) triplets.push_back({static_cast<Index>(c - 1), static_cast<Index>(r - 1), v});
  }
  return SparseMatrix::from_triplets(rows, cols, std::move(triplets));
}

SparseMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read " + path.string());
  return read_matrix_market(in);
}

}  // namespace textgcn
