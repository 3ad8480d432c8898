#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "textgcn/corpus.hpp"
#include "textgcn/sparse_matrix.hpp"

namespace textgcn {

/// Sliding-window co-occurrence counts. Windows are counted, not occurrences.
struct CooccurrenceStats {
  std::uint64_t total_windows = 0;
  std::vector<std::uint64_t> word_windows;
  /// Sorted by (i, j) with i < j; only pairs that co-occur at least once.
  std::vector<std::pair<std::pair<Index, Index>, std::uint64_t>> pair_windows;

  /// #W(i, j) for any i != j, 0 when the pair never co-occurs.
  std::uint64_t pair_count(Index i, Index j) const;
};

/// Stride-1 windows of min(L, window_size) tokens; a document shorter than the
/// window contributes one window. Windows never cross documents.
CooccurrenceStats count_windows(const Corpus& corpus, std::size_t window_size);

/// Positive PMI of terms i and j, or nullopt when they never co-occur or the
/// PMI is not strictly positive. Throws invalid_argument when i == j.
std::optional<double> pmi(const CooccurrenceStats& stats, Index i, Index j);

/// Raw in-document count times ln(N / df). nullopt when the term is absent
/// from the document or the weight is zero (df == N).
std::optional<double> tfidf(const Corpus& corpus, std::size_t doc, Index term);

/// Edge counts by family; each undirected edge counted once.
struct GraphSummary {
  std::size_t num_documents = 0;
  std::size_t num_words = 0;
  std::size_t num_nodes = 0;
  std::size_t window_size = 0;
  std::uint64_t total_windows = 0;
  std::size_t cooccurring_pairs = 0;
  std::size_t word_word_edges = 0;
  std::size_t doc_word_edges = 0;
  std::size_t self_loops = 0;
  std::size_t adjacency_nnz = 0;

  std::string to_json() const;
};

/// Heterogeneous document/word graph. Node ids: documents first, then word w
/// at num_documents + w.
struct TextGraph {
  SparseMatrix adjacency;
  SparseMatrix normalized;
  std::size_t num_documents = 0;
  std::size_t node_count = 0;
  GraphSummary summary;

  std::size_t word_node(Index term) const { return num_documents + term; }
};

TextGraph build_graph(const Corpus& corpus, std::size_t window_size);

/// `node_id<TAB>kind<TAB>name` lines for every node.
void write_node_map(const std::string& path, const Corpus& corpus);

}  // namespace textgcn
