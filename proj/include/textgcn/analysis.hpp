#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "textgcn/corpus.hpp"
#include "textgcn/gcn.hpp"
#include "textgcn/text_graph.hpp"
#include "textgcn/trainer.hpp"

namespace textgcn {

enum class EmbeddingLayer { first, second };

struct EmbeddingRow {
  std::size_t node_id = 0;
  std::string kind;  // "doc" or "word"
  std::string name;
  /// Class name: the document's label, or the argmax of the word's
  /// second-layer row (ties to the lowest index).
  std::string label;
  std::vector<double> values;
};

struct EmbeddingExport {
  EmbeddingLayer layer = EmbeddingLayer::first;
  bool untrained = false;
  std::vector<EmbeddingRow> rows;

  /// Header line, then one row per node:
  /// node_id, kind, name, label, v0 ... v{width-1}. A leading
  /// `# untrained model` comment marks weights that were never updated.
  void write_tsv(std::ostream& out) const;
  static EmbeddingExport read_tsv(std::istream& in);
};

/// Evaluation-mode embeddings. First layer: ReLU(Ã W0) (k columns). Second
/// layer: pre-softmax logits Ã e1 W1 (F columns).
EmbeddingExport export_embeddings(const GcnModel& model, const TextGraph& graph,
                                  const Corpus& corpus, EmbeddingLayer layer,
                                  bool untrained = false);

struct TopWordsTable {
  std::vector<std::string> class_names;
  /// Per class, (word, value) pairs in non-increasing value order.
  std::vector<std::vector<std::pair<std::string, double>>> words;

  std::string to_tsv() const;
};

/// Words ranked by their second-layer value in each class dimension. Equal
/// values keep vocabulary order.
TopWordsTable top_words(const GcnModel& model, const TextGraph& graph, const Corpus& corpus,
                        std::size_t top_k);

enum class SweepParameter { window_size, embedding_dim };

/// Replicated runs per value. Values are sorted and de-duplicated; the graph is
/// rebuilt for window sizes and shared for embedding dimensions.
std::vector<SweepRow> sweep(const Corpus& corpus, const TrainConfig& config,
                            SweepParameter parameter, std::vector<std::size_t> values);

}  // namespace textgcn
