#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "textgcn/sparse_matrix.hpp"

namespace textgcn {

enum class Split { train, test };

struct Document {
  std::size_t id = 0;
  std::string name;
  std::vector<Index> tokens;
  Split split = Split::train;
  std::size_t label = 0;
};

class Vocabulary {
 public:
  /// Returns the index of `term`, appending it if unseen.
  Index intern(const std::string& term);
  std::optional<Index> lookup(const std::string& term) const;

  std::size_t size() const { return terms_.size(); }
  const std::string& term(Index i) const { return terms_[i]; }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<std::size_t>& doc_freq() const { return doc_freq_; }

  void set_doc_freq(std::vector<std::size_t> df) { doc_freq_ = std::move(df); }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, Index> index_;
  std::vector<std::size_t> doc_freq_;
};

struct PreprocessOptions {
  bool filter_enabled = true;
  std::size_t min_term_freq = 5;
  /// Empty means the bundled English list.
  std::filesystem::path stopwords_path;
};

/// Tokenized, labeled corpus. Immutable after construction.
class Corpus {
 public:
  /// Assembles a corpus from already-tokenized documents. Labels are class
  /// names; class indices follow sorted label-name order. Vocabulary indices
  /// follow first occurrence in document order.
  static Corpus from_tokens(const std::vector<std::vector<std::string>>& docs,
                            const std::vector<std::string>& names, const std::vector<Split>& splits,
                            const std::vector<std::string>& labels);

  const std::vector<Document>& documents() const { return documents_; }
  const Document& document(std::size_t i) const { return documents_[i]; }
  std::size_t num_documents() const { return documents_.size(); }
  const Vocabulary& vocabulary() const { return vocabulary_; }
  std::size_t num_terms() const { return vocabulary_.size(); }
  std::size_t num_classes() const { return label_names_.size(); }
  const std::vector<std::string>& label_names() const { return label_names_; }
  std::size_t num_nodes() const { return num_documents() + num_terms(); }

  /// Indices of documents with the given split, ascending.
  std::vector<std::size_t> indices(Split split) const;

 private:
  std::vector<Document> documents_;
  Vocabulary vocabulary_;
  std::vector<std::string> label_names_;
};

std::vector<std::string> load_stopwords(const std::filesystem::path& path);
std::filesystem::path default_stopwords_path();

/// Reads the documents file (one raw document per line) and the metadata file
/// (`name<TAB>split<TAB>label` per line), tokenizes, filters, and builds the corpus.
Corpus build_corpus(const std::filesystem::path& documents_path,
                    const std::filesystem::path& metadata_path, const PreprocessOptions& options);

/// In-memory variant of build_corpus; `metadata_lines` uses the metadata file format.
Corpus build_corpus_from_lines(const std::vector<std::string>& raw_documents,
                               const std::vector<std::string>& metadata_lines,
                               const PreprocessOptions& options);

struct ValidationSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

/// Seeded random partition of the training documents. Both outputs ascending.
ValidationSplit split_validation(const Corpus& corpus, double fraction, std::uint64_t seed);

}  // namespace textgcn
