#include "textgcn/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_set>

#include "textgcn/error.hpp"
#include "textgcn/rng.hpp"
#include "textgcn/tokenizer.hpp"

#ifndef TEXTGCN_STOPWORDS_PATH
#define TEXTGCN_STOPWORDS_PATH "data/stopwords_en.txt"
#endif

namespace textgcn {

Index Vocabulary::intern(const std::string& term) {
  auto [it, inserted] = index_.try_emplace(term, static_cast<Index>(terms_.size()));
  if (inserted) terms_.push_back(term);
  return it->second;
}

std::optional<Index> Vocabulary::lookup(const std::string& term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Corpus Corpus::from_tokens(const std::vector<std::vector<std::string>>& docs,
                           const std::vector<std::string>& names, const std::vector<Split>& splits,
                           const std::vector<std::string>& labels) {
  if (docs.size() != names.size() || docs.size() != splits.size() || docs.size() != labels.size()) {
    throw Error(ErrorCode::dimension_mismatch, "document, name, split and label counts differ");
  }
  if (docs.empty()) throw Error(ErrorCode::invalid_argument, "corpus has no documents");

  Corpus corpus;
  const std::set<std::string> label_set(labels.begin(), labels.end());
  corpus.label_names_.assign(label_set.begin(), label_set.end());

  std::vector<std::size_t> df;
  corpus.documents_.reserve(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (docs[d].empty()) {
      throw Error(ErrorCode::empty_document, "document " + std::to_string(d + 1) + " has no tokens");
    }
    Document doc;
    doc.id = d;
    doc.name = names[d];
    doc.split = splits[d];
    doc.label = static_cast<std::size_t>(
        std::lower_bound(corpus.label_names_.begin(), corpus.label_names_.end(), labels[d]) -
        corpus.label_names_.begin());
    doc.tokens.reserve(docs[d].size());
    for (const auto& tok : docs[d]) doc.tokens.push_back(corpus.vocabulary_.intern(tok));

    std::vector<Index> distinct = doc.tokens;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    df.resize(corpus.vocabulary_.size(), 0);
    for (Index t : distinct) ++df[t];
    corpus.documents_.push_back(std::move(doc));
  }
  corpus.vocabulary_.set_doc_freq(std::move(df));

  std::vector<bool> trained(corpus.num_classes(), false);
  for (const auto& doc : corpus.documents_) {
    if (doc.split == Split::train) trained[doc.label] = true;
  }
  for (std::size_t c = 0; c < trained.size(); ++c) {
    if (!trained[c]) {
      throw Error(ErrorCode::invalid_argument,
                  "class '" + corpus.label_names_[c] + "' has no training document");
    }
  }
  return corpus;
}

std::vector<std::size_t> Corpus::indices(Split split) const {
  std::vector<std::size_t> out;
  for (const auto& doc : documents_) {
    if (doc.split == split) out.push_back(doc.id);
  }
  return out;
}

std::filesystem::path default_stopwords_path() { return TEXTGCN_STOPWORDS_PATH; }

std::vector<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot read stop-word list " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty() && line[0] != '#') words.push_back(line);
  }
  return words;
}

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(std::move(line));
  if (in.bad()) throw Error(ErrorCode::io, "read failed for " + path.string());
  return lines;
}

struct Metadata {
  std::string name;
  Split split;
  std::string label;
};

Metadata parse_metadata(const std::string& raw, std::size_t line_no) {
  std::string line = raw;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto t1 = line.find('\t');
  const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
  if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
    throw Error(ErrorCode::parse,
                "metadata line " + std::to_string(line_no) + ": expected name<TAB>split<TAB>label");
  }
  Metadata m;
  m.name = line.substr(0, t1);
  const std::string split = line.substr(t1 + 1, t2 - t1 - 1);
  if (split == "train") {
    m.split = Split::train;
  } else if (split == "test") {
    m.split = Split::test;
  } else {
    throw Error(ErrorCode::parse,
                "metadata line " + std::to_string(line_no) + ": unknown split '" + split + "'");
  }
  m.label = line.substr(t2 + 1);
  if (m.label.empty()) {
    throw Error(ErrorCode::parse, "metadata line " + std::to_string(line_no) + ": empty label");
  }
  return m;
}

}  // namespace

Corpus build_corpus_from_lines(const std::vector<std::string>& raw_documents,
                    const std::vector<std::string>& metadata_lines,
                    const PreprocessOptions& options) {
  if (raw_documents.size() != metadata_lines.size()) {
    throw Error(ErrorCode::parse, "documents file has " + std::to_string(raw_documents.size()) +
                                      " lines but metadata file has " +
                                      std::to_string(metadata_lines.size()));
  }
  const std::size_t n = raw_documents.size();
  std::vector<std::string> names(n), labels(n);
  std::vector<Split> splits(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto m = parse_metadata(metadata_lines[i], i + 1);
    names[i] = std::move(m.name);
    splits[i] = m.split;
    labels[i] = std::move(m.label);
  }

  std::vector<std::vector<std::string>> docs(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 32)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    docs[static_cast<std::size_t>(i)] = tokenize(raw_documents[static_cast<std::size_t>(i)]);
  }

  if (options.filter_enabled) {
    const auto stop_list = load_stopwords(options.stopwords_path.empty()
                                              ? default_stopwords_path()
                                              : options.stopwords_path);
    const std::unordered_set<std::string> stop(stop_list.begin(), stop_list.end());
    std::unordered_map<std::string, std::size_t> freq;
    for (const auto& doc : docs) {
      for (const auto& tok : doc) ++freq[tok];
    }
    for (auto& doc : docs) {
      std::erase_if(doc, [&](const std::string& tok) {
        return stop.contains(tok) || freq[tok] < options.min_term_freq;
      });
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (docs[i].empty()) {
      throw Error(ErrorCode::empty_document,
                  "document on line " + std::to_string(i + 1) + " is empty after preprocessing");
    }
  }
  return Corpus::from_tokens(docs, names, splits, labels);
}

Corpus build_corpus(const std::filesystem::path& documents_path,
                    const std::filesystem::path& metadata_path, const PreprocessOptions& options) {
  return build_corpus_from_lines(read_lines(documents_path), read_lines(metadata_path), options);
}

ValidationSplit split_validation(const Corpus& corpus, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "validation fraction must lie in (0, 1)");
  }
  auto train = corpus.indices(Split::train);
  if (train.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "need at least two training documents to split");
  }
  auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(train.size())));
  count = std::clamp<std::size_t>(count, 1, train.size() - 1);

  Rng rng(seed, Stream::validation_split);
  rng.shuffle(std::span<std::size_t>(train));
  ValidationSplit out;
  out.validation.assign(train.begin(), train.begin() + static_cast<std::ptrdiff_t>(count));
  out.train.assign(train.begin() + static_cast<std::ptrdiff_t>(count), train.end());
  std::sort(out.validation.begin(), out.validation.end());
  std::sort(out.train.begin(), out.train.end());
  return out;
}

}  // namespace textgcn
