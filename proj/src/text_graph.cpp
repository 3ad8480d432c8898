#include "textgcn/text_graph.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include "textgcn/error.hpp"

namespace textgcn {

namespace {

std::uint64_t pair_key(Index i, Index j) {
  return (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint64_t>(j);
}

// Distinct terms of tokens[begin, end), ascending.
void distinct_terms(const std::vector<Index>& tokens, std::size_t begin, std::size_t end,
                    std::vector<Index>& out) {
  out.assign(tokens.begin() + static_cast<std::ptrdiff_t>(begin),
             tokens.begin() + static_cast<std::ptrdiff_t>(end));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

}  // namespace

std::uint64_t CooccurrenceStats::pair_count(Index i, Index j) const {
  if (i > j) std::swap(i, j);
  const auto key = std::make_pair(i, j);
  auto it = std::lower_bound(pair_windows.begin(), pair_windows.end(), key,
                             [](const auto& entry, const auto& k) { return entry.first < k; });
  if (it == pair_windows.end() || it->first != key) return 0;
  return it->second;
}

CooccurrenceStats count_windows(const Corpus& corpus, std::size_t window_size) {
  if (window_size < 2) throw Error(ErrorCode::invalid_argument, "window size must be at least 2");

  CooccurrenceStats stats;
  stats.word_windows.assign(corpus.num_terms(), 0);
  std::unordered_map<std::uint64_t, std::uint64_t> pairs;
  std::vector<Index> window;
  for (const auto& doc : corpus.documents()) {
    const std::size_t len = doc.tokens.size();
    const std::size_t span = std::min(len, window_size);
    const std::size_t count = len > window_size ? len - window_size + 1 : 1;
    stats.total_windows += count;
    for (std::size_t start = 0; start < count; ++start) {
      distinct_terms(doc.tokens, start, start + span, window);
      for (std::size_t a = 0; a < window.size(); ++a) {
        ++stats.word_windows[window[a]];
        for (std::size_t b = a + 1; b < window.size(); ++b) ++pairs[pair_key(window[a], window[b])];
      }
    }
  }

  stats.pair_windows.reserve(pairs.size());
  for (const auto& [key, n] : pairs) {
    stats.pair_windows.push_back(
        {{static_cast<Index>(key >> 32), static_cast<Index>(key & 0xffffffffu)}, n});
  }
  std::sort(stats.pair_windows.begin(), stats.pair_windows.end());
  return stats;
}

std::optional<double> pmi(const CooccurrenceStats& stats, Index i, Index j) {
  if (i == j) throw Error(ErrorCode::invalid_argument, "PMI of a term with itself is undefined");
  const std::uint64_t together = stats.pair_count(i, j);
  if (together == 0) return std::nullopt;
  const double value =
      std::log(static_cast<double>(together) * static_cast<double>(stats.total_windows) /
               (static_cast<double>(stats.word_windows[i]) * static_cast<double>(stats.word_windows[j])));
  if (!(value > 0.0)) return std::nullopt;
  return value;
}

std::optional<double> tfidf(const Corpus& corpus, std::size_t doc, Index term) {
  if (doc >= corpus.num_documents() || term >= corpus.num_terms()) {
    throw Error(ErrorCode::invalid_argument, "tfidf index out of range");
  }
  const auto& tokens = corpus.document(doc).tokens;
  const auto tf = std::count(tokens.begin(), tokens.end(), term);
  if (tf == 0) return std::nullopt;
  const double weight =
      static_cast<double>(tf) * std::log(static_cast<double>(corpus.num_documents()) /
                                         static_cast<double>(corpus.vocabulary().doc_freq()[term]));
  if (!(weight > 0.0)) return std::nullopt;
  return weight;
}

std::string GraphSummary::to_json() const {
  nlohmann::ordered_json j;
  j["documents"] = num_documents;
  j["words"] = num_words;
  j["nodes"] = num_nodes;
  j["window_size"] = window_size;
  j["total_windows"] = total_windows;
  j["cooccurring_pairs"] = cooccurring_pairs;
  j["edges"] = {{"word_word", word_word_edges},
                {"doc_word", doc_word_edges},
                {"self_loop", self_loops}};
  j["adjacency_nnz"] = adjacency_nnz;
  return j.dump();
}

TextGraph build_graph(const Corpus& corpus, std::size_t window_size) {
  const std::size_t docs = corpus.num_documents();
  const std::size_t n = corpus.num_nodes();
  const auto stats = count_windows(corpus, window_size);

  TextGraph g;
  g.num_documents = docs;
  g.node_count = n;
  g.summary.num_documents = docs;
  g.summary.num_words = corpus.num_terms();
  g.summary.num_nodes = n;
  g.summary.window_size = window_size;
  g.summary.total_windows = stats.total_windows;
  g.summary.cooccurring_pairs = stats.pair_windows.size();

  std::vector<Triplet> triplets;
  triplets.reserve(n + 2 * stats.pair_windows.size());
  for (std::size_t v = 0; v < n; ++v) triplets.push_back({static_cast<Index>(v), static_cast<Index>(v), 1.0});
  g.summary.self_loops = n;

  for (const auto& [key, together] : stats.pair_windows) {
    auto weight = pmi(stats, key.first, key.second);
    if (!weight) continue;
    const auto a = static_cast<Index>(docs + key.first);
    const auto b = static_cast<Index>(docs + key.second);
    triplets.push_back({a, b, *weight});
    triplets.push_back({b, a, *weight});
    ++g.summary.word_word_edges;
  }

  const double num_docs = static_cast<double>(docs);
  const auto& df = corpus.vocabulary().doc_freq();
  std::unordered_map<Index, std::size_t> tf;
  for (const auto& doc : corpus.documents()) {
    tf.clear();
    for (Index t : doc.tokens) ++tf[t];
    std::vector<std::pair<Index, std::size_t>> counts(tf.begin(), tf.end());
    std::sort(counts.begin(), counts.end());
    for (const auto& [term, count] : counts) {
      const double weight = static_cast<double>(count) * std::log(num_docs / static_cast<double>(df[term]));
      if (!(weight > 0.0)) continue;
      const auto d = static_cast<Index>(doc.id);
      const auto w = static_cast<Index>(docs + term);
      triplets.push_back({d, w, weight});
      triplets.push_back({w, d, weight});
      ++g.summary.doc_word_edges;
    }
  }

  g.adjacency = SparseMatrix::from_triplets(n, n, std::move(triplets));
  g.summary.adjacency_nnz = g.adjacency.nnz();
  g.normalized = normalize_symmetric(g.adjacency);
  return g;
}

void write_node_map(const std::string& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path);
  for (const auto& doc : corpus.documents()) out << doc.id << "\tdoc\t" << doc.name << '\n';
  for (std::size_t t = 0; t < corpus.num_terms(); ++t) {
    out << corpus.num_documents() + t << "\tword\t" << corpus.vocabulary().term(static_cast<Index>(t))
        << '\n';
  }
  if (!out) throw Error(ErrorCode::io, "write failed for " + path);
}

}  // namespace textgcn
