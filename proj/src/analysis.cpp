#include "textgcn/analysis.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "textgcn/error.hpp"

namespace textgcn {

EmbeddingExport export_embeddings(const GcnModel& model, const TextGraph& graph,
                                  const Corpus& corpus, EmbeddingLayer layer, bool untrained) {
  if (graph.node_count != corpus.num_nodes()) {
    throw Error(ErrorCode::dimension_mismatch, "graph was not built from this corpus");
  }
  const auto cache = forward_eval(model, graph.normalized);
  const DenseMatrix& values = layer == EmbeddingLayer::first ? cache.e1 : cache.e2;
  const auto& classes = corpus.label_names();

  EmbeddingExport out;
  out.layer = layer;
  out.untrained = untrained;
  out.rows.reserve(graph.node_count);
  for (std::size_t v = 0; v < graph.node_count; ++v) {
    EmbeddingRow row;
    row.node_id = v;
    if (v < corpus.num_documents()) {
      row.kind = "doc";
      row.name = corpus.document(v).name;
      row.label = classes[corpus.document(v).label];
    } else {
      row.kind = "word";
      row.name = corpus.vocabulary().term(static_cast<Index>(v - corpus.num_documents()));
      row.label = classes[argmax(cache.e2.row(v))];
    }
    auto src = values.row(v);
    row.values.assign(src.begin(), src.end());
    out.rows.push_back(std::move(row));
  }
  return out;
}

void EmbeddingExport::write_tsv(std::ostream& out) const {
  if (untrained) out << "# untrained model\n";
  const std::size_t width = rows.empty() ? 0 : rows.front().values.size();
  out << "node_id\tkind\tname\tlabel";
  const char* prefix = layer == EmbeddingLayer::first ? "e1_" : "e2_";
  for (std::size_t c = 0; c < width; ++c) out << '\t' << prefix << c;
  out << '\n';
  for (const auto& r : rows) {
    out << r.node_id << '\t' << r.kind << '\t' << r.name << '\t' << r.label;
    for (double v : r.values) out << '\t' << fmt::format("{}", v);
    out << '\n';
  }
}

EmbeddingExport EmbeddingExport::read_tsv(std::istream& in) {
  EmbeddingExport out;
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.starts_with("#")) {
      if (line == "# untrained model") out.untrained = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, '\t')) fields.push_back(f);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() < 4 || fields[0] != "node_id") {
        throw Error(ErrorCode::parse, "embedding TSV header missing");
      }
      if (fields.size() > 4) {
        out.layer = fields[4].starts_with("e1_") ? EmbeddingLayer::first : EmbeddingLayer::second;
      }
      continue;
    }
    if (fields.size() < 4) {
      throw Error(ErrorCode::parse, "embedding TSV line " + std::to_string(line_no) + " too short");
    }
    EmbeddingRow row;
    try {
      row.node_id = std::stoull(fields[0]);
      for (std::size_t c = 4; c < fields.size(); ++c) row.values.push_back(std::stod(fields[c]));
    } catch (const std::exception&) {
      throw Error(ErrorCode::parse, "embedding TSV line " + std::to_string(line_no) + " unreadable");
    }
    row.kind = fields[1];
    row.name = fields[2];
    row.label = fields[3];
    out.rows.push_back(std::move(row));
  }
  return out;
}

TopWordsTable top_words(const GcnModel& model, const TextGraph& graph, const Corpus& corpus,
                        std::size_t top_k) {
  if (top_k == 0) throw Error(ErrorCode::invalid_argument, "top_k must be at least 1");
  if (top_k > corpus.num_terms()) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("top_k {} exceeds vocabulary size {}", top_k, corpus.num_terms()));
  }
  const auto cache = forward_eval(model, graph.normalized);
  const std::size_t docs = corpus.num_documents();

  TopWordsTable table;
  table.class_names = corpus.label_names();
  std::vector<Index> order(corpus.num_terms());
  for (std::size_t f = 0; f < corpus.num_classes(); ++f) {
    std::iota(order.begin(), order.end(), Index{0});
    auto value = [&](Index w) { return cache.e2(docs + w, f); };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top_k), order.end(),
                      [&](Index a, Index b) {
                        const double va = value(a), vb = value(b);
                        return va != vb ? va > vb : a < b;
                      });
    std::vector<std::pair<std::string, double>> ranked;
    for (std::size_t i = 0; i < top_k; ++i) {
      ranked.emplace_back(corpus.vocabulary().term(order[i]), value(order[i]));
    }
    table.words.push_back(std::move(ranked));
  }
  return table;
}

std::string TopWordsTable::to_tsv() const {
  std::string out = "class\trank\tword\tvalue\n";
  for (std::size_t f = 0; f < words.size(); ++f) {
    for (std::size_t i = 0; i < words[f].size(); ++i) {
      out += fmt::format("{}\t{}\t{}\t{}\n", class_names[f], i + 1, words[f][i].first,
                         words[f][i].second);
    }
  }
  return out;
}

std::vector<SweepRow> sweep(const Corpus& corpus, const TrainConfig& config,
                            SweepParameter parameter, std::vector<std::size_t> values) {
  if (values.empty()) throw Error(ErrorCode::invalid_argument, "sweep needs at least one value");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  std::vector<SweepRow> rows;
  if (parameter == SweepParameter::window_size) {
    for (std::size_t w : values) {
      TrainConfig point = config;
      point.window_size = w;
      point.validate();
      const auto report = run_replicates(corpus, build_graph(corpus, w), point);
      rows.push_back({static_cast<double>(w), report.mean_accuracy, report.std_accuracy});
    }
  } else {
    config.validate();
    const auto graph = build_graph(corpus, config.window_size);
    for (std::size_t k : values) {
      TrainConfig point = config;
      point.embedding_dim = k;
      point.validate();
      const auto report = run_replicates(corpus, graph, point);
      rows.push_back({static_cast<double>(k), report.mean_accuracy, report.std_accuracy});
    }
  }
  return rows;
}

}  // namespace textgcn
