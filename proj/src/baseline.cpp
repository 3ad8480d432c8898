#include "textgcn/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "textgcn/error.hpp"
#include "textgcn/gcn.hpp"
#include "textgcn/trainer.hpp"

namespace textgcn {

SparseMatrix tfidf_features(const Corpus& corpus) {
  const double n = static_cast<double>(corpus.num_documents());
  const auto& df = corpus.vocabulary().doc_freq();
  std::vector<Triplet> triplets;
  for (const auto& doc : corpus.documents()) {
    std::map<Index, std::size_t> tf;
    for (Index t : doc.tokens) ++tf[t];
    const std::size_t first = triplets.size();
    double norm = 0.0;
    for (const auto& [term, count] : tf) {
      const double w = static_cast<double>(count) * std::log(n / static_cast<double>(df[term]));
      if (!(w > 0.0)) continue;
      triplets.push_back({static_cast<Index>(doc.id), term, w});
      norm += w * w;
    }
    norm = std::sqrt(norm);
    for (std::size_t i = first; i < triplets.size(); ++i) triplets[i].value /= norm;
  }
  return SparseMatrix::from_triplets(corpus.num_documents(), corpus.num_terms(), std::move(triplets));
}

namespace {

struct LinearModel {
  DenseMatrix weights;  // terms x classes
  std::vector<double> bias;
};

SparseMatrix select_rows(const SparseMatrix& x, const std::vector<std::size_t>& ids) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto cs = x.row_cols(ids[i]);
    auto vs = x.row_values(ids[i]);
    for (std::size_t p = 0; p < cs.size(); ++p) t.push_back({static_cast<Index>(i), cs[p], vs[p]});
  }
  return SparseMatrix::from_triplets(ids.size(), x.cols(), std::move(t));
}

DenseMatrix logits(const LinearModel& m, const SparseMatrix& x) {
  DenseMatrix out = spmm(x, m.weights);
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] += m.bias[c];
  }
  return out;
}

LinearModel fit(const SparseMatrix& x, const std::vector<std::size_t>& labels, std::size_t classes,
                double l2, const LogisticRegressionOptions& o) {
  LinearModel m{DenseMatrix(x.cols(), classes), std::vector<double>(classes, 0.0)};
  const double inv = 1.0 / static_cast<double>(x.rows());
  for (std::size_t it = 0; it < o.iterations; ++it) {
    DenseMatrix residual = softmax_rows(logits(m, x));
    for (std::size_t r = 0; r < residual.rows(); ++r) {
      residual(r, labels[r]) -= 1.0;
      for (double& v : residual.row(r)) v *= inv;
    }
    const DenseMatrix grad = spmm_transpose(x, residual);
    auto w = m.weights.data();
    auto g = grad.data();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= o.learning_rate * (g[i] + l2 * w[i]);
    for (std::size_t c = 0; c < classes; ++c) {
      double gb = 0.0;
      for (std::size_t r = 0; r < residual.rows(); ++r) gb += residual(r, c);
      m.bias[c] -= o.learning_rate * gb;
    }
  }
  return m;
}

double score(const LinearModel& m, const SparseMatrix& x, const std::vector<std::size_t>& labels) {
  const DenseMatrix z = logits(m, x);
  std::vector<std::size_t> rows(labels.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return accuracy(z, rows, labels);
}

}  // namespace

BaselineResult tfidf_lr_baseline(const Corpus& corpus, std::uint64_t seed,
                                 double validation_fraction, double label_fraction,
                                 const LogisticRegressionOptions& options) {
  if (options.l2_grid.empty()) throw Error(ErrorCode::invalid_argument, "empty L2 grid");
  const auto set = make_training_set(corpus, validation_fraction, label_fraction, seed);
  const SparseMatrix features = tfidf_features(corpus);
  const SparseMatrix train_x = select_rows(features, set.labeled);
  const SparseMatrix val_x = select_rows(features, set.validation);
  const SparseMatrix test_x = select_rows(features, set.test);

  BaselineResult best;
  best.validation_accuracy = -1.0;
  auto grid = options.l2_grid;
  std::sort(grid.begin(), grid.end());
  for (double l2 : grid) {
    const auto model = fit(train_x, set.labeled_labels, corpus.num_classes(), l2, options);
    const double val = score(model, val_x, set.validation_labels);
    if (val > best.validation_accuracy) {
      best.validation_accuracy = val;
      best.chosen_l2 = l2;
      best.test_accuracy = score(model, test_x, set.test_labels);
    }
  }
  return best;
}

}  // namespace textgcn
