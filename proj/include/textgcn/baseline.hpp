#pragma once

#include <cstdint>
#include <vector>

#include "textgcn/corpus.hpp"
#include "textgcn/sparse_matrix.hpp"

namespace textgcn {

/// Document x vocabulary TF-IDF matrix (tf · ln(N/df)), rows scaled to unit L2 norm.
SparseMatrix tfidf_features(const Corpus& corpus);

struct LogisticRegressionOptions {
  std::size_t iterations = 500;
  double learning_rate = 0.5;
  std::vector<double> l2_grid{1e-4, 1e-3, 1e-2};
};

struct BaselineResult {
  double test_accuracy = 0.0;
  double validation_accuracy = 0.0;
  double chosen_l2 = 0.0;
};

/// Multinomial logistic regression (with bias) on TF-IDF features, trained by
/// full-batch gradient descent on the mean cross-entropy plus (l2/2)‖W‖².
/// The L2 weight is picked by validation accuracy (ties to the smaller weight).
/// Uses the same validation split and label subsampling as the GCN runs.
BaselineResult tfidf_lr_baseline(const Corpus& corpus, std::uint64_t seed,
                                 double validation_fraction = 0.1, double label_fraction = 1.0,
                                 const LogisticRegressionOptions& options = {});

}  // namespace textgcn
