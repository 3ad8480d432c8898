#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "textgcn/dense_matrix.hpp"
#include "textgcn/rng.hpp"
#include "textgcn/sparse_matrix.hpp"

namespace textgcn {

/// Two-layer GCN with identity input features: Z = softmax(Ã ReLU(Ã W0) W1).
/// Since X = I, row v of w0 is node v's input embedding.
struct GcnModel {
  DenseMatrix w0;  // n x k
  DenseMatrix w1;  // k x F
  double dropout = 0.5;
  std::uint64_t seed = 0;

  std::size_t node_count() const { return w0.rows(); }
  std::size_t embedding_dim() const { return w0.cols(); }
  std::size_t num_classes() const { return w1.cols(); }
};

/// Uniform in ±sqrt(6 / (rows + cols)).
DenseMatrix glorot_init(std::size_t rows, std::size_t cols, Rng& rng);

/// Glorot-initialized model drawn from the seed's init stream.
GcnModel make_model(std::size_t node_count, std::size_t embedding_dim, std::size_t num_classes,
                    double dropout, std::uint64_t seed);

struct ForwardCache {
  DenseMatrix e1_pre;  // Ã W0
  DenseMatrix e1;      // ReLU(e1_pre), with dropout applied in training mode
  /// Per-entry dropout scale (0 or 1/keep); empty when no dropout was applied.
  std::vector<double> dropout_scale;
  DenseMatrix e2;  // Ã e1 W1, pre-softmax
  DenseMatrix z;   // row-wise softmax of e2
};

enum class Mode { training, evaluation };

/// Throws dimension_mismatch on inconsistent shapes and non_finite if any
/// activation overflows. `rng` is only drawn from in training mode with dropout > 0.
ForwardCache forward(const GcnModel& model, const SparseMatrix& a_norm, Mode mode, Rng& rng);
ForwardCache forward_eval(const GcnModel& model, const SparseMatrix& a_norm);

/// Same as forward, starting from a precomputed `first_layer` = Ã W0 (the
/// e1_pre of an earlier pass with the same W0). Saves the largest product.
ForwardCache forward(const GcnModel& model, const SparseMatrix& a_norm, DenseMatrix first_layer,
                     Mode mode, Rng& rng);

/// Row-wise numerically stable softmax.
DenseMatrix softmax_rows(const DenseMatrix& logits);

/// Mean cross-entropy over the masked nodes: -(1/|mask|) Σ_d ln z[d, label_d].
/// `labels[i]` is the class of node `mask[i]`.
double loss(const ForwardCache& cache, std::span<const std::size_t> mask,
            std::span<const std::size_t> labels);

struct Gradients {
  DenseMatrix w0;
  DenseMatrix w1;
};

/// Exact gradients of `loss` with respect to W0 and W1.
Gradients backward(const GcnModel& model, const SparseMatrix& a_norm, const ForwardCache& cache,
                   std::span<const std::size_t> mask, std::span<const std::size_t> labels);

struct AdamOptions {
  double learning_rate = 0.02;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  /// Decoupled weight decay, applied as p -= lr * l2 * p.
  double l2_weight = 0.0;
};

struct AdamState {
  AdamOptions options;
  DenseMatrix m0, v0, m1, v1;
  std::uint64_t step = 0;

  AdamState() = default;
  AdamState(const GcnModel& model, AdamOptions opts);
};

/// One bias-corrected Adam update. Throws non_finite on a non-finite gradient.
void adam_step(GcnModel& model, AdamState& state, const Gradients& grads);

/// Argmax of each listed row; ties go to the lowest class index.
std::vector<std::size_t> predict(const DenseMatrix& z, std::span<const std::size_t> rows);
std::size_t argmax(std::span<const double> row);

}  // namespace textgcn
