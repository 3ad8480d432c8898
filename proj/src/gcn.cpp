#include "textgcn/gcn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "textgcn/error.hpp"

namespace textgcn {

namespace {

void check_shapes(const GcnModel& model, const SparseMatrix& a_norm) {
  if (a_norm.rows() != a_norm.cols() || a_norm.rows() != model.w0.rows()) {
    throw Error(ErrorCode::dimension_mismatch,
                "graph has " + std::to_string(a_norm.rows()) + " nodes, model expects " +
                    std::to_string(model.w0.rows()));
  }
  if (model.w0.cols() != model.w1.rows()) {
    throw Error(ErrorCode::dimension_mismatch, "w0 columns differ from w1 rows");
  }
}

void check_mask(std::span<const std::size_t> mask, std::span<const std::size_t> labels,
                std::size_t rows, std::size_t classes) {
  if (mask.empty()) throw Error(ErrorCode::invalid_argument, "loss mask is empty");
  if (mask.size() != labels.size()) {
    throw Error(ErrorCode::dimension_mismatch, "mask and labels differ in length");
  }
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] >= rows || labels[i] >= classes) {
      throw Error(ErrorCode::invalid_argument, "mask entry or label out of range");
    }
  }
}

}  // namespace

DenseMatrix glorot_init(std::size_t rows, std::size_t cols, Rng& rng) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorCode::invalid_argument, "glorot_init needs positive dimensions");
  }
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  DenseMatrix m(rows, cols);
  for (double& v : m.data()) v = rng.uniform(-bound, bound);
  return m;
}

GcnModel make_model(std::size_t node_count, std::size_t embedding_dim, std::size_t num_classes,
                    double dropout, std::uint64_t seed) {
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "dropout rate must lie in [0, 1)");
  }
  Rng rng(seed, Stream::init);
  GcnModel model;
  model.w0 = glorot_init(node_count, embedding_dim, rng);
  model.w1 = glorot_init(embedding_dim, num_classes, rng);
  model.dropout = dropout;
  model.seed = seed;
  return model;
}

DenseMatrix softmax_rows(const DenseMatrix& logits) {
  DenseMatrix z(logits.rows(), logits.cols());
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    auto in = logits.row(r);
    auto out = z.row(r);
    const double peak = *std::max_element(in.begin(), in.end());
    double total = 0.0;
    for (std::size_t c = 0; c < in.size(); ++c) {
      out[c] = std::exp(in[c] - peak);
      total += out[c];
    }
    for (double& v : out) v /= total;
  }
  return z;
}

ForwardCache forward(const GcnModel& model, const SparseMatrix& a_norm, Mode mode, Rng& rng) {
  check_shapes(model, a_norm);
  return forward(model, a_norm, spmm(a_norm, model.w0), mode, rng);
}

ForwardCache forward(const GcnModel& model, const SparseMatrix& a_norm, DenseMatrix first_layer,
                     Mode mode, Rng& rng) {
  check_shapes(model, a_norm);
  if (first_layer.rows() != a_norm.rows() || first_layer.cols() != model.w0.cols()) {
    throw Error(ErrorCode::dimension_mismatch, "first-layer product has the wrong shape");
  }
  ForwardCache cache;
  cache.e1_pre = std::move(first_layer);
  cache.e1 = cache.e1_pre;
  for (double& v : cache.e1.data()) v = std::max(v, 0.0);

  if (mode == Mode::training && model.dropout > 0.0) {
    const double keep = 1.0 - model.dropout;
    const double scale = 1.0 / keep;
    cache.dropout_scale.resize(cache.e1.size());
    auto act = cache.e1.data();
    for (std::size_t i = 0; i < act.size(); ++i) {
      cache.dropout_scale[i] = rng.uniform() < keep ? scale : 0.0;
      act[i] *= cache.dropout_scale[i];
    }
  }

  cache.e2 = spmm(a_norm, matmul(cache.e1, model.w1));
  if (!cache.e2.all_finite()) {
    throw Error(ErrorCode::non_finite, "non-finite second-layer activation");
  }
  cache.z = softmax_rows(cache.e2);
  return cache;
}

ForwardCache forward_eval(const GcnModel& model, const SparseMatrix& a_norm) {
  Rng unused(0);
  return forward(model, a_norm, Mode::evaluation, unused);
}

double loss(const ForwardCache& cache, std::span<const std::size_t> mask,
            std::span<const std::size_t> labels) {
  check_mask(mask, labels, cache.z.rows(), cache.z.cols());
  double total = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i) total -= std::log(cache.z(mask[i], labels[i]));
  return total / static_cast<double>(mask.size());
}

Gradients backward(const GcnModel& model, const SparseMatrix& a_norm, const ForwardCache& cache,
                   std::span<const std::size_t> mask, std::span<const std::size_t> labels) {
  check_shapes(model, a_norm);
  const std::size_t n = model.node_count();
  if (cache.z.rows() != n || cache.z.cols() != model.num_classes() || cache.e1.rows() != n ||
      cache.e1.cols() != model.embedding_dim() ||
      (!cache.dropout_scale.empty() && cache.dropout_scale.size() != cache.e1.size())) {
    throw Error(ErrorCode::dimension_mismatch, "forward cache does not match the model");
  }
  check_mask(mask, labels, n, model.num_classes());

  // Softmax + cross-entropy: d loss / d e2 = (z - y) / |mask| on masked rows.
  DenseMatrix grad_e2(n, model.num_classes());
  const double inv = 1.0 / static_cast<double>(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    auto src = cache.z.row(mask[i]);
    auto dst = grad_e2.row(mask[i]);
    for (std::size_t f = 0; f < dst.size(); ++f) dst[f] += src[f] * inv;
    dst[labels[i]] -= inv;
  }

  // e2 = Ã (e1 W1)
  const DenseMatrix grad_q = spmm_transpose(a_norm, grad_e2);
  Gradients g;
  g.w1 = matmul_at(cache.e1, grad_q);
  DenseMatrix grad_h = matmul_bt(grad_q, model.w1);
  auto gh = grad_h.data();
  auto pre = cache.e1_pre.data();
  for (std::size_t i = 0; i < gh.size(); ++i) {
    if (!cache.dropout_scale.empty()) gh[i] *= cache.dropout_scale[i];
    if (!(pre[i] > 0.0)) gh[i] = 0.0;
  }
  // e1_pre = Ã W0
  g.w0 = spmm_transpose(a_norm, grad_h);
  return g;
}

AdamState::AdamState(const GcnModel& model, AdamOptions opts)
    : options(opts),
      m0(model.w0.rows(), model.w0.cols()),
      v0(model.w0.rows(), model.w0.cols()),
      m1(model.w1.rows(), model.w1.cols()),
      v1(model.w1.rows(), model.w1.cols()) {}

namespace {

void adam_update(std::span<double> param, std::span<double> m, std::span<double> v,
                 std::span<const double> grad, const AdamOptions& o, double bc1, double bc2) {
  for (std::size_t i = 0; i < param.size(); ++i) {
    m[i] = o.beta1 * m[i] + (1.0 - o.beta1) * grad[i];
    v[i] = o.beta2 * v[i] + (1.0 - o.beta2) * grad[i] * grad[i];
    const double m_hat = m[i] / bc1;
    const double v_hat = v[i] / bc2;
    param[i] -= o.learning_rate * (m_hat / (std::sqrt(v_hat) + o.epsilon) + o.l2_weight * param[i]);
  }
}

}  // namespace

void adam_step(GcnModel& model, AdamState& state, const Gradients& grads) {
  if (grads.w0.rows() != model.w0.rows() || grads.w0.cols() != model.w0.cols() ||
      grads.w1.rows() != model.w1.rows() || grads.w1.cols() != model.w1.cols() ||
      state.m0.size() != model.w0.size() || state.m1.size() != model.w1.size()) {
    throw Error(ErrorCode::dimension_mismatch, "gradient or optimizer state shape mismatch");
  }
  if (!grads.w0.all_finite() || !grads.w1.all_finite()) {
    throw Error(ErrorCode::non_finite, "non-finite gradient");
  }
  ++state.step;
  const auto t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(state.options.beta1, t);
  const double bc2 = 1.0 - std::pow(state.options.beta2, t);
  adam_update(model.w0.data(), state.m0.data(), state.v0.data(), grads.w0.data(), state.options,
              bc1, bc2);
  adam_update(model.w1.data(), state.m1.data(), state.v1.data(), grads.w1.data(), state.options,
              bc1, bc2);
}

std::size_t argmax(std::span<const double> row) {
  return static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
}

std::vector<std::size_t> predict(const DenseMatrix& z, std::span<const std::size_t> rows) {
  std::vector<std::size_t> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(argmax(z.row(r)));
  return out;
}

}  // namespace textgcn
