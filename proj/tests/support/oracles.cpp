#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

DenseMatrix dense_product(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  return out;
}

DenseMatrix dense_transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

DenseMatrix dense_normalize(const DenseMatrix& a) {
  const std::size_t n = a.rows();
  DenseMatrix d_inv_sqrt(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double deg = 0.0;
    for (std::size_t j = 0; j < n; ++j) deg += a(i, j);
    d_inv_sqrt(i, i) = 1.0 / std::sqrt(deg);
  }
  return dense_product(dense_product(d_inv_sqrt, a), d_inv_sqrt);
}

WindowCounts enumerate_windows(const std::vector<std::vector<std::uint32_t>>& docs,
                               std::size_t window_size) {
  WindowCounts out;
  std::uint32_t max_term = 0;
  for (const auto& d : docs)
    for (auto t : d) max_term = std::max(max_term, t);

  for (const auto& doc : docs) {
    std::vector<std::vector<std::uint32_t>> windows;
    if (doc.size() <= window_size) {
      windows.push_back(doc);
    } else {
      for (std::size_t s = 0; s + window_size <= doc.size(); ++s) {
        windows.emplace_back(doc.begin() + static_cast<std::ptrdiff_t>(s),
                             doc.begin() + static_cast<std::ptrdiff_t>(s + window_size));
      }
    }
    for (const auto& w : windows) {
      ++out.total;
      auto contains = [&](std::uint32_t t) { return std::find(w.begin(), w.end(), t) != w.end(); };
      for (std::uint32_t i = 0; i <= max_term; ++i) {
        if (!contains(i)) continue;
        ++out.word[i];
        for (std::uint32_t j = i + 1; j <= max_term; ++j) {
          if (contains(j)) ++out.pair[{i, j}];
        }
      }
    }
  }
  return out;
}

DenseMatrix dense_text_graph(const textgcn::Corpus& corpus, std::size_t window_size) {
  const std::size_t docs = corpus.num_documents();
  const std::size_t terms = corpus.num_terms();
  const std::size_t n = docs + terms;

  std::vector<std::vector<std::uint32_t>> token_lists;
  for (const auto& d : corpus.documents()) token_lists.push_back(d.tokens);
  const auto counts = enumerate_windows(token_lists, window_size);

  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) {
        a(i, j) = 1.0;
      } else if (i >= docs && j >= docs) {
        const auto wi = static_cast<std::uint32_t>(i - docs);
        const auto wj = static_cast<std::uint32_t>(j - docs);
        auto it = counts.pair.find({std::min(wi, wj), std::max(wi, wj)});
        if (it == counts.pair.end()) continue;
        // p(i,j) / (p(i) p(j)) = #W(i,j) #W / (#W(i) #W(j))
        const double value =
            std::log(static_cast<double>(it->second) * static_cast<double>(counts.total) /
                     (static_cast<double>(counts.word.at(wi)) * static_cast<double>(counts.word.at(wj))));
        if (value > 0.0) a(i, j) = value;
      } else if (i < docs && j >= docs) {
        const auto term = static_cast<std::uint32_t>(j - docs);
        const auto& toks = corpus.document(i).tokens;
        const auto tf = std::count(toks.begin(), toks.end(), term);
        std::size_t df = 0;
        for (const auto& d : corpus.documents()) {
          if (std::find(d.tokens.begin(), d.tokens.end(), term) != d.tokens.end()) ++df;
        }
        const double value = static_cast<double>(tf) *
                             std::log(static_cast<double>(docs) / static_cast<double>(df));
        if (value > 0.0) a(i, j) = value;
      } else if (i >= docs && j < docs) {
        const auto term = static_cast<std::uint32_t>(i - docs);
        const auto& toks = corpus.document(j).tokens;
        const auto tf = std::count(toks.begin(), toks.end(), term);
        std::size_t df = 0;
        for (const auto& d : corpus.documents()) {
          if (std::find(d.tokens.begin(), d.tokens.end(), term) != d.tokens.end()) ++df;
        }
        const double value = static_cast<double>(tf) *
                             std::log(static_cast<double>(docs) / static_cast<double>(df));
        if (value > 0.0) a(i, j) = value;
      }
    }
  }
  return a;
}

DenseMatrix dense_gcn_forward(const DenseMatrix& a_norm, const DenseMatrix& w0,
                              const DenseMatrix& w1) {
  const auto x = DenseMatrix::identity(a_norm.rows());
  DenseMatrix hidden = dense_product(dense_product(a_norm, x), w0);
  for (std::size_t i = 0; i < hidden.rows(); ++i)
    for (std::size_t j = 0; j < hidden.cols(); ++j) hidden(i, j) = std::max(0.0, hidden(i, j));
  DenseMatrix logits = dense_product(dense_product(a_norm, hidden), w1);
  DenseMatrix z(logits.rows(), logits.cols());
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < logits.cols(); ++j) total += std::exp(logits(i, j));
    for (std::size_t j = 0; j < logits.cols(); ++j) z(i, j) = std::exp(logits(i, j)) / total;
  }
  return z;
}

double dense_loss(const DenseMatrix& z, const std::vector<std::size_t>& mask,
                  const std::vector<std::size_t>& labels) {
  double total = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    for (std::size_t f = 0; f < z.cols(); ++f) {
      const double y = f == labels[i] ? 1.0 : 0.0;
      if (y != 0.0) total += -y * std::log(z(mask[i], f));
    }
  }
  return total / static_cast<double>(mask.size());
}

std::pair<DenseMatrix, DenseMatrix> finite_difference_gradients(
    const DenseMatrix& a_norm, const DenseMatrix& w0, const DenseMatrix& w1,
    const std::vector<std::size_t>& mask, const std::vector<std::size_t>& labels, double h) {
  auto objective = [&](const DenseMatrix& p0, const DenseMatrix& p1) {
    return dense_loss(dense_gcn_forward(a_norm, p0, p1), mask, labels);
  };
  DenseMatrix g0(w0.rows(), w0.cols()), g1(w1.rows(), w1.cols());
  for (std::size_t i = 0; i < w0.rows(); ++i)
    for (std::size_t j = 0; j < w0.cols(); ++j) {
      DenseMatrix plus = w0, minus = w0;
      plus(i, j) += h;
      minus(i, j) -= h;
      g0(i, j) = (objective(plus, w1) - objective(minus, w1)) / (2 * h);
    }
  for (std::size_t i = 0; i < w1.rows(); ++i)
    for (std::size_t j = 0; j < w1.cols(); ++j) {
      DenseMatrix plus = w1, minus = w1;
      plus(i, j) += h;
      minus(i, j) -= h;
      g1(i, j) = (objective(w0, plus) - objective(w0, minus)) / (2 * h);
    }
  return {g0, g1};
}

double max_relative_error(const DenseMatrix& a, const DenseMatrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / std::max(1.0, std::abs(b(i, j))));
  return worst;
}

double max_strict_relative_error(const DenseMatrix& a, const DenseMatrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double scale = std::max(std::abs(a(i, j)), std::abs(b(i, j)));
      if (scale > 0.0) worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / scale);
    }
  return worst;
}

}  // namespace oracle
