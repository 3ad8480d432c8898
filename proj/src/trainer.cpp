#include "textgcn/trainer.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "textgcn/error.hpp"

namespace textgcn {

std::vector<std::uint64_t> TrainConfig::default_seeds(std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  std::iota(seeds.begin(), seeds.end(), std::uint64_t{0});
  return seeds;
}

void TrainConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::invalid_argument, what);
  };
  require(embedding_dim >= 1, "embedding dimension must be positive");
  require(window_size >= 2, "window size must be at least 2");
  require(learning_rate > 0.0 && std::isfinite(learning_rate), "learning rate must be positive");
  require(dropout >= 0.0 && dropout < 1.0, "dropout must lie in [0, 1)");
  require(l2_weight >= 0.0 && std::isfinite(l2_weight), "l2 weight must be non-negative");
  require(max_epochs >= 1, "max epochs must be positive");
  require(patience >= 1 && patience < max_epochs, "patience must lie in [1, max_epochs)");
  require(validation_fraction > 0.0 && validation_fraction < 1.0,
          "validation fraction must lie in (0, 1)");
  require(!seeds.empty(), "at least one seed is required");
  require(label_fraction > 0.0 && label_fraction <= 1.0, "label fraction must lie in (0, 1]");
}

bool EarlyStopping::update(double validation_loss) {
  if (validation_loss < best_) {
    best_ = validation_loss;
    stale_ = 0;
  } else {
    ++stale_;
  }
  return stale_ >= patience_;
}

TrainingSet make_training_set(const Corpus& corpus, double validation_fraction,
                              double label_fraction, std::uint64_t seed) {
  if (!(label_fraction > 0.0 && label_fraction <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "label fraction must lie in (0, 1]");
  }
  const auto split = split_validation(corpus, validation_fraction, seed);
  TrainingSet set;
  set.validation = split.validation;
  set.test = corpus.indices(Split::test);

  if (label_fraction >= 1.0) {
    set.labeled = split.train;
  } else {
    std::vector<std::vector<std::size_t>> by_class(corpus.num_classes());
    for (std::size_t d : split.train) by_class[corpus.document(d).label].push_back(d);
    Rng rng(seed, Stream::label_subsample);
    for (std::size_t c = 0; c < by_class.size(); ++c) {
      auto& members = by_class[c];
      if (members.empty()) {
        throw Error(ErrorCode::invalid_argument,
                    "class '" + corpus.label_names()[c] +
                        "' has no training documents left to subsample");
      }
      auto keep = static_cast<std::size_t>(
          std::llround(label_fraction * static_cast<double>(members.size())));
      keep = std::clamp<std::size_t>(keep, 1, members.size());
      rng.shuffle(std::span<std::size_t>(members));
      set.labeled.insert(set.labeled.end(), members.begin(),
                         members.begin() + static_cast<std::ptrdiff_t>(keep));
    }
    std::sort(set.labeled.begin(), set.labeled.end());
  }

  auto labels_of = [&](const std::vector<std::size_t>& ids) {
    std::vector<std::size_t> out;
    out.reserve(ids.size());
    for (std::size_t d : ids) out.push_back(corpus.document(d).label);
    return out;
  };
  set.labeled_labels = labels_of(set.labeled);
  set.validation_labels = labels_of(set.validation);
  set.test_labels = labels_of(set.test);
  return set;
}

double accuracy(const DenseMatrix& z, std::span<const std::size_t> rows,
                std::span<const std::size_t> labels) {
  if (rows.size() != labels.size()) {
    throw Error(ErrorCode::dimension_mismatch, "rows and labels differ in length");
  }
  if (rows.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (argmax(z.row(rows[i])) == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(rows.size());
}

TrainOutcome train_once(const Corpus& corpus, const TextGraph& graph, const TrainConfig& config,
                        std::uint64_t seed) {
  config.validate();
  if (graph.node_count != corpus.num_nodes() || graph.num_documents != corpus.num_documents()) {
    throw Error(ErrorCode::dimension_mismatch, "graph was not built from this corpus");
  }
  const auto set = make_training_set(corpus, config.validation_fraction, config.label_fraction, seed);
  const auto& a = graph.normalized;

  TrainOutcome out;
  out.model = make_model(graph.node_count, config.embedding_dim, corpus.num_classes(),
                         config.dropout, seed);
  AdamOptions adam;
  adam.learning_rate = config.learning_rate;
  adam.l2_weight = config.l2_weight;
  AdamState state(out.model, adam);
  Rng dropout_rng(seed, Stream::dropout);
  EarlyStopping stopper(config.patience);
  GcnModel best = config.restore_best ? out.model : GcnModel{};

  auto& result = out.result;
  result.seed = seed;
  result.labeled_size = set.labeled.size();
  result.validation_size = set.validation.size();
  // Ã W0 from the previous epoch's evaluation pass; W0 has not changed since.
  std::optional<DenseMatrix> first_layer;
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    EpochRecord rec;
    rec.epoch = epoch;
    try {
      const auto cache = first_layer
                             ? forward(out.model, a, std::move(*first_layer), Mode::training, dropout_rng)
                             : forward(out.model, a, Mode::training, dropout_rng);
      rec.train_loss = loss(cache, set.labeled, set.labeled_labels);
      if (!std::isfinite(rec.train_loss)) throw Error(ErrorCode::non_finite, "training loss");
      adam_step(out.model, state, backward(out.model, a, cache, set.labeled, set.labeled_labels));
      auto eval = forward_eval(out.model, a);
      rec.validation_loss = loss(eval, set.validation, set.validation_labels);
      rec.validation_accuracy = accuracy(eval.z, set.validation, set.validation_labels);
      if (!std::isfinite(rec.validation_loss)) throw Error(ErrorCode::non_finite, "validation loss");
      first_layer = std::move(eval.e1_pre);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::non_finite) throw;
      throw Error(ErrorCode::divergence,
                  fmt::format("training diverged at epoch {} (seed {}): {}", epoch, seed, e.what()));
    }
    result.epochs.push_back(rec);
    result.stopped_epoch = epoch;
    const bool stop = stopper.update(rec.validation_loss);
    if (config.restore_best && stopper.improved()) best = out.model;
    if (stop) break;
  }
  if (config.restore_best) out.model = std::move(best);

  const auto eval = forward_eval(out.model, a);
  result.test_accuracy = accuracy(eval.z, set.test, set.test_labels);
  return out;
}

double evaluate(const GcnModel& model, const TextGraph& graph, const Corpus& corpus, EvalSet which,
                double validation_fraction) {
  const auto eval = forward_eval(model, graph.normalized);
  if (which == EvalSet::test) {
    const auto rows = corpus.indices(Split::test);
    std::vector<std::size_t> labels;
    for (std::size_t d : rows) labels.push_back(corpus.document(d).label);
    return accuracy(eval.z, rows, labels);
  }
  const auto set = make_training_set(corpus, validation_fraction, 1.0, model.seed);
  return accuracy(eval.z, set.validation, set.validation_labels);
}

std::pair<double, double> mean_std(std::span<const double> values) {
  if (values.empty()) return {0.0, 0.0};
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / n)};
}

TrainReport run_replicates(const Corpus& corpus, const TextGraph& graph, const TrainConfig& config) {
  config.validate();
  TrainReport report;
  report.config = config;
  std::vector<double> accs;
  for (std::uint64_t seed : config.seeds) {
    auto outcome = train_once(corpus, graph, config, seed);
    accs.push_back(outcome.result.test_accuracy);
    report.runs.push_back(std::move(outcome.result));
  }
  std::tie(report.mean_accuracy, report.std_accuracy) = mean_std(accs);
  return report;
}

TrainReport run_replicates(const Corpus& corpus, const TrainConfig& config) {
  config.validate();
  return run_replicates(corpus, build_graph(corpus, config.window_size), config);
}

std::vector<SweepRow> label_fraction_sweep(const Corpus& corpus, const TextGraph& graph,
                                           const TrainConfig& config,
                                           std::vector<double> fractions) {
  if (fractions.empty()) throw Error(ErrorCode::invalid_argument, "no label fractions given");
  std::sort(fractions.begin(), fractions.end());
  fractions.erase(std::unique(fractions.begin(), fractions.end()), fractions.end());
  std::vector<SweepRow> rows;
  for (double f : fractions) {
    TrainConfig point = config;
    point.label_fraction = f;
    const auto report = run_replicates(corpus, graph, point);
    rows.push_back({f, report.mean_accuracy, report.std_accuracy});
  }
  return rows;
}

std::string sweep_csv(const std::string& parameter, const std::vector<SweepRow>& rows) {
  std::string out = parameter + ",mean_accuracy,std_accuracy\n";
  for (const auto& r : rows) out += fmt::format("{},{},{}\n", r.value, r.mean, r.std);
  return out;
}

namespace {

nlohmann::ordered_json config_json(const TrainConfig& c) {
  nlohmann::ordered_json j;
  j["embedding_dim"] = c.embedding_dim;
  j["window_size"] = c.window_size;
  j["learning_rate"] = c.learning_rate;
  j["dropout"] = c.dropout;
  j["l2_weight"] = c.l2_weight;
  j["max_epochs"] = c.max_epochs;
  j["patience"] = c.patience;
  j["validation_fraction"] = c.validation_fraction;
  j["label_fraction"] = c.label_fraction;
  j["restore_best"] = c.restore_best;
  j["seeds"] = c.seeds;
  return j;
}

}  // namespace

std::string TrainReport::to_json() const {
  nlohmann::ordered_json j;
  j["config"] = config_json(config);
  j["validation_split"] = "re-drawn from each run's seed";
  auto runs_json = nlohmann::ordered_json::array();
  for (const auto& r : runs) {
    nlohmann::ordered_json rj;
    rj["seed"] = r.seed;
    rj["stopped_epoch"] = r.stopped_epoch;
    rj["labeled_documents"] = r.labeled_size;
    rj["validation_documents"] = r.validation_size;
    rj["test_accuracy"] = r.test_accuracy;
    if (!r.epochs.empty()) {
      rj["final_train_loss"] = r.epochs.back().train_loss;
      rj["final_validation_loss"] = r.epochs.back().validation_loss;
      rj["final_validation_accuracy"] = r.epochs.back().validation_accuracy;
    }
    runs_json.push_back(std::move(rj));
  }
  j["runs"] = std::move(runs_json);
  j["mean_test_accuracy"] = mean_accuracy;
  j["std_test_accuracy"] = std_accuracy;
  return j.dump(2) + "\n";
}

std::string TrainReport::to_table() const {
  std::string out = fmt::format("{:>20}  {:>7}  {:>13}  {:>8}\n", "seed", "epochs", "test_accuracy",
                                "val_loss");
  for (const auto& r : runs) {
    const double val = r.epochs.empty() ? 0.0 : r.epochs.back().validation_loss;
    out += fmt::format("{:>20}  {:>7}  {:>13.4f}  {:>8.4f}\n", r.seed, r.stopped_epoch,
                       r.test_accuracy, val);
  }
  out += fmt::format("mean ± std: {:.4f} ± {:.4f} over {} run(s)\n", mean_accuracy, std_accuracy,
                     runs.size());
  return out;
}

std::string TrainReport::curves_csv(const RunResult& run) {
  std::string out = "epoch,train_loss,val_loss,val_acc\n";
  for (const auto& e : run.epochs) {
    out += fmt::format("{},{},{},{}\n", e.epoch, e.train_loss, e.validation_loss,
                       e.validation_accuracy);
  }
  return out;
}

}  // namespace textgcn
