#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <string>
#include <vector>

#include "textgcn/corpus.hpp"
#include "textgcn/gcn.hpp"
#include "textgcn/text_graph.hpp"

namespace textgcn {

struct TrainConfig {
  std::size_t embedding_dim = 200;
  std::size_t window_size = 20;
  double learning_rate = 0.02;
  double dropout = 0.5;
  double l2_weight = 0.0;
  std::size_t max_epochs = 200;
  std::size_t patience = 10;
  double validation_fraction = 0.1;
  std::vector<std::uint64_t> seeds = default_seeds(10);
  double label_fraction = 1.0;
  bool restore_best = false;

  /// Seeds 0, 1, ..., count - 1.
  static std::vector<std::uint64_t> default_seeds(std::size_t count);

  /// Throws invalid_argument when any field is out of range.
  void validate() const;
};

/// Stops after `patience` consecutive epochs whose validation loss is not
/// strictly below the best seen so far.
class EarlyStopping {
 public:
  explicit EarlyStopping(std::size_t patience) : patience_(patience) {}

  /// Records one epoch; returns true when training should stop.
  bool update(double validation_loss);
  bool improved() const { return stale_ == 0; }
  double best() const { return best_; }

 private:
  std::size_t patience_;
  std::size_t stale_ = 0;
  double best_ = std::numeric_limits<double>::infinity();
};

/// Node sets for one run. All index lists are ascending document ids.
struct TrainingSet {
  std::vector<std::size_t> labeled;     // enters the loss
  std::vector<std::size_t> validation;  // drives early stopping
  std::vector<std::size_t> test;
  std::vector<std::size_t> labeled_labels;
  std::vector<std::size_t> validation_labels;
  std::vector<std::size_t> test_labels;
};

/// Validation split from the seed, then (for label_fraction < 1) a stratified
/// subsample of the remaining training documents keeping at least one per class.
TrainingSet make_training_set(const Corpus& corpus, double validation_fraction,
                              double label_fraction, std::uint64_t seed);

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double validation_loss = 0.0;
  double validation_accuracy = 0.0;
};

struct RunResult {
  std::uint64_t seed = 0;
  std::vector<EpochRecord> epochs;
  std::size_t stopped_epoch = 0;
  std::size_t labeled_size = 0;
  std::size_t validation_size = 0;
  double test_accuracy = 0.0;
};

struct TrainOutcome {
  GcnModel model;
  RunResult result;
};

TrainOutcome train_once(const Corpus& corpus, const TextGraph& graph, const TrainConfig& config,
                        std::uint64_t seed);

/// Fraction of `rows` whose argmax prediction equals the label.
double accuracy(const DenseMatrix& z, std::span<const std::size_t> rows,
                std::span<const std::size_t> labels);

enum class EvalSet { validation, test };

/// Evaluation-mode accuracy. The validation set is re-derived from the model's seed.
double evaluate(const GcnModel& model, const TextGraph& graph, const Corpus& corpus, EvalSet which,
                double validation_fraction = 0.1);

struct TrainReport {
  TrainConfig config;
  std::vector<RunResult> runs;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;

  std::string to_json() const;
  std::string to_table() const;
  /// `epoch,train_loss,val_loss,val_acc` for one run.
  static std::string curves_csv(const RunResult& run);
};

/// Population mean and standard deviation.
std::pair<double, double> mean_std(std::span<const double> values);

/// Trains once per seed on a shared graph. Runs are ordered by seed list.
TrainReport run_replicates(const Corpus& corpus, const TextGraph& graph, const TrainConfig& config);
TrainReport run_replicates(const Corpus& corpus, const TrainConfig& config);

struct SweepRow {
  double value = 0.0;
  double mean = 0.0;
  double std = 0.0;
};

std::vector<SweepRow> label_fraction_sweep(const Corpus& corpus, const TextGraph& graph,
                                           const TrainConfig& config,
                                           std::vector<double> fractions);

std::string sweep_csv(const std::string& parameter, const std::vector<SweepRow>& rows);

}  // namespace textgcn
