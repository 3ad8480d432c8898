#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include "textgcn/gcn.hpp"
#include "textgcn/trainer.hpp"

namespace textgcn {

/// Saved model plus what is needed to rebuild its graph and splits.
///
/// JSON layout (version 1):
///   format               "textgcn-checkpoint"
///   version              1
///   node_count           n
///   embedding_dim        k
///   num_classes          F
///   seed                 training seed (drives init, dropout and splits)
///   epochs_trained       0 for an untrained model
///   hyperparameters      {window_size, learning_rate, dropout, l2_weight,
///                         validation_fraction, label_fraction}
///   w0, w1               {rows, cols, data: row-major numbers}
/// Numbers are written in shortest round-trip form, so save/load is lossless.
struct Checkpoint {
  GcnModel model;
  std::size_t epochs_trained = 0;
  std::size_t window_size = 20;
  double learning_rate = 0.02;
  double l2_weight = 0.0;
  double validation_fraction = 0.1;
  double label_fraction = 1.0;

  static Checkpoint from_training(const GcnModel& model, const TrainConfig& config,
                                  std::size_t epochs_trained);
};

std::string to_json(const Checkpoint& checkpoint);
Checkpoint checkpoint_from_json(const std::string& text);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace textgcn
