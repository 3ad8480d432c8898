#include "textgcn/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "textgcn/error.hpp"

namespace textgcn {

namespace {

constexpr const char* kFormat = "textgcn-checkpoint";
constexpr int kVersion = 1;

nlohmann::ordered_json matrix_json(const DenseMatrix& m) {
  nlohmann::ordered_json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["data"] = std::vector<double>(m.data().begin(), m.data().end());
  return j;
}

DenseMatrix matrix_from(const nlohmann::json& j) {
  return DenseMatrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                     j.at("data").get<std::vector<double>>());
}

}  // namespace

Checkpoint Checkpoint::from_training(const GcnModel& model, const TrainConfig& config,
                                     std::size_t epochs_trained) {
  Checkpoint c;
  c.model = model;
  c.epochs_trained = epochs_trained;
  c.window_size = config.window_size;
  c.learning_rate = config.learning_rate;
  c.l2_weight = config.l2_weight;
  c.validation_fraction = config.validation_fraction;
  c.label_fraction = config.label_fraction;
  return c;
}

std::string to_json(const Checkpoint& c) {
  nlohmann::ordered_json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["node_count"] = c.model.node_count();
  j["embedding_dim"] = c.model.embedding_dim();
  j["num_classes"] = c.model.num_classes();
  j["seed"] = c.model.seed;
  j["epochs_trained"] = c.epochs_trained;
  j["hyperparameters"] = {{"window_size", c.window_size},
                          {"learning_rate", c.learning_rate},
                          {"dropout", c.model.dropout},
                          {"l2_weight", c.l2_weight},
                          {"validation_fraction", c.validation_fraction},
                          {"label_fraction", c.label_fraction}};
  j["w0"] = matrix_json(c.model.w0);
  j["w1"] = matrix_json(c.model.w1);
  return j.dump() + "\n";
}

Checkpoint checkpoint_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format").get<std::string>() != kFormat) {
      throw Error(ErrorCode::parse, "not a textgcn checkpoint");
    }
    if (j.at("version").get<int>() != kVersion) {
      throw Error(ErrorCode::parse, "unsupported checkpoint version");
    }
    Checkpoint c;
    const auto& h = j.at("hyperparameters");
    c.model.w0 = matrix_from(j.at("w0"));
    c.model.w1 = matrix_from(j.at("w1"));
    c.model.dropout = h.at("dropout").get<double>();
    c.model.seed = j.at("seed").get<std::uint64_t>();
    c.epochs_trained = j.at("epochs_trained").get<std::size_t>();
    c.window_size = h.at("window_size").get<std::size_t>();
    c.learning_rate = h.at("learning_rate").get<double>();
    c.l2_weight = h.at("l2_weight").get<double>();
    c.validation_fraction = h.at("validation_fraction").get<double>();
    c.label_fraction = h.at("label_fraction").get<double>();
    if (c.model.node_count() != j.at("node_count").get<std::size_t>() ||
        c.model.embedding_dim() != j.at("embedding_dim").get<std::size_t>() ||
        c.model.w1.rows() != c.model.embedding_dim() ||
        c.model.num_classes() != j.at("num_classes").get<std::size_t>()) {
      throw Error(ErrorCode::dimension_mismatch, "checkpoint dimensions are inconsistent");
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, std::string("bad checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out << to_json(checkpoint);
  if (!out) throw Error(ErrorCode::io, "write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return checkpoint_from_json(buf.str());
}

}  // namespace textgcn
