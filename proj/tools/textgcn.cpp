// Command-line front end: one subcommand per reproducible artifact.

#include <fmt/format.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "textgcn/analysis.hpp"
#include "textgcn/baseline.hpp"
#include "textgcn/checkpoint.hpp"
#include "textgcn/corpus.hpp"
#include "textgcn/error.hpp"
#include "textgcn/matrix_market.hpp"
#include "textgcn/text_graph.hpp"
#include "textgcn/trainer.hpp"

namespace fs = std::filesystem;
using namespace textgcn;

namespace {

struct CorpusArgs {
  std::string docs;
  std::string meta;
  std::size_t min_term_freq = 5;
  bool no_filter = false;
  std::string stopwords;

  PreprocessOptions options() const {
    PreprocessOptions o;
    o.filter_enabled = !no_filter;
    o.min_term_freq = min_term_freq;
    o.stopwords_path = stopwords;
    return o;
  }
  Corpus load() const { return build_corpus(docs, meta, options()); }
};

struct TrainArgs {
  TrainConfig config;
  std::string seeds = "10";
  std::optional<std::uint64_t> seed;

  TrainConfig resolve() const {
    TrainConfig c = config;
    if (seed) {
      c.seeds = {*seed};
    } else if (seeds.find(',') != std::string::npos) {
      c.seeds.clear();
      std::stringstream ss(seeds);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (!item.empty()) c.seeds.push_back(std::stoull(item));
      }
    } else {
      c.seeds = TrainConfig::default_seeds(std::stoull(seeds));
    }
    c.validate();
    return c;
  }
};

void add_corpus_options(CLI::App* cmd, CorpusArgs& args) {
  cmd->add_option("--docs", args.docs, "Documents file, one raw document per line")->required();
  cmd->add_option("--meta", args.meta, "Metadata file, name<TAB>split<TAB>label per line")->required();
  cmd->add_option("--min-term-freq", args.min_term_freq, "Drop terms rarer than this")
      ->capture_default_str();
  cmd->add_flag("--no-filter", args.no_filter, "Keep every token (short-text corpora)");
  cmd->add_option("--stopwords", args.stopwords, "Stop-word list (default: bundled English list)");
}

void add_train_options(CLI::App* cmd, TrainArgs& args) {
  auto& c = args.config;
  cmd->add_option("--embedding-dim", c.embedding_dim)->capture_default_str();
  cmd->add_option("--window-size", c.window_size)->capture_default_str();
  cmd->add_option("--lr", c.learning_rate)->capture_default_str();
  cmd->add_option("--dropout", c.dropout)->capture_default_str();
  cmd->add_option("--l2", c.l2_weight)->capture_default_str();
  cmd->add_option("--max-epochs", c.max_epochs)->capture_default_str();
  cmd->add_option("--patience", c.patience)->capture_default_str();
  cmd->add_option("--val-fraction", c.validation_fraction)->capture_default_str();
  cmd->add_option("--seeds", args.seeds, "Seed count n (seeds 0..n-1) or comma-separated list")
      ->capture_default_str();
  cmd->add_option("--seed", args.seed, "Single run seed (overrides --seeds)");
  cmd->add_option("--label-fraction", c.label_fraction)->capture_default_str();
  cmd->add_flag("--restore-best", c.restore_best, "Keep the best-validation-loss model");
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::io, "write failed for " + path.string());
}

std::vector<double> parse_doubles(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_argument, "not a number: " + item);
    }
  }
  return out;
}

/// Loads `key=value` lines and turns them into `--key value` arguments for
/// every key the command line does not already set.
std::vector<std::string> config_arguments(const std::string& path, CLI::App* cmd,
                                          const std::vector<std::string>& given) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot read config file " + path);
  std::set<std::string> present;
  for (const auto& a : given) {
    if (a.starts_with("--")) present.insert(a.substr(0, a.find('=')));
  }
  std::vector<std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::parse, fmt::format("config line {}: expected key=value", line_no));
    }
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(' '));
      s.erase(s.find_last_not_of(' ') + 1);
      return s;
    };
    const std::string key = "--" + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    CLI::Option* opt = nullptr;
    try {
      opt = cmd->get_option(key);
    } catch (const CLI::OptionNotFound&) {
      throw Error(ErrorCode::parse, fmt::format("config line {}: unknown key '{}'", line_no, key.substr(2)));
    }
    if (present.contains(key)) continue;
    if (opt->get_expected_min() == 0) {
      if (value == "true" || value == "1") out.push_back(key);
    } else {
      out.push_back(key);
      out.push_back(value);
    }
  }
  return out;
}

void print_error(ErrorCode code, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = to_string(code);
  j["message"] = message;
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Text graph convolutional network: graph construction, training and analysis"};
  app.require_subcommand(1);
  std::string config_file;

  CorpusArgs corpus_args;
  TrainArgs train_args;
  std::string output;
  std::string checkpoint_path;

  auto* build = app.add_subcommand("build-graph", "Build the document/word graph");
  auto* train = app.add_subcommand("train", "Train replicated runs and report test accuracy");
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Accuracy of a saved checkpoint");
  auto* sweep_cmd = app.add_subcommand("sweep", "Window-size or embedding-dimension sweep");
  auto* label_sweep = app.add_subcommand("label-sweep", "Accuracy versus labeled-data fraction");
  auto* export_cmd = app.add_subcommand("export-embeddings", "Write node embeddings as TSV");
  auto* top_cmd = app.add_subcommand("top-words", "Highest-valued words per class");
  auto* baseline_cmd = app.add_subcommand("baseline", "TF-IDF + logistic regression baseline");

  std::vector<CLI::App*> all{build, train, evaluate_cmd, sweep_cmd, label_sweep, export_cmd, top_cmd, baseline_cmd};
  for (auto* cmd : all) {
    add_corpus_options(cmd, corpus_args);
    cmd->add_option("--config", config_file, "Flat key=value file; flags override it");
  }

  build->add_option("--window-size", train_args.config.window_size)->capture_default_str();
  build->add_option("--output", output, "Output directory")->required();

  add_train_options(train, train_args);
  train->add_option("--output", output, "Output directory")->required();

  std::string which = "test";
  evaluate_cmd->add_option("--checkpoint", checkpoint_path)->required();
  evaluate_cmd->add_option("--which", which)->check(CLI::IsMember({"validation", "test"}))->capture_default_str();

  std::string parameter;
  std::string values;
  add_train_options(sweep_cmd, train_args);
  sweep_cmd->add_option("--parameter", parameter)
      ->required()
      ->check(CLI::IsMember({"window_size", "embedding_dim"}));
  sweep_cmd->add_option("--values", values, "Comma-separated values")->required();
  sweep_cmd->add_option("--output", output, "CSV output file")->required();

  std::string fractions;
  add_train_options(label_sweep, train_args);
  label_sweep->add_option("--fractions", fractions, "Comma-separated label fractions")->required();
  label_sweep->add_option("--output", output, "CSV output file")->required();

  std::string layer = "second";
  export_cmd->add_option("--checkpoint", checkpoint_path)->required();
  export_cmd->add_option("--layer", layer)->check(CLI::IsMember({"first", "second"}))->capture_default_str();
  export_cmd->add_option("--output", output, "TSV output file")->required();

  std::size_t top_k = 10;
  top_cmd->add_option("--checkpoint", checkpoint_path)->required();
  top_cmd->add_option("--top-k", top_k)->capture_default_str();
  top_cmd->add_option("--output", output, "TSV output file")->required();

  baseline_cmd->add_option("--seeds", train_args.seeds)->capture_default_str();
  baseline_cmd->add_option("--seed", train_args.seed);
  baseline_cmd->add_option("--val-fraction", train_args.config.validation_fraction)->capture_default_str();
  baseline_cmd->add_option("--label-fraction", train_args.config.label_fraction)->capture_default_str();
  baseline_cmd->add_option("--output", output, "JSON output file")->required();

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    // A --config file contributes arguments for keys not given on the command line.
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
      if (args[i] != "--config") continue;
      CLI::App* cmd = nullptr;
      for (auto* c : all) {
        if (!args.empty() && c->get_name() == args[0]) cmd = c;
      }
      if (cmd == nullptr) break;
      auto extra = config_arguments(args[i + 1], cmd, args);
      args.insert(args.begin() + 1, extra.begin(), extra.end());
      break;
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error(ErrorCode::invalid_argument, e.what());
    return e.get_exit_code() == 0 ? 1 : e.get_exit_code();
  } catch (const Error& e) {
    print_error(e.code(), e.what());
    return 2;
  }

  try {
    const Corpus corpus = corpus_args.load();

    if (build->parsed()) {
      const auto graph = build_graph(corpus, train_args.config.window_size);
      const fs::path dir(output);
      fs::create_directories(dir);
      write_matrix_market(dir / "adjacency.mtx", graph.adjacency, MatrixMarketSymmetry::symmetric);
      write_matrix_market(dir / "normalized.mtx", graph.normalized, MatrixMarketSymmetry::symmetric);
      write_node_map((dir / "nodes.tsv").string(), corpus);
      write_text(dir / "summary.json", graph.summary.to_json() + "\n");
      std::cout << graph.summary.to_json() << '\n';
    } else if (train->parsed()) {
      const auto config = train_args.resolve();
      const auto graph = build_graph(corpus, config.window_size);
      const fs::path dir(output);
      fs::create_directories(dir);
      TrainReport report;
      report.config = config;
      std::vector<double> accs;
      for (auto seed : config.seeds) {
        auto outcome = train_once(corpus, graph, config, seed);
        std::cerr << fmt::format("seed {}: {} epochs, test accuracy {:.4f}\n", seed,
                                 outcome.result.stopped_epoch, outcome.result.test_accuracy);
        write_text(dir / fmt::format("curves_seed{}.csv", seed), TrainReport::curves_csv(outcome.result));
        save_checkpoint(dir / fmt::format("model_seed{}.json", seed),
                        Checkpoint::from_training(outcome.model, config, outcome.result.stopped_epoch));
        accs.push_back(outcome.result.test_accuracy);
        report.runs.push_back(std::move(outcome.result));
      }
      std::tie(report.mean_accuracy, report.std_accuracy) = mean_std(accs);
      write_text(dir / "report.json", report.to_json());
      write_text(dir / "report.txt", report.to_table());
      std::cout << report.to_table();
    } else if (evaluate_cmd->parsed()) {
      const auto ckpt = load_checkpoint(checkpoint_path);
      const auto graph = build_graph(corpus, ckpt.window_size);
      const double acc = evaluate(ckpt.model, graph, corpus,
                                  which == "test" ? EvalSet::test : EvalSet::validation,
                                  ckpt.validation_fraction);
      nlohmann::ordered_json j;
      j["which"] = which;
      j["accuracy"] = acc;
      std::cout << j.dump() << '\n';
    } else if (sweep_cmd->parsed()) {
      const auto config = train_args.resolve();
      std::vector<std::size_t> points;
      for (double v : parse_doubles(values)) {
        if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v))) {
          throw Error(ErrorCode::invalid_argument, "sweep values must be positive integers");
        }
        points.push_back(static_cast<std::size_t>(v));
      }
      const auto param = parameter == "window_size" ? SweepParameter::window_size
                                                    : SweepParameter::embedding_dim;
      const auto csv = sweep_csv(parameter, sweep(corpus, config, param, points));
      write_text(output, csv);
      std::cout << csv;
    } else if (label_sweep->parsed()) {
      const auto config = train_args.resolve();
      const auto graph = build_graph(corpus, config.window_size);
      const auto csv = sweep_csv("label_fraction",
                                 label_fraction_sweep(corpus, graph, config, parse_doubles(fractions)));
      write_text(output, csv);
      std::cout << csv;
    } else if (export_cmd->parsed()) {
      const auto ckpt = load_checkpoint(checkpoint_path);
      const auto graph = build_graph(corpus, ckpt.window_size);
      const auto exported = export_embeddings(
          ckpt.model, graph, corpus, layer == "first" ? EmbeddingLayer::first : EmbeddingLayer::second,
          ckpt.epochs_trained == 0);
      std::ostringstream tsv;
      exported.write_tsv(tsv);
      write_text(output, tsv.str());
    } else if (top_cmd->parsed()) {
      const auto ckpt = load_checkpoint(checkpoint_path);
      const auto graph = build_graph(corpus, ckpt.window_size);
      const auto tsv = top_words(ckpt.model, graph, corpus, top_k).to_tsv();
      write_text(output, tsv);
      std::cout << tsv;
    } else if (baseline_cmd->parsed()) {
      const auto config = train_args.resolve();
      nlohmann::ordered_json j;
      auto runs = nlohmann::ordered_json::array();
      std::vector<double> accs;
      for (auto seed : config.seeds) {
        const auto r = tfidf_lr_baseline(corpus, seed, config.validation_fraction, config.label_fraction);
        runs.push_back({{"seed", seed},
                        {"test_accuracy", r.test_accuracy},
                        {"validation_accuracy", r.validation_accuracy},
                        {"l2", r.chosen_l2}});
        accs.push_back(r.test_accuracy);
      }
      const auto [mean, sd] = mean_std(accs);
      j["label_fraction"] = config.label_fraction;
      j["runs"] = std::move(runs);
      j["mean_test_accuracy"] = mean;
      j["std_test_accuracy"] = sd;
      write_text(output, j.dump(2) + "\n");
      std::cout << fmt::format("TF-IDF + LR: {:.4f} ± {:.4f}\n", mean, sd);
    }
  } catch (const Error& e) {
    print_error(e.code(), e.what());
    return 2;
  } catch (const std::exception& e) {
    print_error(ErrorCode::invalid_argument, e.what());
    return 2;
  }
  return 0;
}
