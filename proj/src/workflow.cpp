#include "acnn/workflow.hpp"

#include "acnn/explain.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <numeric>

namespace acnn {

namespace fs = std::filesystem;

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::vector<LabeledSentence> read_required(const std::string& path, int class_count,
                                           const char* which) {
  if (path.empty()) throw ConfigError(std::string("no ") + which + " dataset path configured");
  if (!fs::exists(path)) {
    throw ConfigError(std::string(which) + " dataset not found: " + path);
  }
  return read_labeled_tsv(path, class_count);
}

ModelConfig finalize_model_config(const RunConfig& cfg, int class_count, int max_length) {
  ModelConfig mcfg = cfg.model;
  mcfg.channels = channel_count(cfg.embedding.variant);
  mcfg.embedding_dim = cfg.embedding.dim;
  mcfg.class_count = class_count;
  mcfg.max_length = max_length;
  try {
    mcfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return mcfg;
}

std::string sanitize_for_filename(const std::string& word) {
  std::string out;
  for (char c : word) {
    const unsigned char u = static_cast<unsigned char>(c);
    out.push_back(std::isalnum(u) ? c : '_');
  }
  return out.empty() ? "_" : out;
}

}  // namespace

std::string resolve_out_dir(const RunConfig& cfg) {
  std::string dir = cfg.out_dir;
  if (dir.empty()) {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y%m%d-%H%M%S", &tm);
    dir = std::string("runs/") + stamp + "-seed" + std::to_string(cfg.train.seed);
  }
  fs::create_directories(dir);
  return dir;
}

TrainArtifacts run_train(const RunConfig& cfg, const std::string& out_dir) {
  if (cfg.train.protocol.kind == Protocol::Kind::kfold) {
    throw ConfigError(
        "train produces a single model and expects a holdout protocol; "
        "use sweep for k-fold studies");
  }
  auto raw = read_required(cfg.train_path, cfg.class_count, "training");
  const int s_max = cfg.s_max > 0 ? cfg.s_max : percentile_length(raw);
  auto vocab = std::make_shared<Vocabulary>(build_vocab(raw, cfg.min_count));
  Dataset all = encode_all(raw, cfg.class_count, vocab, s_max);

  const ModelConfig mcfg = finalize_model_config(cfg, cfg.class_count, s_max);
  TrainConfig tcfg = cfg.train;
  try {
    tcfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  Rng rng(tcfg.seed);

  // carve a validation split when the holdout fraction is positive
  Dataset train_set = all;
  Dataset val_set;
  bool has_val = false;
  if (tcfg.protocol.fraction > 0.0 && all.size() >= 2) {
    std::vector<size_t> order(all.size());
    std::iota(order.begin(), order.end(), size_t{0});
    Rng split_rng = rng.derive(0);
    split_rng.shuffle(order);
    size_t n_val = static_cast<size_t>(
        std::llround(tcfg.protocol.fraction * static_cast<double>(all.size())));
    n_val = std::clamp<size_t>(n_val, 1, all.size() - 1);
    val_set.class_count = train_set.class_count = all.class_count;
    val_set.max_length = train_set.max_length = all.max_length;
    val_set.vocab = train_set.vocab = all.vocab;
    train_set.sentences.clear();
    for (size_t i = 0; i < order.size(); ++i) {
      auto& dst = i < n_val ? val_set : train_set;
      dst.sentences.push_back(all.sentences[order[i]]);
    }
    has_val = true;
  }

  TrainArtifacts artifacts;
  artifacts.model.config = mcfg;
  Rng channel_rng = rng.derive(1);
  Rng param_rng = rng.derive(2);
  Rng train_rng = rng.derive(3);
  artifacts.model.channels = make_channels(cfg.embedding, *vocab, channel_rng);
  artifacts.model.params = init_params(mcfg, param_rng);
  artifacts.model.vocab = vocab;

  artifacts.result = train(train_set, has_val ? &val_set : nullptr, artifacts.model.channels,
                           artifacts.model.params, mcfg, tcfg, train_rng);

  if (!cfg.test_path.empty()) {
    auto test_raw = read_required(cfg.test_path, cfg.class_count, "test");
    Dataset test_set = encode_all(test_raw, cfg.class_count, vocab, s_max);
    artifacts.final_report =
        evaluate(test_set, artifacts.model.channels, artifacts.model.params, mcfg);
  } else if (has_val) {
    artifacts.final_report =
        evaluate(val_set, artifacts.model.channels, artifacts.model.params, mcfg);
  } else {
    artifacts.final_report =
        evaluate(train_set, artifacts.model.channels, artifacts.model.params, mcfg);
  }

  artifacts.checkpoint_path = out_dir + "/checkpoint.json";
  artifacts.history_path = out_dir + "/history.csv";
  artifacts.report_path = out_dir + "/report.csv";
  save_checkpoint(artifacts.model, artifacts.checkpoint_path);
  write_file(artifacts.history_path, history_csv(artifacts.result.history));
  write_file(artifacts.report_path, report_csv(artifacts.final_report));
  return artifacts;
}

EvaluateArtifacts run_evaluate(const RunConfig& cfg, const std::string& out_dir) {
  if (cfg.checkpoint_path.empty()) throw ConfigError("evaluate needs a checkpoint path");
  TrainedModel model = load_checkpoint(cfg.checkpoint_path);

  const std::string data_path = cfg.test_path.empty() ? cfg.train_path : cfg.test_path;
  auto raw = read_required(data_path, cfg.class_count, "evaluation");
  if (cfg.class_count != model.config.class_count) {
    throw ConfigError("dataset has " + std::to_string(cfg.class_count) +
                      " classes but the checkpoint was trained with " +
                      std::to_string(model.config.class_count));
  }

  EvaluateArtifacts artifacts;
  const Vocabulary dataset_vocab = build_vocab(raw, 1);
  if (dataset_vocab.digest() != model.vocab->digest()) {
    if (!cfg.adapt) {
      throw std::runtime_error(
          "vocabulary digest mismatch between checkpoint and dataset; "
          "re-run with --adapt to merge vocabularies");
    }
    std::fprintf(stderr,
                 "warning: vocabulary digest mismatch; adapting checkpoint vocabulary\n");
    Rng rng(cfg.train.seed);
    AdaptedModel adapted = adapt_vocabulary(model, raw, rng);
    model.vocab = adapted.vocab;
    model.channels = std::move(adapted.channels);
    artifacts.adapted = true;
  }

  Dataset data = encode_all(raw, cfg.class_count, model.vocab, model.config.max_length);
  artifacts.report = evaluate(data, model.channels, model.params, model.config);
  artifacts.report_path = out_dir + "/report.csv";
  write_file(artifacts.report_path, report_csv(artifacts.report));
  return artifacts;
}

TransferArtifacts run_transfer(const RunConfig& cfg, const std::string& out_dir) {
  if (cfg.checkpoint_path.empty()) throw ConfigError("transfer needs a source checkpoint path");

  TransferPlan plan;
  plan.source = load_checkpoint(cfg.checkpoint_path);
  plan.target_class_count = cfg.class_count;
  plan.target_test = read_required(cfg.test_path, cfg.class_count, "target test");
  if (!cfg.train_path.empty()) {
    plan.target_train = read_required(cfg.train_path, cfg.class_count, "target training");
  }
  plan.finetune = cfg.train;
  plan.seed = cfg.train.seed;
  plan.target_max_length = cfg.s_max;

  if (cfg.head_policy == "auto") {
    plan.head = plan.target_class_count == plan.source.config.class_count ? HeadPolicy::keep
                                                                          : HeadPolicy::reinit;
  } else {
    plan.head = parse_head_policy(cfg.head_policy);
  }

  std::vector<TransferMode> modes;
  if (cfg.both_modes) {
    modes = {TransferMode::direct, TransferMode::incremental};
  } else {
    modes = {parse_transfer_mode(cfg.transfer_mode)};
  }

  TransferArtifacts artifacts;
  for (TransferMode mode : modes) {
    plan.mode = mode;
    try {
      plan.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (mode == TransferMode::direct) {
      artifacts.rows.emplace_back("direct", transfer_direct(plan));
    } else {
      auto [model, report] = transfer_incremental(plan);
      artifacts.checkpoint_path = out_dir + "/checkpoint.json";
      save_checkpoint(model, artifacts.checkpoint_path);
      artifacts.rows.emplace_back("incremental", std::move(report));
    }
  }

  std::string csv = "mode,accuracy,mean_loss,total\n";
  for (const auto& [name, report] : artifacts.rows) {
    csv += name + "," + csv_num(report.accuracy) + "," + csv_num(report.mean_loss) + "," +
           std::to_string(report.total) + "\n";
  }
  artifacts.csv_path = out_dir + "/transfer.csv";
  write_file(artifacts.csv_path, csv);
  return artifacts;
}

ExplainArtifacts run_explain(const RunConfig& cfg, const std::string& out_dir) {
  if (cfg.checkpoint_path.empty()) throw ConfigError("explain needs a checkpoint path");
  if (cfg.words.empty()) throw ConfigError("explain needs at least one word");
  TrainedModel model = load_checkpoint(cfg.checkpoint_path);

  const std::string data_path = cfg.test_path.empty() ? cfg.train_path : cfg.test_path;
  auto raw = read_required(data_path, cfg.class_count, "explain");
  if (cfg.class_count != model.config.class_count) {
    throw ConfigError("dataset class count does not match the checkpoint");
  }
  Dataset data = encode_all(raw, cfg.class_count, model.vocab, model.config.max_length);

  const ReportFormat format = parse_report_format(cfg.report_format);
  const char* ext = format == ReportFormat::csv ? ".csv" : ".jsonl";

  ExplainArtifacts artifacts;
  for (const auto& word : cfg.words) {
    try {
      WordWeightReport report =
          word_distribution(model.params, model.channels, model.config, data, word, cfg.bins);
      const std::string path = out_dir + "/explain_" + sanitize_for_filename(word) + ext;
      export_report(report, path, format);
      artifacts.written.push_back(path);
    } catch (const std::invalid_argument& e) {
      artifacts.failed.push_back(word + ": " + e.what());
    }
  }
  if (artifacts.written.empty()) {
    throw std::runtime_error("explain: no word produced a report (" +
                             std::to_string(artifacts.failed.size()) + " failed)");
  }
  return artifacts;
}

SweepArtifacts run_sweep(const RunConfig& cfg, const std::string& out_dir) {
  if (cfg.axis.empty()) throw ConfigError("sweep needs an axis");
  SweepAxis axis;
  std::vector<std::string> values;
  try {
    axis = parse_sweep_axis(cfg.axis);
    values = split_sweep_values(axis, cfg.values);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  auto raw = read_required(cfg.train_path, cfg.class_count, "training");
  const int s_max = cfg.s_max > 0 ? cfg.s_max : percentile_length(raw);
  auto vocab = std::make_shared<Vocabulary>(build_vocab(raw, cfg.min_count));
  Dataset data = encode_all(raw, cfg.class_count, vocab, s_max);

  const ModelConfig mcfg = finalize_model_config(cfg, cfg.class_count, s_max);

  SweepArtifacts artifacts;
  try {
    artifacts.rows = sweep(data, cfg.embedding, mcfg, cfg.train, axis, values);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  artifacts.table = sweep_table(axis, artifacts.rows);
  artifacts.csv_path = out_dir + "/sweep.csv";
  write_file(artifacts.csv_path, sweep_csv(axis, artifacts.rows));
  return artifacts;
}

}  // namespace acnn
