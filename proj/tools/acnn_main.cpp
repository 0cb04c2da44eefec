#include <cstdio>
#include <exception>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "acnn/workflow.hpp"

namespace {

using acnn::RunConfig;

struct CommonFlags {
  std::string config_path;
  std::string preset;
  std::vector<std::string> overrides;
  uint64_t seed = 0;
  bool seed_given = false;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "INI-style configuration file");
  cmd->add_option("--preset", flags.preset, "configuration preset: baseline or optimal");
  cmd->add_option("--set", flags.overrides, "override a config key: section.key=value")
      ->take_all();
  cmd->add_option("--seed", flags.seed, "random seed")->each([&flags](const std::string&) {
    flags.seed_given = true;
  });
  cmd->add_option("--out", flags.out_dir, "run output directory");
}

RunConfig build_config(const CommonFlags& flags) {
  RunConfig cfg = acnn::default_run_config();
  if (!flags.preset.empty()) acnn::apply_preset(cfg, flags.preset);
  if (!flags.config_path.empty()) acnn::load_config_file(cfg, flags.config_path);
  for (const auto& assignment : flags.overrides) acnn::apply_override(cfg, assignment);
  if (flags.seed_given) cfg.train.seed = flags.seed;
  if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
  return cfg;
}

void write_error_log(const std::string& out_dir, const std::string& command,
                     const std::string& message, int exit_code) {
  if (out_dir.empty()) return;
  try {
    nlohmann::json j{{"command", command}, {"error", message}, {"exit_code", exit_code}};
    std::ofstream out(out_dir + "/error.json", std::ios::binary);
    out << j.dump() << "\n";
  } catch (...) {
    // the diagnostic on stderr already carries the message
  }
}

int fail(const std::string& command, const std::string& out_dir, const std::string& message,
         int exit_code) {
  std::fprintf(stderr, "acnn %s: error: %s\n", command.c_str(), message.c_str());
  write_error_log(out_dir, command, message, exit_code);
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"convolutional sentence classifier with a per-region attention layer"};
  app.require_subcommand(1);

  CommonFlags train_flags, eval_flags, transfer_flags, explain_flags, sweep_flags;

  auto* cmd_train = app.add_subcommand("train", "train a model and write a checkpoint");
  add_common(cmd_train, train_flags);
  std::string train_data, train_test;
  int train_classes = 0;
  cmd_train->add_option("--train", train_data, "training TSV (label<TAB>text)");
  cmd_train->add_option("--test", train_test, "optional test TSV for the final report");
  cmd_train->add_option("--classes", train_classes, "number of classes");

  auto* cmd_evaluate = app.add_subcommand("evaluate", "evaluate a checkpoint on a dataset");
  add_common(cmd_evaluate, eval_flags);
  std::string eval_checkpoint, eval_data;
  int eval_classes = 0;
  bool eval_adapt = false;
  cmd_evaluate->add_option("--checkpoint", eval_checkpoint, "checkpoint file");
  cmd_evaluate->add_option("--data", eval_data, "evaluation TSV");
  cmd_evaluate->add_option("--classes", eval_classes, "number of classes");
  cmd_evaluate->add_flag("--adapt", eval_adapt,
                         "merge vocabularies when the dataset differs from the checkpoint");

  auto* cmd_transfer = app.add_subcommand("transfer", "transfer a source model to a target domain");
  add_common(cmd_transfer, transfer_flags);
  std::string tr_checkpoint, tr_train, tr_test, tr_mode, tr_head;
  int tr_classes = 0;
  bool tr_both = false;
  cmd_transfer->add_option("--checkpoint", tr_checkpoint, "source checkpoint");
  cmd_transfer->add_option("--target-train", tr_train, "target training TSV");
  cmd_transfer->add_option("--target-test", tr_test, "target test TSV");
  cmd_transfer->add_option("--classes", tr_classes, "target class count");
  cmd_transfer->add_option("--mode", tr_mode, "direct or incremental");
  cmd_transfer->add_option("--head", tr_head, "head policy: auto, keep, or reinit");
  cmd_transfer->add_flag("--both", tr_both, "run both modes and emit a comparison row each");

  auto* cmd_explain = app.add_subcommand("explain", "per-word attention weight reports");
  add_common(cmd_explain, explain_flags);
  std::string ex_checkpoint, ex_data, ex_words, ex_format;
  int ex_classes = 0, ex_bins = 0;
  cmd_explain->add_option("--checkpoint", ex_checkpoint, "checkpoint file");
  cmd_explain->add_option("--data", ex_data, "dataset TSV");
  cmd_explain->add_option("--classes", ex_classes, "number of classes");
  cmd_explain->add_option("--words", ex_words, "comma-separated word list");
  cmd_explain->add_option("--bins", ex_bins, "histogram bin count");
  cmd_explain->add_option("--format", ex_format, "csv or json-lines");

  auto* cmd_sweep = app.add_subcommand("sweep", "hyperparameter sensitivity sweep");
  add_common(cmd_sweep, sweep_flags);
  std::string sw_data, sw_axis, sw_values;
  int sw_classes = 0;
  cmd_sweep->add_option("--train", sw_data, "training TSV");
  cmd_sweep->add_option("--classes", sw_classes, "number of classes");
  cmd_sweep->add_option("--axis", sw_axis,
                        "embedding, region_size, filter_count, dropout, or activation");
  cmd_sweep->add_option("--values", sw_values, "axis values, comma separated");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  std::string command = "?";
  std::string out_dir;
  try {
    if (cmd_train->parsed()) {
      command = "train";
      RunConfig cfg = build_config(train_flags);
      if (!train_data.empty()) cfg.train_path = train_data;
      if (!train_test.empty()) cfg.test_path = train_test;
      if (train_classes > 0) cfg.class_count = train_classes;
      out_dir = acnn::resolve_out_dir(cfg);
      auto artifacts = acnn::run_train(cfg, out_dir);
      std::printf("trained %d epochs, final accuracy %.4f (checkpoint: %s)\n",
                  static_cast<int>(artifacts.result.history.size()),
                  artifacts.final_report.accuracy, artifacts.checkpoint_path.c_str());
    } else if (cmd_evaluate->parsed()) {
      command = "evaluate";
      RunConfig cfg = build_config(eval_flags);
      if (!eval_checkpoint.empty()) cfg.checkpoint_path = eval_checkpoint;
      if (!eval_data.empty()) cfg.test_path = eval_data;
      if (eval_classes > 0) cfg.class_count = eval_classes;
      if (eval_adapt) cfg.adapt = true;
      out_dir = acnn::resolve_out_dir(cfg);
      auto artifacts = acnn::run_evaluate(cfg, out_dir);
      std::printf("accuracy %.4f over %lld sentences\n", artifacts.report.accuracy,
                  static_cast<long long>(artifacts.report.total));
      for (size_t t = 0; t < artifacts.report.confusion.size(); ++t) {
        long long correct = artifacts.report.confusion[t][t];
        long long total = 0;
        for (long long c : artifacts.report.confusion[t]) total += c;
        std::printf("class %zu: %lld/%lld correct\n", t, correct, total);
      }
    } else if (cmd_transfer->parsed()) {
      command = "transfer";
      RunConfig cfg = build_config(transfer_flags);
      if (!tr_checkpoint.empty()) cfg.checkpoint_path = tr_checkpoint;
      if (!tr_train.empty()) cfg.train_path = tr_train;
      if (!tr_test.empty()) cfg.test_path = tr_test;
      if (tr_classes > 0) cfg.class_count = tr_classes;
      if (!tr_mode.empty()) cfg.transfer_mode = tr_mode;
      if (!tr_head.empty()) cfg.head_policy = tr_head;
      if (tr_both) cfg.both_modes = true;
      out_dir = acnn::resolve_out_dir(cfg);
      auto artifacts = acnn::run_transfer(cfg, out_dir);
      for (const auto& [name, report] : artifacts.rows) {
        std::printf("%s: accuracy %.4f\n", name.c_str(), report.accuracy);
      }
    } else if (cmd_explain->parsed()) {
      command = "explain";
      RunConfig cfg = build_config(explain_flags);
      if (!ex_checkpoint.empty()) cfg.checkpoint_path = ex_checkpoint;
      if (!ex_data.empty()) cfg.test_path = ex_data;
      if (ex_classes > 0) cfg.class_count = ex_classes;
      if (!ex_words.empty()) {
        cfg.words.clear();
        std::string cur;
        for (char c : ex_words) {
          if (c == ',') {
            if (!cur.empty()) cfg.words.push_back(cur);
            cur.clear();
          } else {
            cur.push_back(c);
          }
        }
        if (!cur.empty()) cfg.words.push_back(cur);
      }
      if (ex_bins > 0) cfg.bins = ex_bins;
      if (!ex_format.empty()) cfg.report_format = ex_format;
      out_dir = acnn::resolve_out_dir(cfg);
      auto artifacts = acnn::run_explain(cfg, out_dir);
      for (const auto& path : artifacts.written) std::printf("wrote %s\n", path.c_str());
      for (const auto& message : artifacts.failed) {
        std::fprintf(stderr, "acnn explain: %s\n", message.c_str());
      }
    } else if (cmd_sweep->parsed()) {
      command = "sweep";
      RunConfig cfg = build_config(sweep_flags);
      if (!sw_data.empty()) cfg.train_path = sw_data;
      if (sw_classes > 0) cfg.class_count = sw_classes;
      if (!sw_axis.empty()) cfg.axis = sw_axis;
      if (!sw_values.empty()) cfg.values = sw_values;
      out_dir = acnn::resolve_out_dir(cfg);
      auto artifacts = acnn::run_sweep(cfg, out_dir);
      std::fputs(artifacts.table.c_str(), stdout);
      std::printf("wrote %s\n", artifacts.csv_path.c_str());
    }
  } catch (const acnn::ConfigError& e) {
    return fail(command, out_dir, e.what(), 2);
  } catch (const std::exception& e) {
    return fail(command, out_dir, e.what(), 1);
  }
  return 0;
}
