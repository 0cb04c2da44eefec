#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "acnn/embeddings.hpp"
#include "acnn/model.hpp"
#include "acnn/training.hpp"

namespace acnn {

/// Configuration problems map to the usage exit code, runtime problems do not.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything a subcommand needs, filled from defaults, an optional preset,
/// an INI-style config file, and explicit overrides (in that order).
struct RunConfig {
  // [data]
  std::string train_path;
  std::string test_path;
  int class_count = 2;
  int s_max = 0;  // <= 0: 95th-percentile sentence length
  int min_count = 1;

  // [embedding]
  EmbeddingSpec embedding;

  // [model]
  ModelConfig model;

  // [train]
  TrainConfig train;

  // [output]
  std::string out_dir;  // empty: runs/<timestamp>-seed<seed>

  // [evaluate]/[transfer]/[explain]
  std::string checkpoint_path;

  // [transfer]
  std::string transfer_mode = "incremental";
  std::string head_policy = "auto";
  bool both_modes = false;

  // [evaluate]/[explain]
  bool adapt = false;
  std::vector<std::string> words;
  int bins = 20;
  std::string report_format = "csv";

  // [sweep]
  std::string axis;
  std::string values;
};

/// Defaults already carry the tuned configuration; "baseline" switches to the
/// reference setup (512 filters, regions (3,4,5), dropout 0.5, relu, random
/// embedding).
RunConfig default_run_config();
void apply_preset(RunConfig& cfg, const std::string& name);

/// INI-style sections with strict key checking; unknown keys are rejected.
void load_config_file(RunConfig& cfg, const std::string& path);

/// "section.key=value" override, same key space as the config file.
void apply_override(RunConfig& cfg, const std::string& assignment);

}  // namespace acnn
