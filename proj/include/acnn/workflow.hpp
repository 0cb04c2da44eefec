#pragma once

#include <string>
#include <vector>

#include "acnn/config.hpp"
#include "acnn/transfer.hpp"

namespace acnn {

/// Resolves the run directory (creating it) — the configured one, or
/// runs/<timestamp>-seed<seed> when none is set.
std::string resolve_out_dir(const RunConfig& cfg);

struct TrainArtifacts {
  TrainedModel model;
  TrainResult result;
  EvalReport final_report;
  std::string checkpoint_path;
  std::string history_path;
  std::string report_path;
};

/// Train one model: holdout validation per the protocol, checkpoint +
/// history CSV + final report written under the run directory.
TrainArtifacts run_train(const RunConfig& cfg, const std::string& out_dir);

struct EvaluateArtifacts {
  EvalReport report;
  std::string report_path;
  bool adapted = false;
};

EvaluateArtifacts run_evaluate(const RunConfig& cfg, const std::string& out_dir);

struct TransferArtifacts {
  std::vector<std::pair<std::string, EvalReport>> rows;  // mode name -> report
  std::string csv_path;
  std::string checkpoint_path;  // fine-tuned model, incremental runs only
};

TransferArtifacts run_transfer(const RunConfig& cfg, const std::string& out_dir);

struct ExplainArtifacts {
  std::vector<std::string> written;               // one report file per word
  std::vector<std::string> failed;                // "word: reason" entries
};

ExplainArtifacts run_explain(const RunConfig& cfg, const std::string& out_dir);

struct SweepArtifacts {
  std::vector<SweepRow> rows;
  std::string csv_path;
  std::string table;  // aligned text echo
};

SweepArtifacts run_sweep(const RunConfig& cfg, const std::string& out_dir);

}  // namespace acnn
