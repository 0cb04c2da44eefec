#pragma once

#include <optional>
#include <string>
#include <vector>

#include "acnn/model.hpp"

namespace acnn {

enum class OptimizerKind { sgd, adadelta };
OptimizerKind parse_optimizer(const std::string& name);
const char* to_string(OptimizerKind k);

struct Protocol {
  enum class Kind { holdout, kfold };
  Kind kind = Kind::holdout;
  double fraction = 0.1;  // holdout eval share
  int folds = 10;         // kfold
};

Protocol parse_protocol(const std::string& text);  // "holdout:0.1" or "kfold:10"
std::string to_string(const Protocol& p);

struct TrainConfig {
  OptimizerKind optimizer = OptimizerKind::adadelta;
  double learning_rate = 0.1;  // sgd only
  double rho = 0.95;           // adadelta decay
  double epsilon = 1e-6;       // adadelta conditioner
  int batch_size = 50;
  int epochs = 10;
  uint64_t seed = 42;
  int repeats = 5;
  Protocol protocol;

  void validate() const;
  std::string describe() const;
};

/// ADADELTA running averages, shaped like the parameters they condition.
struct OptimizerState {
  ModelParams grad_sq;    // E[g^2]
  ModelParams update_sq;  // E[dx^2]
  std::vector<Matrix> emb_grad_sq;    // per channel; empty matrix when frozen
  std::vector<Matrix> emb_update_sq;
  int64_t steps = 0;
};

OptimizerState make_optimizer_state(const ModelParams& params, const ChannelSet& channels);

/// -ln(P[target]) with P[target] clamped to 1e-12 before the log.
double cross_entropy(const Vector& probs, int target);

void sgd_step(ModelParams& params, ChannelSet& channels, const Gradients& grads, double lr);
void adadelta_step(ModelParams& params, ChannelSet& channels, const Gradients& grads,
                   OptimizerState& state, double rho, double eps);

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double val_accuracy = 0.0;
  bool has_val = false;
};

struct EvalReport {
  double accuracy = 0.0;
  double mean_loss = 0.0;
  int64_t total = 0;
  std::vector<std::vector<int64_t>> confusion;  // [true class][predicted class]
  int repeat_index = 0;
  std::string config_echo;
};

struct TrainResult {
  std::vector<EpochStats> history;
  int best_epoch = -1;  // epoch whose weights were kept (validation runs only)
};

/// Shuffled mini-batches, mean-of-batch gradients, one optimizer step per
/// batch. With a validation set, per-epoch accuracy is recorded and the
/// best-validation-epoch weights are kept.
TrainResult train(const Dataset& train_set, const Dataset* val_set, ChannelSet& channels,
                  ModelParams& params, const ModelConfig& mcfg, const TrainConfig& tcfg,
                  Rng& rng);

EvalReport evaluate(const Dataset& data, const ChannelSet& channels, const ModelParams& params,
                    const ModelConfig& cfg);

struct AggregateReport {
  double mean_accuracy = 0.0;
  double stddev_accuracy = 0.0;
  std::vector<double> repeat_accuracies;  // mean over folds, one entry per repeat
  std::vector<EvalReport> runs;           // every fold of every repeat
};

/// Holdout or k-fold evaluation, repeated with derived seeds; fresh
/// parameters and channels per run.
AggregateReport run_protocol(const Dataset& data, const EmbeddingSpec& embedding,
                             const ModelConfig& mcfg, const TrainConfig& tcfg);

enum class SweepAxis { embedding, region_size, filter_count, dropout, activation };
SweepAxis parse_sweep_axis(const std::string& name);
const char* to_string(SweepAxis a);

/// Splits a sweep value list; region_size values are parenthesized tuples.
std::vector<std::string> split_sweep_values(SweepAxis axis, const std::string& values);

struct SweepRow {
  std::string value;
  AggregateReport report;
};

/// One run_protocol per value, all other hyperparameters held at the base
/// configuration; rows come back sorted by the axis value.
std::vector<SweepRow> sweep(const Dataset& data, const EmbeddingSpec& base_embedding,
                            const ModelConfig& base_model, const TrainConfig& tcfg,
                            SweepAxis axis, const std::vector<std::string>& values);

// Deterministic CSV/text renderings.
std::string history_csv(const std::vector<EpochStats>& history);
std::string report_csv(const EvalReport& report);
std::string aggregate_csv(const AggregateReport& report);
std::string sweep_csv(SweepAxis axis, const std::vector<SweepRow>& rows);
std::string sweep_table(SweepAxis axis, const std::vector<SweepRow>& rows);

std::string csv_num(double x);

}  // namespace acnn
