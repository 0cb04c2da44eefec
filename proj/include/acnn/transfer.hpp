#pragma once

#include <utility>
#include <vector>

#include "acnn/checkpoint.hpp"
#include "acnn/training.hpp"

namespace acnn {

enum class TransferMode { direct, incremental };
enum class HeadPolicy { keep, reinit };

TransferMode parse_transfer_mode(const std::string& name);
HeadPolicy parse_head_policy(const std::string& name);
const char* to_string(TransferMode m);
const char* to_string(HeadPolicy h);

struct TransferPlan {
  TrainedModel source;
  std::vector<LabeledSentence> target_train;
  std::vector<LabeledSentence> target_test;
  int target_class_count = 0;
  TransferMode mode = TransferMode::direct;
  HeadPolicy head = HeadPolicy::keep;
  TrainConfig finetune;
  double dropout_override = -1.0;  // negative keeps the source model's rate
  int target_max_length = 0;       // <= 0 keeps the source model's
  uint64_t seed = 42;

  void validate() const;
};

struct AdaptedModel {
  std::shared_ptr<const Vocabulary> vocab;
  ChannelSet channels;
  ModelParams params;  // carried over unchanged
};

/// Union of the source vocabulary and the target corpus tokens. Shared tokens
/// keep their source vectors exactly; target-only tokens get fresh
/// out-of-vocabulary rows. Idempotent once merged.
AdaptedModel adapt_vocabulary(const TrainedModel& source,
                              const std::vector<LabeledSentence>& target, Rng& rng);

/// Evaluates the source model on the target test set without touching any
/// parameter.
EvalReport transfer_direct(const TransferPlan& plan);

/// Continues training on the target domain; with a reinitialized head only
/// the dense layer changes at handoff, every other tensor carries over
/// bit for bit.
std::pair<TrainedModel, EvalReport> transfer_incremental(const TransferPlan& plan);

}  // namespace acnn
