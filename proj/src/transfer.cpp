#include "acnn/transfer.hpp"

#include <stdexcept>

namespace acnn {

TransferMode parse_transfer_mode(const std::string& name) {
  if (name == "direct") return TransferMode::direct;
  if (name == "incremental") return TransferMode::incremental;
  throw std::invalid_argument("unknown transfer mode: " + name);
}

HeadPolicy parse_head_policy(const std::string& name) {
  if (name == "keep") return HeadPolicy::keep;
  if (name == "reinit") return HeadPolicy::reinit;
  throw std::invalid_argument("unknown head policy: " + name);
}

const char* to_string(TransferMode m) {
  return m == TransferMode::direct ? "direct" : "incremental";
}

const char* to_string(HeadPolicy h) { return h == HeadPolicy::keep ? "keep" : "reinit"; }

void TransferPlan::validate() const {
  if (target_class_count < 2) {
    throw std::invalid_argument("transfer: target class count must be >= 2");
  }
  if (target_test.empty()) throw std::invalid_argument("transfer: no target test sentences");
  const bool class_mismatch = target_class_count != source.config.class_count;
  if (mode == TransferMode::direct && class_mismatch) {
    throw std::invalid_argument(
        "transfer: direct mode needs matching class counts (source " +
        std::to_string(source.config.class_count) + ", target " +
        std::to_string(target_class_count) + "); use incremental mode with head policy reinit");
  }
  if (mode == TransferMode::incremental) {
    if (class_mismatch && head != HeadPolicy::reinit) {
      throw std::invalid_argument(
          "transfer: differing class counts require head policy reinit");
    }
    if (target_train.empty()) {
      throw std::invalid_argument("transfer: incremental mode needs target training sentences");
    }
  }
}

AdaptedModel adapt_vocabulary(const TrainedModel& source,
                              const std::vector<LabeledSentence>& target, Rng& rng) {
  AdaptedModel out;
  auto merged = std::make_shared<Vocabulary>(Vocabulary::from_tokens(source.vocab->tokens()));
  // new tokens ordered like a fresh vocabulary build: frequency, then first use
  if (!target.empty()) {
    const Vocabulary target_vocab = build_vocab(target, 1);
    for (const auto& token : target_vocab.tokens()) {
      if (!merged->contains(token)) merged->add(token);
    }
  }

  const int old_size = source.vocab->size();
  const int new_size = merged->size();
  const int d = source.config.embedding_dim;
  out.channels.tables.reserve(source.channels.tables.size());
  for (const auto& table : source.channels.tables) {
    EmbeddingTable grown{Matrix(new_size, d), table.trainable};
    for (int r = 0; r < old_size; ++r) {
      const double* src = table.weights.row(r);
      double* dst = grown.weights.row(r);
      for (int c = 0; c < d; ++c) dst[c] = src[c];
    }
    for (int r = old_size; r < new_size; ++r) {
      double* dst = grown.weights.row(r);
      for (int c = 0; c < d; ++c) dst[c] = rng.uniform(-kOovInitRange, kOovInitRange);
    }
    out.channels.tables.push_back(std::move(grown));
  }
  out.vocab = std::move(merged);
  out.params = source.params;
  return out;
}

namespace {

// Both transfer modes see the same merge corpus and rng stream, so a
// zero-epoch incremental run reproduces the direct evaluation exactly.
AdaptedModel adapt_for_plan(const TransferPlan& plan, Rng& rng) {
  std::vector<LabeledSentence> corpus = plan.target_train;
  corpus.insert(corpus.end(), plan.target_test.begin(), plan.target_test.end());
  return adapt_vocabulary(plan.source, corpus, rng);
}

int plan_max_length(const TransferPlan& plan) {
  return plan.target_max_length > 0 ? plan.target_max_length : plan.source.config.max_length;
}

}  // namespace

EvalReport transfer_direct(const TransferPlan& plan) {
  TransferPlan checked = plan;
  checked.mode = TransferMode::direct;
  checked.validate();

  Rng rng(plan.seed);
  Rng adapt_rng = rng.derive(1);
  AdaptedModel adapted = adapt_for_plan(plan, adapt_rng);

  ModelConfig cfg = plan.source.config;
  cfg.max_length = plan_max_length(plan);
  Dataset test = encode_all(plan.target_test, plan.target_class_count, adapted.vocab,
                            cfg.max_length);
  return evaluate(test, adapted.channels, adapted.params, cfg);
}

std::pair<TrainedModel, EvalReport> transfer_incremental(const TransferPlan& plan) {
  TransferPlan checked = plan;
  checked.mode = TransferMode::incremental;
  checked.validate();

  Rng rng(plan.seed);
  Rng adapt_rng = rng.derive(1);
  AdaptedModel adapted = adapt_for_plan(plan, adapt_rng);

  TrainedModel model;
  model.config = plan.source.config;
  model.config.max_length = plan_max_length(plan);
  if (plan.dropout_override >= 0.0) model.config.dropout = plan.dropout_override;
  model.params = std::move(adapted.params);
  model.channels = std::move(adapted.channels);
  model.vocab = adapted.vocab;

  if (plan.head == HeadPolicy::reinit) {
    model.config.class_count = plan.target_class_count;
    Rng head_rng = rng.derive(2);
    model.params.dense_w = glorot_matrix(model.config.pooled_len(), model.config.class_count,
                                         model.config.pooled_len(), model.config.class_count,
                                         head_rng);
    model.params.dense_b.assign(static_cast<size_t>(model.config.class_count), 0.0);
  }

  Dataset train_set = encode_all(plan.target_train, plan.target_class_count, model.vocab,
                                 model.config.max_length);
  Dataset test_set = encode_all(plan.target_test, plan.target_class_count, model.vocab,
                                model.config.max_length);

  Rng train_rng = rng.derive(3);
  train(train_set, nullptr, model.channels, model.params, model.config, plan.finetune,
        train_rng);

  EvalReport report = evaluate(test_set, model.channels, model.params, model.config);
  return {std::move(model), std::move(report)};
}

}  // namespace acnn
