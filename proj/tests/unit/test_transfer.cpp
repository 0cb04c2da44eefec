#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "acnn/transfer.hpp"
#include "support/synthetic.hpp"

using namespace acnn;

namespace {

TrainedModel make_source_model(int classes, uint64_t seed, int sentences = 60, int epochs = 8) {
  Rng rng(seed);
  testsupport::CorpusSpec spec;
  spec.sentences = sentences;
  spec.classes = classes;
  spec.keywords = classes == 2 ? std::vector<std::string>{"", "zonk"}
                               : std::vector<std::string>{"", "zonk", "blip"};
  auto corpus = testsupport::make_keyword_corpus(spec, rng);

  TrainedModel model;
  model.vocab = std::make_shared<Vocabulary>(build_vocab(corpus, 1));
  const int s_max = percentile_length(corpus, 1.0);
  Dataset data = encode_all(corpus, classes, model.vocab, s_max);

  model.config.region_sizes = {2, 3};
  model.config.filters_per_region = 4;
  model.config.embedding_dim = 8;
  model.config.channels = 1;
  model.config.attention_dim = 4;
  model.config.class_count = classes;
  model.config.activation = Activation::tanh;
  model.config.dropout = 0.0;
  model.config.max_length = s_max;

  Rng setup_rng = rng.derive(1);
  EmbeddingSpec espec;
  espec.variant = EmbeddingVariant::random;
  espec.dim = 8;
  model.channels = make_channels(espec, *model.vocab, setup_rng);
  model.params = init_params(model.config, setup_rng);

  TrainConfig tcfg;
  tcfg.optimizer = OptimizerKind::adadelta;
  tcfg.epochs = epochs;
  tcfg.batch_size = 10;
  Rng train_rng = rng.derive(2);
  train(data, nullptr, model.channels, model.params, model.config, tcfg, train_rng);
  return model;
}

std::vector<LabeledSentence> target_corpus(int classes, uint64_t seed, int sentences) {
  Rng rng(seed);
  testsupport::CorpusSpec spec;
  spec.sentences = sentences;
  spec.classes = classes;
  spec.fillers = {"gadget", "review", "product", "sound", "price", "battery", "screen", "works"};
  spec.keywords = classes == 2 ? std::vector<std::string>{"", "zonk"}
                               : std::vector<std::string>{"", "zonk", "blip"};
  return testsupport::make_keyword_corpus(spec, rng);
}

}  // namespace

TEST_CASE("adapt_vocabulary merges, carries vectors, and is idempotent") {
  TrainedModel source = make_source_model(2, 7);
  auto target = target_corpus(2, 8, 30);

  Rng rng(99);
  AdaptedModel adapted = adapt_vocabulary(source, target, rng);

  // every source token keeps its id and its vectors exactly
  for (const auto& token : source.vocab->tokens()) {
    CHECK(adapted.vocab->id(token) == source.vocab->id(token));
  }
  const int old_size = source.vocab->size();
  for (int r = 0; r < old_size; ++r) {
    for (int c = 0; c < 8; ++c) {
      CHECK(adapted.channels.tables[0].weights(r, c) == source.channels.tables[0].weights(r, c));
    }
  }

  // target-only tokens got fresh rows inside the init range
  CHECK(adapted.vocab->size() > old_size);
  for (int r = old_size; r < adapted.vocab->size(); ++r) {
    for (int c = 0; c < 8; ++c) {
      const double x = adapted.channels.tables[0].weights(r, c);
      CHECK(x >= -kOovInitRange);
      CHECK(x <= kOovInitRange);
    }
  }

  // disjoint vocabularies: merged size is the sum over regular tokens
  std::vector<LabeledSentence> disjoint{{tokenize("qqq www eee rrr ttt"), 0}};
  Rng rng2(1);
  AdaptedModel grown = adapt_vocabulary(source, disjoint, rng2);
  CHECK(grown.vocab->size() == old_size + 5);

  // adapting an already-merged model changes nothing
  TrainedModel merged_model;
  merged_model.config = source.config;
  merged_model.params = adapted.params;
  merged_model.channels = adapted.channels;
  merged_model.vocab = adapted.vocab;
  Rng rng3(2);
  AdaptedModel again = adapt_vocabulary(merged_model, target, rng3);
  CHECK(again.vocab->size() == adapted.vocab->size());
  CHECK(bitwise_equal(again.channels, adapted.channels));
}

TEST_CASE("transfer_direct: no writes, deterministic, class counts enforced") {
  TrainedModel source = make_source_model(2, 11);
  TransferPlan plan;
  plan.source = source;
  plan.target_test = target_corpus(2, 12, 40);
  plan.target_class_count = 2;
  plan.mode = TransferMode::direct;
  plan.seed = 5;

  const ModelParams params_before = plan.source.params;
  const ChannelSet channels_before = plan.source.channels;
  EvalReport a = transfer_direct(plan);
  EvalReport b = transfer_direct(plan);
  CHECK(bitwise_equal(plan.source.params, params_before));
  CHECK(bitwise_equal(plan.source.channels, channels_before));
  CHECK(a.accuracy == b.accuracy);
  CHECK(a.total == 40);

  TransferPlan bad = plan;
  bad.target_class_count = 3;
  bad.target_test = target_corpus(3, 13, 20);
  CHECK_THROWS_WITH_AS(transfer_direct(bad), doctest::Contains("incremental"),
                       std::invalid_argument);
}

TEST_CASE("transfer_direct: near source accuracy on a same-distribution target") {
  TrainedModel source = make_source_model(2, 17, /*sentences=*/400, /*epochs=*/10);

  // held-out draws from the same generator distribution
  Rng rng(18);
  testsupport::CorpusSpec spec;
  spec.sentences = 400;
  auto source_like = testsupport::make_keyword_corpus(spec, rng);
  Dataset source_eval = encode_all(source_like, 2, source.vocab, source.config.max_length);
  const double source_acc =
      evaluate(source_eval, source.channels, source.params, source.config).accuracy;

  TransferPlan plan;
  plan.source = source;
  Rng rng2(19);
  spec.sentences = 500;
  plan.target_test = testsupport::make_keyword_corpus(spec, rng2);
  plan.target_class_count = 2;
  plan.seed = 20;
  const double direct_acc = transfer_direct(plan).accuracy;
  CHECK(std::fabs(direct_acc - source_acc) <= 0.03);
}

TEST_CASE("transfer_incremental: reinit touches only the dense head at handoff") {
  TrainedModel source = make_source_model(3, 23);
  TransferPlan plan;
  plan.source = source;
  plan.target_train = target_corpus(2, 24, 30);
  plan.target_test = target_corpus(2, 25, 20);
  plan.target_class_count = 2;
  plan.mode = TransferMode::incremental;
  plan.head = HeadPolicy::reinit;
  plan.finetune.epochs = 0;  // handoff state, untouched by training
  plan.seed = 26;

  auto [model, report] = transfer_incremental(plan);
  CHECK(model.config.class_count == 2);
  CHECK(model.params.dense_w.cols() == 2);

  // every non-dense tensor is bitwise the source's
  REQUIRE(model.params.regions.size() == source.params.regions.size());
  for (size_t ri = 0; ri < model.params.regions.size(); ++ri) {
    const auto& a = model.params.regions[ri];
    const auto& b = source.params.regions[ri];
    CHECK(a.filter_bias == b.filter_bias);
    CHECK(a.att_b == b.att_b);
    CHECK(a.att_w.data() == b.att_w.data());
    for (size_t j = 0; j < a.filters.size(); ++j) {
      CHECK(a.filters[j].data() == b.filters[j].data());
    }
  }
  CHECK(model.params.att_u == source.params.att_u);

  // keep-head with mismatched classes is refused
  TransferPlan bad = plan;
  bad.head = HeadPolicy::keep;
  CHECK_THROWS_AS(transfer_incremental(bad), std::invalid_argument);
}

TEST_CASE("transfer_incremental with zero epochs equals transfer_direct") {
  TrainedModel source = make_source_model(2, 31);
  TransferPlan plan;
  plan.source = source;
  plan.target_train = target_corpus(2, 32, 30);
  plan.target_test = target_corpus(2, 33, 25);
  plan.target_class_count = 2;
  plan.head = HeadPolicy::keep;
  plan.finetune.epochs = 0;
  plan.seed = 34;

  EvalReport direct = transfer_direct(plan);
  auto [model, incremental] = transfer_incremental(plan);
  CHECK(incremental.accuracy == direct.accuracy);
  CHECK(incremental.mean_loss == direct.mean_loss);
  CHECK(incremental.confusion == direct.confusion);
  CHECK(bitwise_equal(model.params, source.params));
}

TEST_CASE("incremental transfer beats target-only training on a shared signal") {
  TrainedModel source = make_source_model(2, 41, /*sentences=*/600, /*epochs=*/10);
  auto target_train = target_corpus(2, 42, 80);
  auto target_test = target_corpus(2, 43, 60);

  TransferPlan plan;
  plan.source = source;
  plan.target_train = target_train;
  plan.target_test = target_test;
  plan.target_class_count = 2;
  plan.head = HeadPolicy::keep;
  plan.finetune.optimizer = OptimizerKind::adadelta;
  plan.finetune.epochs = 2;
  plan.finetune.batch_size = 10;
  plan.seed = 44;
  auto [model, incremental] = transfer_incremental(plan);

  // same budget, fresh model, target data only
  auto vocab = std::make_shared<Vocabulary>(build_vocab(target_train, 1));
  Dataset train_set = encode_all(target_train, 2, vocab, source.config.max_length);
  Dataset test_set = encode_all(target_test, 2, vocab, source.config.max_length);
  ModelConfig cfg = source.config;
  Rng rng(44);
  EmbeddingSpec espec;
  espec.variant = EmbeddingVariant::random;
  espec.dim = cfg.embedding_dim;
  Rng channel_rng = rng.derive(1);
  Rng param_rng = rng.derive(2);
  ChannelSet channels = make_channels(espec, *vocab, channel_rng);
  ModelParams params = init_params(cfg, param_rng);
  Rng train_rng = rng.derive(3);
  train(train_set, nullptr, channels, params, cfg, plan.finetune, train_rng);
  const double target_only = evaluate(test_set, channels, params, cfg).accuracy;

  INFO("incremental=", incremental.accuracy, " target_only=", target_only);
  CHECK(incremental.accuracy >= target_only);
}
