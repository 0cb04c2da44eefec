#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "acnn/explain.hpp"
#include "acnn/training.hpp"
#include "support/synthetic.hpp"

using namespace acnn;

namespace {

struct ExplainSetup {
  Dataset data;
  ModelConfig cfg;
  ChannelSet channels;
  ModelParams params;
};

ExplainSetup make_setup(const std::vector<int>& regions, Padding padding, uint64_t seed,
                        int sentences = 30) {
  Rng rng(seed);
  testsupport::CorpusSpec spec;
  spec.sentences = sentences;
  auto corpus = testsupport::make_keyword_corpus(spec, rng);

  ExplainSetup s;
  auto vocab = std::make_shared<Vocabulary>(build_vocab(corpus, 1));
  const int s_max = percentile_length(corpus, 1.0);
  s.data = encode_all(corpus, 2, vocab, s_max);

  s.cfg.region_sizes = regions;
  s.cfg.filters_per_region = 3;
  s.cfg.embedding_dim = 6;
  s.cfg.channels = 1;
  s.cfg.attention_dim = 3;
  s.cfg.class_count = 2;
  s.cfg.activation = Activation::tanh;
  s.cfg.dropout = 0.0;
  s.cfg.padding = padding;
  s.cfg.max_length = s_max;

  Rng setup_rng = rng.derive(1);
  EmbeddingSpec espec;
  espec.variant = EmbeddingVariant::random;
  espec.dim = 6;
  s.channels = make_channels(espec, *vocab, setup_rng);
  s.params = init_params(s.cfg, setup_rng);
  for (double& x : s.params.att_u) x = setup_rng.uniform(-0.5, 0.5);
  return s;
}

}  // namespace

TEST_CASE("attribute: a single height-1 region reproduces the attention vector") {
  ExplainSetup s = make_setup({1}, Padding::narrow, 3);
  // pick a sentence with no padding so positions and tokens align one to one
  const EncodedSentence* full = nullptr;
  for (const auto& sent : s.data.sentences) {
    if (sent.true_len == s.cfg.max_length) {
      full = &sent;
      break;
    }
  }
  REQUIRE(full != nullptr);
  ForwardTrace trace = forward(*full, s.channels, s.params, s.cfg, false);
  auto attrs = attribute(trace, *full, s.cfg, *s.data.vocab);
  REQUIRE(attrs.size() == trace.regions[0].weights.size());
  for (size_t t = 0; t < attrs.size(); ++t) {
    CHECK(attrs[t].score == doctest::Approx(trace.regions[0].weights[t]).epsilon(1e-12));
  }
}

TEST_CASE("attribute: hand example for a height-2 narrow region") {
  // 3 tokens, windows (0,1) and (1,2), attention (0.5, 0.5):
  // raw shares put half a window on each member row
  ExplainSetup s = make_setup({2}, Padding::narrow, 5);
  EncodedSentence sent;
  sent.ids = {2, 3, 4};
  sent.true_len = 3;
  sent.label = 0;
  s.cfg.max_length = 3;
  ForwardTrace trace = forward(sent, s.channels, s.params, s.cfg, false);
  // overwrite the trace weights with the values the hand example assumes
  trace.regions[0].weights = {0.5, 0.5};
  auto attrs = attribute(trace, sent, s.cfg, *s.data.vocab);
  REQUIRE(attrs.size() == 3);
  CHECK(attrs[0].score == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(attrs[1].score == doctest::Approx(0.50).epsilon(1e-12));
  CHECK(attrs[2].score == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("attribute: scores over real tokens sum to one, padding excluded") {
  for (Padding padding : {Padding::wide, Padding::narrow}) {
    ExplainSetup s = make_setup({2, 3}, padding, 7);
    for (const auto& sent : s.data.sentences) {
      ForwardTrace trace = forward(sent, s.channels, s.params, s.cfg, false);
      auto attrs = attribute(trace, sent, s.cfg, *s.data.vocab);
      REQUIRE(static_cast<int>(attrs.size()) == sent.true_len);
      double sum = 0.0;
      for (const auto& a : attrs) sum += a.score;
      CHECK(std::fabs(sum - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("attribute: uniform attention gives interior tokens equal weight") {
  ExplainSetup s = make_setup({2}, Padding::wide, 9);
  ModelParams uniform_params = s.params;
  std::fill(uniform_params.att_u.begin(), uniform_params.att_u.end(), 0.0);
  const EncodedSentence* full = nullptr;
  for (const auto& sent : s.data.sentences) {
    if (sent.true_len == s.cfg.max_length) {
      full = &sent;
      break;
    }
  }
  REQUIRE(full != nullptr);
  ForwardTrace trace = forward(*full, s.channels, uniform_params, s.cfg, false);
  auto attrs = attribute(trace, *full, s.cfg, *s.data.vocab);
  // wide padding with uniform attention: every token sits in h windows
  for (size_t t = 1; t + 1 < attrs.size(); ++t) {
    CHECK(attrs[t].score == doctest::Approx(attrs[1].score).epsilon(1e-9));
  }
}

TEST_CASE("attribute is a pure function of the trace") {
  ExplainSetup s = make_setup({2, 3}, Padding::wide, 11);
  const EncodedSentence& sent = s.data.sentences[0];
  ForwardTrace trace = forward(sent, s.channels, s.params, s.cfg, false);
  auto a = attribute(trace, sent, s.cfg, *s.data.vocab);
  auto b = attribute(trace, sent, s.cfg, *s.data.vocab);
  REQUIRE(a.size() == b.size());
  for (size_t t = 0; t < a.size(); ++t) CHECK(a[t].score == b[t].score);

  EncodedSentence other = s.data.sentences[1];
  CHECK_THROWS_AS(attribute(trace, other, s.cfg, *s.data.vocab), std::invalid_argument);
}

TEST_CASE("word_distribution: observations, histogram, and error paths") {
  ExplainSetup s = make_setup({2, 3}, Padding::wide, 13, 40);
  WordWeightReport report =
      word_distribution(s.params, s.channels, s.cfg, s.data, "zonk", 10);
  CHECK(report.word == "zonk");
  CHECK(!report.observations.empty());
  int64_t histogram_total = 0;
  for (int64_t c : report.counts) histogram_total += c;
  CHECK(histogram_total == static_cast<int64_t>(report.observations.size()));
  for (const auto& obs : report.observations) {
    CHECK(obs.score >= 0.0);
    CHECK(obs.score <= 1.0);
    CHECK(obs.label == 1);  // the keyword marks class 1 sentences
  }
  int64_t label_total = 0;
  for (const auto& [label, counts] : report.per_label_counts) {
    for (int64_t c : counts) label_total += c;
  }
  CHECK(label_total == histogram_total);
  CHECK(report.bin_edges.front() == 0.0);
  CHECK(report.bin_edges.back() == 1.0);

  // a vocabulary word with zero occurrences gives an empty report
  auto corpus_with_rare = std::vector<LabeledSentence>{{tokenize("zonk plus rare"), 1},
                                                       {tokenize("the a movie"), 0}};
  auto vocab2 = std::make_shared<Vocabulary>(build_vocab(corpus_with_rare, 1));
  Dataset data2 = encode_all({corpus_with_rare[1]}, 2, vocab2, s.cfg.max_length);
  ExplainSetup s2 = make_setup({2}, Padding::wide, 14);
  s2.cfg.channels = 1;
  Rng rng(15);
  ChannelSet ch2;
  ch2.tables.push_back(random_table(vocab2->size(), 6, rng, true));
  ModelConfig cfg2 = s2.cfg;
  ModelParams params2 = init_params(cfg2, rng);
  WordWeightReport empty = word_distribution(params2, ch2, cfg2, data2, "rare", 5);
  CHECK(empty.observations.empty());

  CHECK_THROWS_WITH_AS(word_distribution(s.params, s.channels, s.cfg, s.data, "nosuchword", 5),
                       doctest::Contains("absent"), std::invalid_argument);
  CHECK_THROWS_AS(word_distribution(s.params, s.channels, s.cfg, s.data, "two words", 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(word_distribution(s.params, s.channels, s.cfg, s.data, "zonk", 1),
                  std::invalid_argument);
}

TEST_CASE("export_report: deterministic files, header-only when empty") {
  const std::string dir = testsupport::scratch_dir("explain_export");
  WordWeightReport report;
  report.word = "good";
  report.bin_edges = {0.0, 0.5, 1.0};
  report.counts = {1, 1};
  report.observations = {{0, 1, 0.25}, {3, 0, 0.75}};
  report.per_label_counts[0] = {0, 1};
  report.per_label_counts[1] = {1, 0};

  const std::string p1 = dir + "/a.csv";
  const std::string p2 = dir + "/b.csv";
  export_report(report, p1, ReportFormat::csv);
  export_report(report, p2, ReportFormat::csv);
  const std::string c1 = testsupport::slurp(p1);
  CHECK(c1 == testsupport::slurp(p2));
  CHECK(c1.find("word,sentence_id,label,score\n") == 0);
  CHECK(c1.find("good,0,1,0.25") != std::string::npos);
  CHECK(c1.find("bin_lo,bin_hi,count") != std::string::npos);

  // record count equals observation count
  size_t rows = 0;
  size_t at = c1.find('\n') + 1;
  while (at < c1.size() && c1[at] != '\n') {
    at = c1.find('\n', at) + 1;
    ++rows;
  }
  CHECK(rows == report.observations.size());

  WordWeightReport empty;
  empty.word = "void";
  empty.bin_edges = {0.0, 0.5, 1.0};
  empty.counts = {0, 0};
  const std::string p3 = dir + "/empty.csv";
  export_report(empty, p3, ReportFormat::csv);
  CHECK(testsupport::slurp(p3) == "word,sentence_id,label,score\n");

  const std::string p4 = dir + "/a.jsonl";
  export_report(report, p4, ReportFormat::json_lines);
  const std::string j = testsupport::slurp(p4);
  CHECK(j.find("\"type\":\"observation\"") != std::string::npos);
  CHECK(j.find("\"type\":\"histogram_bin\"") != std::string::npos);

  CHECK_THROWS_AS(export_report(report, dir + "/nodir/x.csv", ReportFormat::csv),
                  std::runtime_error);
}

TEST_CASE("word weight tracks the label it marks") {
  // "good" appears in every label-1 sentence and in a slice of label-0
  // sentences whose label is decided by "awful"; after training its mean
  // attribution should be higher where it carries the decision
  Rng rng(31);
  std::vector<LabeledSentence> corpus;
  const std::vector<std::string> fillers = {"the", "a", "movie", "plot", "scene", "was"};
  for (int i = 0; i < 80; ++i) {
    const int label = i % 2;
    const int len = 6 + static_cast<int>(rng.below(3));
    std::vector<std::string> tokens;
    for (int t = 0; t < len; ++t) {
      tokens.push_back(fillers[static_cast<size_t>(rng.below(fillers.size()))]);
    }
    if (label == 1) {
      tokens[static_cast<size_t>(rng.below(static_cast<uint64_t>(len)))] = "good";
    } else {
      tokens[static_cast<size_t>(rng.below(static_cast<uint64_t>(len)))] = "awful";
      if (rng.below(10) < 4) {
        size_t at = rng.below(static_cast<uint64_t>(len));
        if (tokens[at] != "awful") tokens[at] = "good";
      }
    }
    corpus.push_back({std::move(tokens), label});
  }

  auto vocab = std::make_shared<Vocabulary>(build_vocab(corpus, 1));
  const int s_max = percentile_length(corpus, 1.0);
  Dataset data = encode_all(corpus, 2, vocab, s_max);

  ModelConfig cfg;
  cfg.region_sizes = {2, 3};
  cfg.filters_per_region = 8;
  cfg.embedding_dim = 12;
  cfg.channels = 1;
  cfg.attention_dim = 8;
  cfg.class_count = 2;
  cfg.activation = Activation::tanh;
  cfg.dropout = 0.0;
  cfg.max_length = s_max;

  Rng setup(32);
  EmbeddingSpec espec;
  espec.variant = EmbeddingVariant::random;
  espec.dim = 12;
  ChannelSet channels = make_channels(espec, *vocab, setup);
  ModelParams params = init_params(cfg, setup);

  TrainConfig tcfg;
  tcfg.optimizer = OptimizerKind::adadelta;
  tcfg.epochs = 80;
  tcfg.batch_size = 10;
  Rng train_rng(33);
  train(data, nullptr, channels, params, cfg, tcfg, train_rng);
  REQUIRE(evaluate(data, channels, params, cfg).accuracy == 1.0);

  WordWeightReport report = word_distribution(params, channels, cfg, data, "good", 10);
  double sum0 = 0.0, sum1 = 0.0;
  int n0 = 0, n1 = 0;
  for (const auto& obs : report.observations) {
    if (obs.label == 1) {
      sum1 += obs.score;
      ++n1;
    } else {
      sum0 += obs.score;
      ++n0;
    }
  }
  REQUIRE(n0 > 0);
  REQUIRE(n1 > 0);
  INFO("mean(good|1)=", sum1 / n1, " mean(good|0)=", sum0 / n0, " n1=", n1, " n0=", n0);
  CHECK(sum1 / n1 > sum0 / n0);
}

TEST_CASE("trained model puts top attribution on the keyword") {
  Rng rng(21);
  testsupport::CorpusSpec spec;
  spec.sentences = 32;
  auto corpus = testsupport::make_keyword_corpus(spec, rng);

  auto vocab = std::make_shared<Vocabulary>(build_vocab(corpus, 1));
  const int s_max = percentile_length(corpus, 1.0);
  Dataset data = encode_all(corpus, 2, vocab, s_max);

  ModelConfig cfg;
  cfg.region_sizes = {2, 3};
  cfg.filters_per_region = 8;
  cfg.embedding_dim = 12;
  cfg.channels = 1;
  cfg.attention_dim = 4;
  cfg.class_count = 2;
  cfg.activation = Activation::tanh;
  cfg.dropout = 0.0;
  cfg.max_length = s_max;

  Rng setup_rng(22);
  EmbeddingSpec espec;
  espec.variant = EmbeddingVariant::random;
  espec.dim = 12;
  ChannelSet channels = make_channels(espec, *vocab, setup_rng);
  ModelParams params = init_params(cfg, setup_rng);

  TrainConfig tcfg;
  tcfg.optimizer = OptimizerKind::adadelta;
  tcfg.epochs = 60;
  tcfg.batch_size = 8;
  Rng train_rng(23);
  train(data, nullptr, channels, params, cfg, tcfg, train_rng);

  const int32_t keyword_id = static_cast<int32_t>(vocab->id("zonk"));
  int keyword_sentences = 0;
  int top1 = 0;
  for (const auto& sent : data.sentences) {
    bool has = false;
    for (int t = 0; t < sent.true_len; ++t) {
      if (sent.ids[static_cast<size_t>(t)] == keyword_id) has = true;
    }
    if (!has) continue;
    ++keyword_sentences;
    ForwardTrace trace = forward(sent, channels, params, cfg, false);
    auto attrs = attribute(trace, sent, cfg, *vocab);
    size_t arg = 0;
    for (size_t t = 1; t < attrs.size(); ++t) {
      if (attrs[t].score > attrs[arg].score) arg = t;
    }
    if (attrs[arg].token == "zonk") ++top1;
  }
  REQUIRE(keyword_sentences > 0);
  INFO("top-1 rate ", top1, "/", keyword_sentences);
  CHECK(top1 * 2 > keyword_sentences);  // majority of its sentences
}
