#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "acnn/checkpoint.hpp"
#include "acnn/training.hpp"
#include "support/gradcheck.hpp"
#include "support/synthetic.hpp"

using namespace acnn;

namespace {

// single-channel sentence tensor from explicit rows
std::vector<Matrix> tensor_from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c < rows[r].size(); ++c) {
      m(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
    }
  }
  return {m};
}

struct TinySetup {
  ModelConfig cfg;
  ChannelSet channels;
  ModelParams params;
  EncodedSentence sent;
};

// two channels, one frozen; content vector randomized so attention
// gradients are exercised
TinySetup tiny_model(Padding padding, Pooling pooling, Activation act, uint64_t seed) {
  TinySetup setup;
  setup.cfg.region_sizes = {2, 3};
  setup.cfg.filters_per_region = 4;
  setup.cfg.embedding_dim = 8;
  setup.cfg.channels = 2;
  setup.cfg.attention_dim = 5;
  setup.cfg.class_count = 3;
  setup.cfg.activation = act;
  setup.cfg.dropout = 0.0;
  setup.cfg.padding = padding;
  setup.cfg.pooling = pooling;
  setup.cfg.max_length = 7;

  Rng rng(seed);
  setup.channels.tables.push_back(random_table(12, 8, rng, false));
  setup.channels.tables.push_back(random_table(12, 8, rng, true));
  setup.params = init_params(setup.cfg, rng);
  for (double& x : setup.params.att_u) x = rng.uniform(-0.5, 0.5);

  setup.sent.ids = {3, 5, 2, 7, 5, 0, 0};  // repeated token and pad tail
  setup.sent.true_len = 5;
  setup.sent.label = 1;
  return setup;
}

}  // namespace

TEST_CASE("init_params: zero content vector, zero biases, bounded weights") {
  ModelConfig cfg;
  cfg.region_sizes = {2, 3};
  cfg.filters_per_region = 3;
  cfg.embedding_dim = 4;
  cfg.channels = 2;
  cfg.attention_dim = 5;
  cfg.class_count = 3;
  cfg.dropout = 0.0;
  cfg.max_length = 6;
  Rng rng(42);
  ModelParams p = init_params(cfg, rng);

  for (double x : p.att_u) CHECK(x == 0.0);
  for (double x : p.dense_b) CHECK(x == 0.0);
  for (const auto& r : p.regions) {
    for (double x : r.filter_bias) CHECK(x == 0.0);
    for (double x : r.att_b) CHECK(x == 0.0);
    const double bound = std::sqrt(6.0 / (2 * r.region_size * 4 + 1));
    for (const auto& f : r.filters) {
      for (double x : f.data()) {
        CHECK(std::fabs(x) <= bound);
      }
    }
    const double att_bound = std::sqrt(6.0 / (3 + 5));
    for (double x : r.att_w.data()) CHECK(std::fabs(x) <= att_bound);
  }
  const double dense_bound = std::sqrt(6.0 / (6 + 3));
  for (double x : p.dense_w.data()) CHECK(std::fabs(x) <= dense_bound);
}

TEST_CASE("conv_region hand examples") {
  auto input = tensor_from_rows({{1, 0}, {0, 1}, {1, 1}});
  Matrix filter(2, 2, 1.0);

  Vector narrow = conv_region(input, filter, 0.0, Activation::linear, Padding::narrow);
  CHECK(narrow == Vector{2.0, 3.0});

  Vector wide = conv_region(input, filter, 0.0, Activation::linear, Padding::wide);
  CHECK(wide == Vector{1.0, 2.0, 3.0, 2.0});

  Matrix zero_filter(2, 2, 0.0);
  Vector zeros = conv_region(input, zero_filter, 0.0, Activation::relu, Padding::narrow);
  CHECK(zeros == Vector{0.0, 0.0});

  // region size 4 does not fit 3 rows in narrow mode
  Matrix too_tall(4, 2, 1.0);
  CHECK_THROWS_AS(conv_region(input, too_tall, 0.0, Activation::linear, Padding::narrow),
                  std::invalid_argument);
}

TEST_CASE("attend_region hand example") {
  // p=2, m=1, k=1: U = tanh(X), a = softmax(U), weighted rows = a .* X
  std::vector<Vector> maps{{1.0, 3.0}};
  Matrix w(1, 1);
  w(0, 0) = 1.0;
  Vector b{0.0};
  Vector u{1.0};
  AttendResult res = attend_region(maps, w, b, u);
  CHECK(res.hidden(0, 0) == doctest::Approx(0.76159).epsilon(1e-4));
  CHECK(res.hidden(1, 0) == doctest::Approx(0.99505).epsilon(1e-4));
  CHECK(res.weights[0] == doctest::Approx(0.44188).epsilon(1e-4));
  CHECK(res.weights[1] == doctest::Approx(0.55812).epsilon(1e-4));
  CHECK(res.weighted(0, 0) == doctest::Approx(0.44188).epsilon(1e-4));
  CHECK(res.weighted(1, 0) == doctest::Approx(1.67437).epsilon(1e-4));
}

TEST_CASE("attend_region: zero content vector gives exactly uniform weights") {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 1 + static_cast<int>(rng.below(4));
    const int p = 1 + static_cast<int>(rng.below(6));
    const int ka = 1 + static_cast<int>(rng.below(4));
    std::vector<Vector> maps(static_cast<size_t>(m), Vector(static_cast<size_t>(p)));
    for (auto& map : maps) {
      for (double& x : map) x = rng.uniform(-2.0, 2.0);
    }
    Matrix w(m, ka);
    for (double& x : w.data()) x = rng.uniform(-1.0, 1.0);
    Vector b(static_cast<size_t>(ka));
    for (double& x : b) x = rng.uniform(-1.0, 1.0);
    Vector u(static_cast<size_t>(ka), 0.0);
    AttendResult res = attend_region(maps, w, b, u);
    const double uniform = 1.0 / static_cast<double>(p);
    for (double a : res.weights) CHECK(std::fabs(a - uniform) < 1e-12);
    for (int pos = 0; pos < p; ++pos) {
      for (int j = 0; j < m; ++j) {
        CHECK(res.weighted(pos, j) ==
              doctest::Approx(res.stacked(pos, j) * uniform).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("attend_region: scaling the content vector keeps the argmax") {
  std::vector<Vector> maps{{0.3, 1.2, -0.7}, {0.9, 0.1, 0.4}};
  Matrix w(2, 2);
  w(0, 0) = 0.5; w(0, 1) = -0.25; w(1, 0) = 1.0; w(1, 1) = 0.75;
  Vector b{0.1, -0.2};
  Vector u{0.8, -0.3};
  AttendResult base = attend_region(maps, w, b, u);
  size_t base_arg = 0;
  for (size_t i = 1; i < base.weights.size(); ++i) {
    if (base.weights[i] > base.weights[base_arg]) base_arg = i;
  }
  for (double scale : {2.0, 10.0, 0.5}) {
    Vector u_scaled = u;
    for (double& x : u_scaled) x *= scale;
    AttendResult res = attend_region(maps, w, b, u_scaled);
    size_t arg = 0;
    for (size_t i = 1; i < res.weights.size(); ++i) {
      if (res.weights[i] > res.weights[arg]) arg = i;
    }
    CHECK(arg == base_arg);
  }
  CHECK_THROWS_AS(attend_region({Vector{1.0}, Vector{1.0, 2.0}}, w, b, u),
                  std::invalid_argument);
}

TEST_CASE("pool_region strategies") {
  Matrix x(2, 2);
  x(0, 0) = 1; x(0, 1) = 4; x(1, 0) = 3; x(1, 1) = 2;
  CHECK(pool_region(x, Pooling::max) == Vector{3.0, 4.0});
  CHECK(pool_region(x, Pooling::average) == Vector{2.0, 3.0});
  CHECK(pool_region(x, Pooling::min) == Vector{1.0, 2.0});

  Matrix single(1, 3);
  single(0, 0) = -1; single(0, 1) = 0; single(0, 2) = 7;
  CHECK(pool_region(single, Pooling::max) == Vector{-1.0, 0.0, 7.0});
}

TEST_CASE("forward: shapes, probability law, and inference determinism") {
  TinySetup setup = tiny_model(Padding::wide, Pooling::max, Activation::relu, 77);
  ForwardTrace t1 = forward(setup.sent, setup.channels, setup.params, setup.cfg, false);

  CHECK(t1.pooled.size() == 8);  // M=2 regions x m=4 filters
  double sum = 0.0;
  for (double x : t1.probs) sum += x;
  CHECK(std::fabs(sum - 1.0) < 1e-9);

  for (const auto& rt : t1.regions) {
    double asum = 0.0;
    for (double a : rt.weights) {
      CHECK(a >= 0.0);
      CHECK(a <= 1.0);
      asum += a;
    }
    CHECK(std::fabs(asum - 1.0) < 1e-9);
  }

  ForwardTrace t2 = forward(setup.sent, setup.channels, setup.params, setup.cfg, false);
  CHECK(t1.probs == t2.probs);
  CHECK(t1.pooled == t2.pooled);
}

TEST_CASE("forward: adding a constant to dense logits keeps probabilities") {
  TinySetup setup = tiny_model(Padding::narrow, Pooling::max, Activation::tanh, 5);
  ForwardTrace base = forward(setup.sent, setup.channels, setup.params, setup.cfg, false);
  ModelParams shifted = setup.params;
  for (double& x : shifted.dense_b) x += 17.5;
  ForwardTrace moved = forward(setup.sent, setup.channels, shifted, setup.cfg, false);
  for (size_t c = 0; c < base.probs.size(); ++c) {
    CHECK(std::fabs(base.probs[c] - moved.probs[c]) < 1e-12);
  }
}

TEST_CASE("backward: dense bias gradient equals probs minus onehot") {
  TinySetup setup = tiny_model(Padding::wide, Pooling::max, Activation::relu, 13);
  ForwardTrace trace = forward(setup.sent, setup.channels, setup.params, setup.cfg, true);
  Gradients grads = backward(trace, 1, setup.params, setup.cfg);
  for (size_t c = 0; c < trace.probs.size(); ++c) {
    const double expect = trace.probs[c] - (c == 1 ? 1.0 : 0.0);
    CHECK(grads.tensors.dense_b[c] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("backward: no gradient for pad rows or frozen channels") {
  TinySetup setup = tiny_model(Padding::wide, Pooling::average, Activation::tanh, 21);
  ForwardTrace trace = forward(setup.sent, setup.channels, setup.params, setup.cfg, true);
  Gradients grads = backward(trace, 0, setup.params, setup.cfg);
  CHECK(grads.embedding[0].empty());  // frozen channel
  CHECK(grads.embedding[1].count(Vocabulary::kPadId) == 0);
  CHECK(!grads.embedding[1].empty());
}

TEST_CASE("backward matches finite differences across modes") {
  const struct {
    Padding padding;
    Pooling pooling;
    Activation act;
  } cases[] = {
      {Padding::wide, Pooling::max, Activation::tanh},
      {Padding::narrow, Pooling::max, Activation::tanh},
      {Padding::wide, Pooling::average, Activation::softplus},
      {Padding::narrow, Pooling::min, Activation::linear},
  };
  int idx = 0;
  for (const auto& c : cases) {
    TinySetup setup = tiny_model(c.padding, c.pooling, c.act, 1000 + idx++);
    auto report = testsupport::finite_difference_check(setup.sent, setup.channels, setup.params,
                                                       setup.cfg, setup.sent.label);
    INFO("padding=", to_string(c.padding), " pooling=", to_string(c.pooling),
         " act=", to_string(c.act), " worst=", report.worst);
    CHECK(report.checked > 400);
    CHECK(report.max_rel < 1e-4);
  }
}

TEST_CASE("checkpoint round trip is bit exact") {
  TinySetup setup = tiny_model(Padding::wide, Pooling::max, Activation::relu, 99);
  std::vector<LabeledSentence> corpus{{tokenize("a b c d e f g h i j"), 0}};
  TrainedModel model;
  model.config = setup.cfg;
  model.params = setup.params;
  model.channels = setup.channels;
  model.vocab = std::make_shared<Vocabulary>(build_vocab(corpus, 1));

  const std::string dir = testsupport::scratch_dir("ckpt");
  const std::string path = dir + "/model.json";
  save_checkpoint(model, path);
  TrainedModel loaded = load_checkpoint(path);

  CHECK(bitwise_equal(model.params, loaded.params));
  CHECK(bitwise_equal(model.channels, loaded.channels));
  CHECK(loaded.vocab->tokens() == model.vocab->tokens());
  CHECK(loaded.config.describe() == model.config.describe());
}

TEST_CASE("checkpoint errors are structured") {
  const std::string dir = testsupport::scratch_dir("ckpt_bad");

  const std::string truncated = dir + "/truncated.json";
  {
    std::ofstream out(truncated);
    out << "{\"format_version\": 1, \"config\": {";
  }
  CHECK_THROWS_WITH_AS(load_checkpoint(truncated), doctest::Contains("parse error"),
                       std::runtime_error);

  const std::string wrong_version = dir + "/version.json";
  {
    std::ofstream out(wrong_version);
    out << "{\"format_version\": 999}";
  }
  CHECK_THROWS_WITH_AS(load_checkpoint(wrong_version), doctest::Contains("format_version"),
                       std::runtime_error);

  const std::string no_digest = dir + "/no_digest.json";
  {
    std::ofstream out(no_digest);
    out << "{\"format_version\": 1, \"config\": {}}";
  }
  CHECK_THROWS_WITH_AS(load_checkpoint(no_digest), doctest::Contains("vocab_digest"),
                       std::runtime_error);

  CHECK_THROWS_AS(load_checkpoint(dir + "/missing.json"), std::runtime_error);
}

TEST_CASE("wide padding puts every token in exactly h windows") {
  // count window membership over the same enumeration attribution uses
  for (int s = 1; s <= 8; ++s) {
    for (int h = 1; h <= 4; ++h) {
      const int positions = s + h - 1;
      const int offset = h - 1;
      for (int t = 0; t < s; ++t) {
        int member = 0;
        for (int pos = 0; pos < positions; ++pos) {
          const int first = pos - offset;
          if (t >= first && t <= first + h - 1) ++member;
        }
        CHECK(member == h);
      }
    }
  }
}
