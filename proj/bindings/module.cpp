#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "acnn/checkpoint.hpp"
#include "acnn/explain.hpp"
#include "acnn/training.hpp"

namespace py = pybind11;

namespace {

using namespace acnn;

EncodedSentence encode_text(const TrainedModel& model, const std::string& text) {
  LabeledSentence sent{tokenize(text), 0};
  if (sent.tokens.empty()) throw std::invalid_argument("text has no tokens");
  return encode(sent, *model.vocab, model.config.max_length);
}

std::vector<double> predict_proba(const TrainedModel& model, const std::string& text) {
  const auto sent = encode_text(model, text);
  return forward(sent, model.channels, model.params, model.config, false).probs;
}

int predict(const TrainedModel& model, const std::string& text) {
  const auto probs = predict_proba(model, text);
  int best = 0;
  for (size_t c = 1; c < probs.size(); ++c) {
    if (probs[c] > probs[static_cast<size_t>(best)]) best = static_cast<int>(c);
  }
  return best;
}

std::vector<std::pair<std::string, double>> attention(const TrainedModel& model,
                                                      const std::string& text) {
  const auto sent = encode_text(model, text);
  const auto trace = forward(sent, model.channels, model.params, model.config, false);
  const auto attrs = attribute(trace, sent, model.config, *model.vocab);
  std::vector<std::pair<std::string, double>> out;
  out.reserve(attrs.size());
  for (const auto& a : attrs) out.emplace_back(a.token, a.score);
  return out;
}

py::dict report_to_dict(const EvalReport& report) {
  py::dict d;
  d["accuracy"] = report.accuracy;
  d["mean_loss"] = report.mean_loss;
  d["total"] = report.total;
  d["confusion"] = report.confusion;
  return d;
}

Dataset encode_for_model(const TrainedModel& model, const std::string& path) {
  const auto raw = read_labeled_tsv(path, model.config.class_count);
  return encode_all(raw, model.config.class_count, model.vocab, model.config.max_length);
}

py::tuple train_file(const std::string& path, int classes, int epochs, uint64_t seed,
                     const std::vector<int>& regions, int filters, int dim,
                     const std::string& activation, double dropout,
                     const std::string& optimizer, double learning_rate, int batch_size,
                     int s_max, double val_fraction, int attention_dim) {
  auto raw = read_labeled_tsv(path, classes);
  if (s_max <= 0) s_max = percentile_length(raw);
  auto vocab = std::make_shared<Vocabulary>(build_vocab(raw, 1));
  Dataset all = encode_all(raw, classes, vocab, s_max);

  TrainedModel model;
  model.config.region_sizes = regions;
  model.config.filters_per_region = filters;
  model.config.embedding_dim = dim;
  model.config.channels = 1;
  model.config.attention_dim = attention_dim;
  model.config.class_count = classes;
  model.config.activation = parse_activation(activation);
  model.config.dropout = dropout;
  model.config.max_length = s_max;
  model.vocab = vocab;

  TrainConfig tcfg;
  tcfg.optimizer = parse_optimizer(optimizer);
  tcfg.learning_rate = learning_rate;
  tcfg.batch_size = batch_size;
  tcfg.epochs = epochs;
  tcfg.seed = seed;
  tcfg.repeats = 1;

  Rng rng(seed);
  Rng channel_rng = rng.derive(1);
  Rng param_rng = rng.derive(2);
  Rng train_rng = rng.derive(3);
  EmbeddingSpec spec;
  spec.variant = EmbeddingVariant::random;
  spec.dim = dim;
  model.channels = make_channels(spec, *vocab, channel_rng);
  model.params = init_params(model.config, param_rng);

  Dataset train_set = all;
  Dataset val_set;
  bool has_val = false;
  if (val_fraction > 0.0 && all.size() >= 2) {
    std::vector<size_t> order(all.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng split_rng = rng.derive(0);
    split_rng.shuffle(order);
    size_t n_val = static_cast<size_t>(val_fraction * static_cast<double>(all.size()));
    n_val = std::max<size_t>(1, std::min(n_val, all.size() - 1));
    val_set.class_count = all.class_count;
    val_set.max_length = all.max_length;
    val_set.vocab = all.vocab;
    train_set.sentences.clear();
    for (size_t i = 0; i < order.size(); ++i) {
      auto& dst = i < n_val ? val_set : train_set;
      dst.sentences.push_back(all.sentences[order[i]]);
    }
    has_val = true;
  }

  const TrainResult result = train(train_set, has_val ? &val_set : nullptr, model.channels,
                                   model.params, model.config, tcfg, train_rng);

  py::list history;
  for (const auto& st : result.history) {
    py::dict row;
    row["epoch"] = st.epoch;
    row["train_loss"] = st.train_loss;
    if (st.has_val) row["val_accuracy"] = st.val_accuracy;
    history.append(row);
  }
  return py::make_tuple(model, history);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "convolutional sentence classifier with a per-region attention layer";

  py::class_<TrainedModel>(m, "Model")
      .def_static("load", &load_checkpoint, py::arg("path"))
      .def("save", [](const TrainedModel& model, const std::string& path) {
        save_checkpoint(model, path);
      })
      .def("predict", &predict, py::arg("text"))
      .def("predict_proba", &predict_proba, py::arg("text"))
      .def("attention", &attention, py::arg("text"),
           "token attribution scores for a sentence; scores sum to 1")
      .def_property_readonly("class_count",
                             [](const TrainedModel& model) { return model.config.class_count; })
      .def_property_readonly("vocab_size",
                             [](const TrainedModel& model) { return model.vocab->size(); })
      .def_property_readonly("max_length",
                             [](const TrainedModel& model) { return model.config.max_length; });

  m.def("tokenize", [](const std::string& text) { return tokenize(text); }, py::arg("text"));

  m.def("train_file", &train_file, py::arg("path"), py::arg("classes"), py::arg("epochs") = 10,
        py::arg("seed") = 42, py::arg("regions") = std::vector<int>{3, 4, 5},
        py::arg("filters") = 16, py::arg("dim") = 32, py::arg("activation") = "relu",
        py::arg("dropout") = 0.5, py::arg("optimizer") = "adadelta",
        py::arg("learning_rate") = 0.1, py::arg("batch_size") = 50, py::arg("s_max") = 0,
        py::arg("val_fraction") = 0.1, py::arg("attention_dim") = 0,
        "train a randomly initialized single-channel model on a label<TAB>text file");

  m.def(
      "evaluate_file",
      [](const TrainedModel& model, const std::string& path) {
        const Dataset data = encode_for_model(model, path);
        return report_to_dict(evaluate(data, model.channels, model.params, model.config));
      },
      py::arg("model"), py::arg("path"));
}
