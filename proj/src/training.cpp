#include "acnn/training.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace acnn {

OptimizerKind parse_optimizer(const std::string& name) {
  if (name == "sgd") return OptimizerKind::sgd;
  if (name == "adadelta") return OptimizerKind::adadelta;
  throw std::invalid_argument("unknown optimizer: " + name);
}

const char* to_string(OptimizerKind k) {
  return k == OptimizerKind::sgd ? "sgd" : "adadelta";
}

Protocol parse_protocol(const std::string& text) {
  const size_t colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  Protocol p;
  if (kind == "holdout") {
    p.kind = Protocol::Kind::holdout;
    if (!arg.empty()) p.fraction = std::stod(arg);
    if (p.fraction < 0.0 || p.fraction >= 1.0) {
      throw std::invalid_argument("protocol: holdout fraction must be in [0, 1)");
    }
  } else if (kind == "kfold") {
    p.kind = Protocol::Kind::kfold;
    if (!arg.empty()) p.folds = std::stoi(arg);
    if (p.folds < 2) throw std::invalid_argument("protocol: kfold needs k >= 2");
  } else {
    throw std::invalid_argument("unknown protocol: " + text);
  }
  return p;
}

std::string to_string(const Protocol& p) {
  if (p.kind == Protocol::Kind::holdout) return "holdout:" + csv_num(p.fraction);
  return "kfold:" + std::to_string(p.folds);
}

void TrainConfig::validate() const {
  if (optimizer == OptimizerKind::sgd && learning_rate <= 0.0) {
    throw std::invalid_argument("train config: sgd learning_rate must be positive");
  }
  if (rho <= 0.0 || rho >= 1.0) throw std::invalid_argument("train config: rho must be in (0, 1)");
  if (epsilon <= 0.0) throw std::invalid_argument("train config: epsilon must be positive");
  if (batch_size < 1) throw std::invalid_argument("train config: batch_size must be >= 1");
  if (epochs < 0) throw std::invalid_argument("train config: epochs must be >= 0");
  if (repeats < 1) throw std::invalid_argument("train config: repeats must be >= 1");
}

std::string TrainConfig::describe() const {
  std::ostringstream os;
  os << "optimizer=" << to_string(optimizer);
  if (optimizer == OptimizerKind::sgd) os << " lr=" << learning_rate;
  os << " batch_size=" << batch_size << " epochs=" << epochs << " seed=" << seed
     << " repeats=" << repeats << " protocol=" << to_string(protocol);
  return os.str();
}

OptimizerState make_optimizer_state(const ModelParams& params, const ChannelSet& channels) {
  OptimizerState st;
  st.grad_sq = zeros_like(params);
  st.update_sq = zeros_like(params);
  st.emb_grad_sq.resize(static_cast<size_t>(channels.count()));
  st.emb_update_sq.resize(static_cast<size_t>(channels.count()));
  for (int k = 0; k < channels.count(); ++k) {
    const auto& t = channels.tables[static_cast<size_t>(k)];
    if (t.trainable) {
      st.emb_grad_sq[static_cast<size_t>(k)] = Matrix(t.weights.rows(), t.weights.cols(), 0.0);
      st.emb_update_sq[static_cast<size_t>(k)] = Matrix(t.weights.rows(), t.weights.cols(), 0.0);
    }
  }
  return st;
}

double cross_entropy(const Vector& probs, int target) {
  if (target < 0 || target >= static_cast<int>(probs.size())) {
    throw std::invalid_argument("cross_entropy: target " + std::to_string(target) +
                                " out of range for " + std::to_string(probs.size()) + " classes");
  }
  return -std::log(std::max(probs[static_cast<size_t>(target)], 1e-12));
}

namespace {

void check_step_shapes(const ModelParams& params, const ChannelSet& channels,
                       const Gradients& grads, const char* who) {
  auto pt = named_tensors(params);
  auto gt = named_tensors(grads.tensors);
  if (pt.size() != gt.size()) {
    throw std::invalid_argument(std::string(who) + ": parameter/gradient tensor count mismatch");
  }
  for (size_t i = 0; i < pt.size(); ++i) {
    if (pt[i].second->size() != gt[i].second->size()) {
      throw std::invalid_argument(std::string(who) + ": shape mismatch at " + pt[i].first);
    }
  }
  if (grads.embedding.size() != static_cast<size_t>(channels.count())) {
    throw std::invalid_argument(std::string(who) + ": embedding gradient channel count mismatch");
  }
}

}  // namespace

void sgd_step(ModelParams& params, ChannelSet& channels, const Gradients& grads, double lr) {
  check_step_shapes(params, channels, grads, "sgd_step");
  auto pt = named_tensors(params);
  auto gt = named_tensors(grads.tensors);
  for (size_t i = 0; i < pt.size(); ++i) {
    Vector& p = *pt[i].second;
    const Vector& g = *gt[i].second;
    for (size_t j = 0; j < p.size(); ++j) p[j] -= lr * g[j];
  }
  for (int k = 0; k < channels.count(); ++k) {
    auto& table = channels.tables[static_cast<size_t>(k)];
    if (!table.trainable) continue;
    for (const auto& [id, grow] : grads.embedding[static_cast<size_t>(k)]) {
      if (id == Vocabulary::kPadId) continue;
      double* row = table.weights.row(id);
      for (size_t c = 0; c < grow.size(); ++c) row[c] -= lr * grow[c];
    }
  }
}

void adadelta_step(ModelParams& params, ChannelSet& channels, const Gradients& grads,
                   OptimizerState& state, double rho, double eps) {
  check_step_shapes(params, channels, grads, "adadelta_step");
  state.steps += 1;

  auto update_one = [rho, eps](double& theta, double g, double& eg2, double& edx2) {
    eg2 = rho * eg2 + (1.0 - rho) * g * g;
    const double dx = -(std::sqrt(edx2 + eps) / std::sqrt(eg2 + eps)) * g;
    edx2 = rho * edx2 + (1.0 - rho) * dx * dx;
    theta += dx;
  };

  auto pt = named_tensors(params);
  auto gt = named_tensors(grads.tensors);
  auto st_g = named_tensors(state.grad_sq);
  auto st_u = named_tensors(state.update_sq);
  for (size_t i = 0; i < pt.size(); ++i) {
    Vector& p = *pt[i].second;
    const Vector& g = *gt[i].second;
    Vector& eg2 = *st_g[i].second;
    Vector& edx2 = *st_u[i].second;
    if (eg2.size() != p.size() || edx2.size() != p.size()) {
      throw std::invalid_argument("adadelta_step: state shape mismatch at " + pt[i].first);
    }
    for (size_t j = 0; j < p.size(); ++j) update_one(p[j], g[j], eg2[j], edx2[j]);
  }

  for (int k = 0; k < channels.count(); ++k) {
    auto& table = channels.tables[static_cast<size_t>(k)];
    if (!table.trainable) continue;
    Matrix& eg2 = state.emb_grad_sq[static_cast<size_t>(k)];
    Matrix& edx2 = state.emb_update_sq[static_cast<size_t>(k)];
    // untouched rows see a zero gradient: averages decay, weights stay put
    for (double& x : eg2.data()) x *= rho;
    for (double& x : edx2.data()) x *= rho;
    for (const auto& [id, grow] : grads.embedding[static_cast<size_t>(k)]) {
      if (id == Vocabulary::kPadId) continue;
      double* row = table.weights.row(id);
      double* eg2_row = eg2.row(id);
      double* edx2_row = edx2.row(id);
      for (size_t c = 0; c < grow.size(); ++c) {
        const double g = grow[c];
        eg2_row[c] += (1.0 - rho) * g * g;
        const double dx = -(std::sqrt(edx2_row[c] + eps) / std::sqrt(eg2_row[c] + eps)) * g;
        edx2_row[c] += (1.0 - rho) * dx * dx;
        row[c] += dx;
      }
    }
  }
}

namespace {

void check_train_inputs(const Dataset& data, const ChannelSet& channels,
                        const ModelParams& params, const ModelConfig& mcfg) {
  mcfg.validate();
  if (data.empty()) throw std::invalid_argument("train: empty dataset");
  if (data.class_count != mcfg.class_count) {
    throw std::invalid_argument("train: dataset has " + std::to_string(data.class_count) +
                                " classes but model expects " + std::to_string(mcfg.class_count));
  }
  if (data.max_length != mcfg.max_length) {
    throw std::invalid_argument("train: dataset encoded to length " +
                                std::to_string(data.max_length) + " but model expects " +
                                std::to_string(mcfg.max_length));
  }
  if (channels.count() != mcfg.channels || channels.dim() != mcfg.embedding_dim) {
    throw std::invalid_argument("train: channel set does not match model config");
  }
  if (static_cast<int>(params.regions.size()) != mcfg.region_count()) {
    throw std::invalid_argument("train: params do not match model config");
  }
}

}  // namespace

TrainResult train(const Dataset& train_set, const Dataset* val_set, ChannelSet& channels,
                  ModelParams& params, const ModelConfig& mcfg, const TrainConfig& tcfg,
                  Rng& rng) {
  check_train_inputs(train_set, channels, params, mcfg);
  tcfg.validate();

  TrainResult result;
  if (tcfg.epochs == 0) return result;

  OptimizerState state;
  if (tcfg.optimizer == OptimizerKind::adadelta) {
    state = make_optimizer_state(params, channels);
  }

  const size_t n = train_set.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});

  double best_acc = -1.0;
  ModelParams best_params;
  ChannelSet best_channels;

  for (int epoch = 1; epoch <= tcfg.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    for (size_t start = 0; start < n; start += static_cast<size_t>(tcfg.batch_size)) {
      const size_t end = std::min(n, start + static_cast<size_t>(tcfg.batch_size));
      Gradients grads = zero_gradients(params, channels.count());
      for (size_t i = start; i < end; ++i) {
        const EncodedSentence& sent = train_set.sentences[order[i]];
        ForwardTrace trace = forward(sent, channels, params, mcfg, true, &rng);
        loss_sum += cross_entropy(trace.probs, sent.label);
        accumulate_backward(trace, sent.label, params, mcfg, grads);
      }
      grads.scale(1.0 / static_cast<double>(end - start));
      if (tcfg.optimizer == OptimizerKind::sgd) {
        sgd_step(params, channels, grads, tcfg.learning_rate);
      } else {
        adadelta_step(params, channels, grads, state, tcfg.rho, tcfg.epsilon);
      }
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / static_cast<double>(n);
    if (val_set) {
      const EvalReport rep = evaluate(*val_set, channels, params, mcfg);
      stats.val_accuracy = rep.accuracy;
      stats.has_val = true;
      if (rep.accuracy > best_acc) {
        best_acc = rep.accuracy;
        best_params = params;
        best_channels = channels;
        result.best_epoch = epoch;
      }
    }
    result.history.push_back(stats);
  }

  if (val_set && result.best_epoch > 0) {
    params = std::move(best_params);
    channels = std::move(best_channels);
  }
  return result;
}

EvalReport evaluate(const Dataset& data, const ChannelSet& channels, const ModelParams& params,
                    const ModelConfig& cfg) {
  check_train_inputs(data, channels, params, cfg);
  EvalReport report;
  report.confusion.assign(static_cast<size_t>(cfg.class_count),
                          std::vector<int64_t>(static_cast<size_t>(cfg.class_count), 0));
  int64_t correct = 0;
  double loss_sum = 0.0;
  for (const auto& sent : data.sentences) {
    const ForwardTrace trace = forward(sent, channels, params, cfg, false, nullptr);
    int pred = 0;
    for (int c = 1; c < cfg.class_count; ++c) {
      if (trace.probs[static_cast<size_t>(c)] > trace.probs[static_cast<size_t>(pred)]) pred = c;
    }
    report.confusion[static_cast<size_t>(sent.label)][static_cast<size_t>(pred)] += 1;
    if (pred == sent.label) ++correct;
    loss_sum += cross_entropy(trace.probs, sent.label);
  }
  report.total = static_cast<int64_t>(data.size());
  report.accuracy = static_cast<double>(correct) / static_cast<double>(report.total);
  report.mean_loss = loss_sum / static_cast<double>(report.total);
  report.config_echo = cfg.describe();
  return report;
}

namespace {

Dataset subset(const Dataset& data, const std::vector<size_t>& idx) {
  Dataset out;
  out.class_count = data.class_count;
  out.max_length = data.max_length;
  out.vocab = data.vocab;
  out.sentences.reserve(idx.size());
  for (size_t i : idx) out.sentences.push_back(data.sentences[i]);
  return out;
}

struct Split {
  std::vector<size_t> train;
  std::vector<size_t> eval;
};

std::vector<Split> make_splits(size_t n, const Protocol& protocol, Rng& rng) {
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  rng.shuffle(order);

  std::vector<Split> splits;
  if (protocol.kind == Protocol::Kind::holdout) {
    if (protocol.fraction <= 0.0) {
      throw std::invalid_argument("run_protocol: holdout fraction must be positive");
    }
    size_t n_eval = static_cast<size_t>(
        std::llround(protocol.fraction * static_cast<double>(n)));
    n_eval = std::clamp<size_t>(n_eval, 1, n - 1);
    Split s;
    s.eval.assign(order.begin(), order.begin() + static_cast<long>(n_eval));
    s.train.assign(order.begin() + static_cast<long>(n_eval), order.end());
    splits.push_back(std::move(s));
  } else {
    const size_t k = static_cast<size_t>(protocol.folds);
    if (k > n) throw std::invalid_argument("run_protocol: fold count exceeds dataset size");
    const size_t base = n / k;
    const size_t rem = n % k;
    size_t at = 0;
    std::vector<std::pair<size_t, size_t>> ranges;  // [begin, end) into order
    for (size_t f = 0; f < k; ++f) {
      const size_t len = base + (f < rem ? 1 : 0);
      ranges.emplace_back(at, at + len);
      at += len;
    }
    for (size_t f = 0; f < k; ++f) {
      Split s;
      for (size_t g = 0; g < k; ++g) {
        auto [b, e] = ranges[g];
        auto& dst = g == f ? s.eval : s.train;
        dst.insert(dst.end(), order.begin() + static_cast<long>(b),
                   order.begin() + static_cast<long>(e));
      }
      splits.push_back(std::move(s));
    }
  }
  return splits;
}

}  // namespace

AggregateReport run_protocol(const Dataset& data, const EmbeddingSpec& embedding,
                             const ModelConfig& mcfg, const TrainConfig& tcfg) {
  tcfg.validate();
  if (data.empty()) throw std::invalid_argument("run_protocol: empty dataset");

  ModelConfig cfg = mcfg;
  cfg.channels = channel_count(embedding.variant);
  cfg.embedding_dim = embedding.dim;
  cfg.class_count = data.class_count;
  cfg.max_length = data.max_length;
  cfg.validate();

  AggregateReport agg;
  std::vector<double> run_accuracies;
  const Rng base(tcfg.seed);
  for (int rep = 0; rep < tcfg.repeats; ++rep) {
    Rng rep_rng = base.derive(static_cast<uint64_t>(rep) + 1);
    auto splits = make_splits(data.size(), tcfg.protocol, rep_rng);
    double rep_sum = 0.0;
    for (size_t f = 0; f < splits.size(); ++f) {
      Rng run_rng = rep_rng.derive(f + 1);
      Rng channel_rng = run_rng.derive(1);
      Rng param_rng = run_rng.derive(2);
      Rng train_rng = run_rng.derive(3);

      ChannelSet channels = make_channels(embedding, *data.vocab, channel_rng);
      ModelParams params = init_params(cfg, param_rng);
      Dataset train_split = subset(data, splits[f].train);
      Dataset eval_split = subset(data, splits[f].eval);
      train(train_split, &eval_split, channels, params, cfg, tcfg, train_rng);
      EvalReport report = evaluate(eval_split, channels, params, cfg);
      report.repeat_index = rep;
      rep_sum += report.accuracy;
      run_accuracies.push_back(report.accuracy);
      agg.runs.push_back(std::move(report));
    }
    agg.repeat_accuracies.push_back(rep_sum / static_cast<double>(splits.size()));
  }

  const double n = static_cast<double>(run_accuracies.size());
  double mean = 0.0;
  for (double a : run_accuracies) mean += a;
  mean /= n;
  double var = 0.0;
  for (double a : run_accuracies) var += (a - mean) * (a - mean);
  agg.mean_accuracy = mean;
  agg.stddev_accuracy = run_accuracies.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
  return agg;
}

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "embedding") return SweepAxis::embedding;
  if (name == "region_size") return SweepAxis::region_size;
  if (name == "filter_count" || name == "filters") return SweepAxis::filter_count;
  if (name == "dropout") return SweepAxis::dropout;
  if (name == "activation") return SweepAxis::activation;
  throw std::invalid_argument("unknown sweep axis: " + name);
}

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::embedding: return "embedding";
    case SweepAxis::region_size: return "region_size";
    case SweepAxis::filter_count: return "filter_count";
    case SweepAxis::dropout: return "dropout";
    case SweepAxis::activation: return "activation";
  }
  return "?";
}

std::vector<std::string> split_sweep_values(SweepAxis axis, const std::string& values) {
  std::vector<std::string> out;
  if (axis == SweepAxis::region_size) {
    // parenthesized tuples: (3,4,5),(4,5,6)
    size_t i = 0;
    while (i < values.size()) {
      const size_t open = values.find('(', i);
      if (open == std::string::npos) break;
      const size_t close = values.find(')', open);
      if (close == std::string::npos) {
        throw std::invalid_argument("region_size values: missing ')' in '" + values + "'");
      }
      out.push_back(values.substr(open, close - open + 1));
      i = close + 1;
    }
    if (out.empty()) {
      throw std::invalid_argument("region_size values must be tuples like (3,4,5)");
    }
  } else {
    std::string cur;
    for (char c : values) {
      if (c == ',') {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
      } else if (!std::isspace(static_cast<unsigned char>(c))) {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) out.push_back(cur);
    if (out.empty()) throw std::invalid_argument("sweep: empty value list");
  }
  return out;
}

namespace {

std::vector<int> parse_region_tuple(const std::string& value) {
  if (value.size() < 3 || value.front() != '(' || value.back() != ')') {
    throw std::invalid_argument("invalid region size tuple: " + value);
  }
  std::vector<int> out;
  std::string inner = value.substr(1, value.size() - 2);
  std::stringstream ss(inner);
  std::string part;
  while (std::getline(ss, part, ',')) {
    int h = 0;
    auto res = std::from_chars(part.data(), part.data() + part.size(), h);
    if (res.ec != std::errc{} || res.ptr != part.data() + part.size() || h < 1) {
      throw std::invalid_argument("invalid region size tuple: " + value);
    }
    out.push_back(h);
  }
  if (out.empty()) throw std::invalid_argument("invalid region size tuple: " + value);
  return out;
}

}  // namespace

std::vector<SweepRow> sweep(const Dataset& data, const EmbeddingSpec& base_embedding,
                            const ModelConfig& base_model, const TrainConfig& tcfg,
                            SweepAxis axis, const std::vector<std::string>& values) {
  if (values.empty()) throw std::invalid_argument("sweep: no values given");

  struct Prepared {
    std::string label;
    EmbeddingSpec embedding;
    ModelConfig model;
  };
  std::vector<Prepared> prepared;
  for (const auto& value : values) {
    Prepared p{value, base_embedding, base_model};
    switch (axis) {
      case SweepAxis::embedding:
        p.embedding.variant = parse_embedding_variant(value);
        break;
      case SweepAxis::region_size:
        p.model.region_sizes = parse_region_tuple(value);
        break;
      case SweepAxis::filter_count: {
        int m = 0;
        auto res = std::from_chars(value.data(), value.data() + value.size(), m);
        if (res.ec != std::errc{} || res.ptr != value.data() + value.size() || m < 1) {
          throw std::invalid_argument("invalid filter count: " + value);
        }
        p.model.filters_per_region = m;
        break;
      }
      case SweepAxis::dropout: {
        double rate = 0.0;
        try {
          rate = std::stod(value);
        } catch (const std::exception&) {
          throw std::invalid_argument("invalid dropout rate: " + value);
        }
        if (rate < 0.0 || rate >= 1.0) throw std::invalid_argument("invalid dropout rate: " + value);
        p.model.dropout = rate;
        break;
      }
      case SweepAxis::activation:
        p.model.activation = parse_activation(value);
        break;
    }
    prepared.push_back(std::move(p));
  }

  std::sort(prepared.begin(), prepared.end(), [axis](const Prepared& a, const Prepared& b) {
    switch (axis) {
      case SweepAxis::filter_count:
        return a.model.filters_per_region < b.model.filters_per_region;
      case SweepAxis::dropout: return a.model.dropout < b.model.dropout;
      case SweepAxis::region_size: return a.model.region_sizes < b.model.region_sizes;
      default: return a.label < b.label;
    }
  });

  std::vector<SweepRow> rows;
  rows.reserve(prepared.size());
  for (const auto& p : prepared) {
    SweepRow row;
    row.value = p.label;
    row.report = run_protocol(data, p.embedding, p.model, tcfg);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

}  // namespace

std::string history_csv(const std::vector<EpochStats>& history) {
  std::string out = "epoch,train_loss,val_accuracy\n";
  for (const auto& st : history) {
    out += std::to_string(st.epoch);
    out += ",";
    out += csv_num(st.train_loss);
    out += ",";
    if (st.has_val) out += csv_num(st.val_accuracy);
    out += "\n";
  }
  return out;
}

std::string report_csv(const EvalReport& report) {
  std::string out = "accuracy,mean_loss,total\n";
  out += csv_num(report.accuracy);
  out += ",";
  out += csv_num(report.mean_loss);
  out += ",";
  out += std::to_string(report.total);
  out += "\n\ntrue_label,predicted_label,count\n";
  for (size_t t = 0; t < report.confusion.size(); ++t) {
    for (size_t p = 0; p < report.confusion[t].size(); ++p) {
      out += std::to_string(t) + "," + std::to_string(p) + "," +
             std::to_string(report.confusion[t][p]) + "\n";
    }
  }
  return out;
}

std::string aggregate_csv(const AggregateReport& report) {
  std::string out = "mean_accuracy,stddev_accuracy";
  for (size_t r = 0; r < report.repeat_accuracies.size(); ++r) {
    out += ",rep" + std::to_string(r + 1);
  }
  out += "\n";
  out += csv_num(report.mean_accuracy);
  out += ",";
  out += csv_num(report.stddev_accuracy);
  for (double a : report.repeat_accuracies) {
    out += ",";
    out += csv_num(a);
  }
  out += "\n";
  return out;
}

std::string sweep_csv(SweepAxis axis, const std::vector<SweepRow>& rows) {
  size_t repeats = 0;
  for (const auto& row : rows) repeats = std::max(repeats, row.report.repeat_accuracies.size());
  std::string out = "axis,value,mean_accuracy,stddev_accuracy";
  for (size_t r = 0; r < repeats; ++r) out += ",rep" + std::to_string(r + 1);
  out += "\n";
  for (const auto& row : rows) {
    out += to_string(axis);
    out += ",";
    out += csv_escape(row.value);
    out += ",";
    out += csv_num(row.report.mean_accuracy);
    out += ",";
    out += csv_num(row.report.stddev_accuracy);
    for (double a : row.report.repeat_accuracies) {
      out += ",";
      out += csv_num(a);
    }
    out += "\n";
  }
  return out;
}

std::string sweep_table(SweepAxis axis, const std::vector<SweepRow>& rows) {
  size_t width = std::string("value").size();
  for (const auto& row : rows) width = std::max(width, row.value.size());
  std::ostringstream os;
  os << to_string(axis) << " sweep\n";
  char line[128];
  std::snprintf(line, sizeof(line), "%-*s  %12s  %12s\n", static_cast<int>(width), "value",
                "mean_acc", "stddev");
  os << line;
  for (const auto& row : rows) {
    std::snprintf(line, sizeof(line), "%-*s  %12.4f  %12.4f\n", static_cast<int>(width),
                  row.value.c_str(), row.report.mean_accuracy, row.report.stddev_accuracy);
    os << line;
  }
  return os.str();
}

}  // namespace acnn
