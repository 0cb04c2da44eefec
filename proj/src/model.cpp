#include "acnn/model.hpp"

#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace acnn {

Padding parse_padding(const std::string& name) {
  if (name == "wide") return Padding::wide;
  if (name == "narrow") return Padding::narrow;
  throw std::invalid_argument("unknown padding mode: " + name);
}

Pooling parse_pooling(const std::string& name) {
  if (name == "max") return Pooling::max;
  if (name == "average") return Pooling::average;
  if (name == "min") return Pooling::min;
  throw std::invalid_argument("unknown pooling strategy: " + name);
}

const char* to_string(Padding p) { return p == Padding::wide ? "wide" : "narrow"; }

const char* to_string(Pooling p) {
  switch (p) {
    case Pooling::max: return "max";
    case Pooling::average: return "average";
    case Pooling::min: return "min";
  }
  return "?";
}

void ModelConfig::validate() const {
  if (region_sizes.empty()) throw std::invalid_argument("config: need at least one region size");
  for (int h : region_sizes) {
    if (h < 1) throw std::invalid_argument("config: region sizes must be positive");
  }
  if (filters_per_region < 1) throw std::invalid_argument("config: filters_per_region must be >= 1");
  if (embedding_dim < 1) throw std::invalid_argument("config: embedding_dim must be >= 1");
  if (channels < 1) throw std::invalid_argument("config: channels must be >= 1");
  if (attention_dim < 0) throw std::invalid_argument("config: attention_dim must be >= 0");
  if (class_count < 2) throw std::invalid_argument("config: class_count must be >= 2");
  if (dropout < 0.0 || dropout >= 1.0) {
    throw std::invalid_argument("config: dropout must be in [0, 1)");
  }
  if (max_length < 1) throw std::invalid_argument("config: max_length must be >= 1");
  if (padding == Padding::narrow) {
    for (int h : region_sizes) {
      if (h > max_length) {
        throw std::invalid_argument("config: region size " + std::to_string(h) +
                                    " exceeds max_length " + std::to_string(max_length) +
                                    " in narrow mode");
      }
    }
  }
}

std::string ModelConfig::describe() const {
  std::ostringstream os;
  os << "regions=(";
  for (size_t i = 0; i < region_sizes.size(); ++i) {
    if (i) os << ",";
    os << region_sizes[i];
  }
  os << ") filters=" << filters_per_region << " dim=" << embedding_dim
     << " channels=" << channels << " attention_dim=" << effective_attention_dim()
     << " classes=" << class_count << " activation=" << to_string(activation)
     << " dropout=" << dropout << " padding=" << to_string(padding)
     << " pooling=" << to_string(pooling) << " max_length=" << max_length;
  return os.str();
}

Matrix glorot_matrix(int rows, int cols, int fan_in, int fan_out, Rng& rng) {
  const double r = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Matrix m(rows, cols);
  for (double& x : m.data()) x = rng.uniform(-r, r);
  return m;
}

ModelParams init_params(const ModelConfig& cfg, Rng& rng) {
  cfg.validate();
  const int m = cfg.filters_per_region;
  const int d = cfg.embedding_dim;
  const int K = cfg.channels;
  const int ka = cfg.effective_attention_dim();

  ModelParams p;
  for (int h : cfg.region_sizes) {
    RegionParams r;
    r.region_size = h;
    r.filters.reserve(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
      // per filter: fan_in is the window volume, fan_out the single map value
      r.filters.push_back(glorot_matrix(K * h, d, K * h * d, 1, rng));
    }
    r.filter_bias.assign(static_cast<size_t>(m), 0.0);
    r.att_w = glorot_matrix(m, ka, m, ka, rng);
    r.att_b.assign(static_cast<size_t>(ka), 0.0);
    p.regions.push_back(std::move(r));
  }
  p.att_u.assign(static_cast<size_t>(ka), 0.0);  // zero start: uniform attention
  p.dense_w = glorot_matrix(cfg.pooled_len(), cfg.class_count, cfg.pooled_len(),
                            cfg.class_count, rng);
  p.dense_b.assign(static_cast<size_t>(cfg.class_count), 0.0);
  return p;
}

ModelParams zeros_like(const ModelParams& p) {
  ModelParams z = p;
  for (auto& [name, vec] : named_tensors(z)) {
    (void)name;
    std::fill(vec->begin(), vec->end(), 0.0);
  }
  return z;
}

std::vector<std::pair<std::string, Vector*>> named_tensors(ModelParams& p) {
  std::vector<std::pair<std::string, Vector*>> out;
  for (size_t i = 0; i < p.regions.size(); ++i) {
    auto& r = p.regions[i];
    const std::string prefix = "region" + std::to_string(i) + "/";
    for (size_t j = 0; j < r.filters.size(); ++j) {
      out.emplace_back(prefix + "filter" + std::to_string(j), &r.filters[j].data());
    }
    out.emplace_back(prefix + "filter_bias", &r.filter_bias);
    out.emplace_back(prefix + "att_w", &r.att_w.data());
    out.emplace_back(prefix + "att_b", &r.att_b);
  }
  out.emplace_back("att_u", &p.att_u);
  out.emplace_back("dense_w", &p.dense_w.data());
  out.emplace_back("dense_b", &p.dense_b);
  return out;
}

std::vector<std::pair<std::string, const Vector*>> named_tensors(const ModelParams& p) {
  auto mutable_list = named_tensors(const_cast<ModelParams&>(p));
  std::vector<std::pair<std::string, const Vector*>> out;
  out.reserve(mutable_list.size());
  for (auto& [name, vec] : mutable_list) out.emplace_back(name, vec);
  return out;
}

bool bitwise_equal(const ModelParams& a, const ModelParams& b) {
  auto ta = named_tensors(a);
  auto tb = named_tensors(b);
  if (ta.size() != tb.size()) return false;
  for (size_t i = 0; i < ta.size(); ++i) {
    if (ta[i].first != tb[i].first) return false;
    const Vector& va = *ta[i].second;
    const Vector& vb = *tb[i].second;
    if (va.size() != vb.size()) return false;
    if (!va.empty() &&
        std::memcmp(va.data(), vb.data(), va.size() * sizeof(double)) != 0) {
      return false;
    }
  }
  return true;
}

bool bitwise_equal(const ChannelSet& a, const ChannelSet& b) {
  if (a.count() != b.count()) return false;
  for (int k = 0; k < a.count(); ++k) {
    const auto& ta = a.tables[static_cast<size_t>(k)];
    const auto& tb = b.tables[static_cast<size_t>(k)];
    if (ta.trainable != tb.trainable || !ta.weights.same_shape(tb.weights)) return false;
    const Vector& va = ta.weights.data();
    const Vector& vb = tb.weights.data();
    if (std::memcmp(va.data(), vb.data(), va.size() * sizeof(double)) != 0) return false;
  }
  return true;
}

namespace {

// Pre-bias sliding-window dot products; padding rows contribute nothing.
Vector conv_core(const std::vector<Matrix>& input, const Matrix& filter, int h, Padding pad) {
  const int s = input[0].rows();
  const int d = input[0].cols();
  const int K = static_cast<int>(input.size());
  const int offset = pad == Padding::wide ? h - 1 : 0;
  const int positions = pad == Padding::wide ? s + h - 1 : s - h + 1;
  if (positions < 1) {
    throw std::invalid_argument("conv_region: region size " + std::to_string(h) +
                                " exceeds sentence length " + std::to_string(s) +
                                " in narrow mode");
  }
  if (filter.rows() != K * h || filter.cols() != d) {
    throw std::invalid_argument("conv_region: filter shape " + filter.shape_str() +
                                " does not match window " + std::to_string(K * h) + "x" +
                                std::to_string(d));
  }
  Vector out(static_cast<size_t>(positions));
  for (int pos = 0; pos < positions; ++pos) {
    double acc = 0.0;
    for (int k = 0; k < K; ++k) {
      const Matrix& a = input[static_cast<size_t>(k)];
      for (int wr = 0; wr < h; ++wr) {
        const int row = pos - offset + wr;
        if (row < 0 || row >= s) continue;
        const double* arow = a.row(row);
        const double* frow = filter.row(k * h + wr);
        for (int c = 0; c < d; ++c) acc += arow[c] * frow[c];
      }
    }
    out[static_cast<size_t>(pos)] = acc;
  }
  return out;
}

}  // namespace

Vector conv_region(const std::vector<Matrix>& input, const Matrix& filter, double bias,
                   Activation act, Padding pad) {
  if (input.empty()) throw std::invalid_argument("conv_region: empty input tensor");
  const int h = filter.rows() / static_cast<int>(input.size());
  Vector out = conv_core(input, filter, h, pad);
  for (double& x : out) x = activate(act, x + bias);
  return out;
}

AttendResult attend_region(const std::vector<Vector>& maps, const Matrix& att_w,
                           const Vector& att_b, const Vector& att_u) {
  if (maps.empty()) throw std::invalid_argument("attend_region: no feature maps");
  const int m = static_cast<int>(maps.size());
  const int p = static_cast<int>(maps[0].size());
  if (p < 1) throw std::invalid_argument("attend_region: empty feature map");
  for (const auto& map : maps) {
    if (static_cast<int>(map.size()) != p) {
      throw std::invalid_argument("attend_region: feature map length mismatch (" +
                                  std::to_string(map.size()) + " vs " + std::to_string(p) + ")");
    }
  }
  const int ka = static_cast<int>(att_b.size());
  if (att_w.rows() != m || att_w.cols() != ka || static_cast<int>(att_u.size()) != ka) {
    throw std::invalid_argument("attend_region: attention parameter shape mismatch");
  }

  AttendResult res;
  res.stacked = Matrix(p, m);
  for (int j = 0; j < m; ++j) {
    for (int pos = 0; pos < p; ++pos) res.stacked(pos, j) = maps[static_cast<size_t>(j)][static_cast<size_t>(pos)];
  }

  res.hidden = matmul(res.stacked, att_w);
  for (int pos = 0; pos < p; ++pos) {
    double* hrow = res.hidden.row(pos);
    for (int q = 0; q < ka; ++q) hrow[q] = std::tanh(hrow[q] + att_b[static_cast<size_t>(q)]);
  }

  Vector scores(static_cast<size_t>(p), 0.0);
  for (int pos = 0; pos < p; ++pos) {
    const double* hrow = res.hidden.row(pos);
    double acc = 0.0;
    for (int q = 0; q < ka; ++q) acc += hrow[q] * att_u[static_cast<size_t>(q)];
    scores[static_cast<size_t>(pos)] = acc;
  }
  res.weights = softmax(scores);

  res.weighted = Matrix(p, m);
  for (int pos = 0; pos < p; ++pos) {
    const double w = res.weights[static_cast<size_t>(pos)];
    const double* src = res.stacked.row(pos);
    double* dst = res.weighted.row(pos);
    for (int j = 0; j < m; ++j) dst[j] = w * src[j];
  }
  return res;
}

Vector pool_region(const Matrix& weighted, Pooling pooling) {
  const int p = weighted.rows();
  const int m = weighted.cols();
  Vector out(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    double v = weighted(0, j);
    if (pooling == Pooling::average) {
      for (int pos = 1; pos < p; ++pos) v += weighted(pos, j);
      v /= static_cast<double>(p);
    } else if (pooling == Pooling::max) {
      for (int pos = 1; pos < p; ++pos) v = std::max(v, weighted(pos, j));
    } else {
      for (int pos = 1; pos < p; ++pos) v = std::min(v, weighted(pos, j));
    }
    out[static_cast<size_t>(j)] = v;
  }
  return out;
}

namespace {

void check_forward_shapes(const EncodedSentence& sent, const ChannelSet& channels,
                          const ModelParams& params, const ModelConfig& cfg) {
  if (static_cast<int>(sent.ids.size()) != cfg.max_length) {
    throw std::invalid_argument("forward: sentence encoded to " +
                                std::to_string(sent.ids.size()) + " ids but config expects " +
                                std::to_string(cfg.max_length));
  }
  if (channels.count() != cfg.channels) {
    throw std::invalid_argument("forward: channel count mismatch");
  }
  if (channels.dim() != cfg.embedding_dim) {
    throw std::invalid_argument("forward: embedding dimension mismatch");
  }
  if (static_cast<int>(params.regions.size()) != cfg.region_count()) {
    throw std::invalid_argument("forward: region count mismatch between params and config");
  }
  if (params.dense_w.rows() != cfg.pooled_len() || params.dense_w.cols() != cfg.class_count) {
    throw std::invalid_argument("forward: dense layer shape mismatch");
  }
}

}  // namespace

ForwardTrace forward(const EncodedSentence& sent, const ChannelSet& channels,
                     const ModelParams& params, const ModelConfig& cfg, bool train_mode,
                     Rng* rng) {
  check_forward_shapes(sent, channels, params, cfg);

  ForwardTrace trace;
  trace.train_mode = train_mode;
  trace.ids = sent.ids;
  trace.input = assemble(sent, channels);
  trace.channel_trainable.reserve(static_cast<size_t>(channels.count()));
  for (const auto& t : channels.tables) trace.channel_trainable.push_back(t.trainable ? 1 : 0);

  const int m = cfg.filters_per_region;
  trace.pooled.reserve(static_cast<size_t>(cfg.pooled_len()));
  for (size_t ri = 0; ri < params.regions.size(); ++ri) {
    const RegionParams& region = params.regions[ri];
    RegionTrace rt;
    rt.preact.reserve(static_cast<size_t>(m));
    std::vector<Vector> maps;
    maps.reserve(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
      Vector pre = conv_core(trace.input, region.filters[static_cast<size_t>(j)],
                             region.region_size, cfg.padding);
      Vector map(pre.size());
      const double bias = region.filter_bias[static_cast<size_t>(j)];
      for (size_t i = 0; i < pre.size(); ++i) map[i] = activate(cfg.activation, pre[i] + bias);
      rt.preact.push_back(std::move(pre));
      maps.push_back(std::move(map));
    }
    AttendResult att = attend_region(maps, region.att_w, region.att_b, params.att_u);
    rt.stacked = std::move(att.stacked);
    rt.hidden = std::move(att.hidden);
    rt.weights = std::move(att.weights);
    rt.weighted = std::move(att.weighted);
    Vector pooled = pool_region(rt.weighted, cfg.pooling);
    trace.pooled.insert(trace.pooled.end(), pooled.begin(), pooled.end());
    trace.regions.push_back(std::move(rt));
  }

  Vector dense_in = trace.pooled;
  if (train_mode && cfg.dropout > 0.0) {
    if (!rng) throw std::invalid_argument("forward: train mode with dropout needs an rng");
    trace.mask = dropout_mask(*rng, static_cast<int>(trace.pooled.size()), cfg.dropout);
    for (size_t i = 0; i < dense_in.size(); ++i) dense_in[i] *= trace.mask[i];
  }

  trace.logits = matvec_transposed(params.dense_w, dense_in);
  for (int c = 0; c < cfg.class_count; ++c) trace.logits[static_cast<size_t>(c)] += params.dense_b[static_cast<size_t>(c)];
  trace.probs = softmax(trace.logits);
  return trace;
}

void Gradients::accumulate(const Gradients& other) {
  auto mine = named_tensors(tensors);
  auto theirs = named_tensors(other.tensors);
  if (mine.size() != theirs.size()) {
    throw std::invalid_argument("Gradients::accumulate: tensor count mismatch");
  }
  for (size_t i = 0; i < mine.size(); ++i) {
    Vector& a = *mine[i].second;
    const Vector& b = *theirs[i].second;
    if (a.size() != b.size()) throw std::invalid_argument("Gradients::accumulate: shape mismatch");
    for (size_t j = 0; j < a.size(); ++j) a[j] += b[j];
  }
  if (embedding.size() != other.embedding.size()) {
    throw std::invalid_argument("Gradients::accumulate: channel count mismatch");
  }
  for (size_t k = 0; k < embedding.size(); ++k) {
    for (const auto& [id, grow] : other.embedding[k]) {
      Vector& row = embedding[k][id];
      if (row.empty()) row.assign(grow.size(), 0.0);
      for (size_t c = 0; c < grow.size(); ++c) row[c] += grow[c];
    }
  }
}

void Gradients::scale(double factor) {
  for (auto& [name, vec] : named_tensors(tensors)) {
    (void)name;
    for (double& x : *vec) x *= factor;
  }
  for (auto& channel : embedding) {
    for (auto& [id, row] : channel) {
      for (double& x : row) x *= factor;
    }
  }
}

Gradients zero_gradients(const ModelParams& params, int channel_count) {
  Gradients g;
  g.tensors = zeros_like(params);
  g.embedding.resize(static_cast<size_t>(channel_count));
  return g;
}

Gradients backward(const ForwardTrace& trace, int target, const ModelParams& params,
                   const ModelConfig& cfg) {
  Gradients g = zero_gradients(params, static_cast<int>(trace.input.size()));
  accumulate_backward(trace, target, params, cfg, g);
  return g;
}

void accumulate_backward(const ForwardTrace& trace, int target, const ModelParams& params,
                         const ModelConfig& cfg, Gradients& into) {
  if (!trace.train_mode) {
    throw std::invalid_argument("backward: trace was not produced in train mode");
  }
  const int C = cfg.class_count;
  if (static_cast<int>(trace.probs.size()) != C ||
      static_cast<int>(params.dense_b.size()) != C) {
    throw std::invalid_argument("backward: class count mismatch between trace and params");
  }
  if (target < 0 || target >= C) throw std::invalid_argument("backward: target out of range");
  if (trace.regions.size() != params.regions.size()) {
    throw std::invalid_argument("backward: region count mismatch between trace and params");
  }

  // softmax + cross-entropy collapse to probs - onehot(target)
  Vector dlogits = trace.probs;
  dlogits[static_cast<size_t>(target)] -= 1.0;

  const int n = static_cast<int>(trace.pooled.size());
  const bool masked = !trace.mask.empty();
  Vector dropped(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    dropped[static_cast<size_t>(i)] =
        masked ? trace.pooled[static_cast<size_t>(i)] * trace.mask[static_cast<size_t>(i)]
               : trace.pooled[static_cast<size_t>(i)];
  }

  Vector dpooled(static_cast<size_t>(n), 0.0);
  for (int r = 0; r < n; ++r) {
    double* gw = into.tensors.dense_w.row(r);
    const double* pw = params.dense_w.row(r);
    const double dr = dropped[static_cast<size_t>(r)];
    double acc = 0.0;
    for (int c = 0; c < C; ++c) {
      gw[c] += dr * dlogits[static_cast<size_t>(c)];
      acc += pw[c] * dlogits[static_cast<size_t>(c)];
    }
    dpooled[static_cast<size_t>(r)] = masked ? acc * trace.mask[static_cast<size_t>(r)] : acc;
  }
  for (int c = 0; c < C; ++c) into.tensors.dense_b[static_cast<size_t>(c)] += dlogits[static_cast<size_t>(c)];

  const int s = trace.input[0].rows();
  const int K = static_cast<int>(trace.input.size());
  const int m = cfg.filters_per_region;
  const int ka = cfg.effective_attention_dim();

  int offset_into_pooled = 0;
  for (size_t ri = 0; ri < params.regions.size(); ++ri) {
    const RegionParams& region = params.regions[ri];
    const RegionTrace& rt = trace.regions[ri];
    RegionParams& greg = into.tensors.regions[ri];
    const int h = region.region_size;
    const int p = static_cast<int>(rt.weights.size());
    const int pad_offset = cfg.padding == Padding::wide ? h - 1 : 0;

    // pooling: route each filter's gradient back to the rows that produced it
    Matrix dweighted(p, m, 0.0);
    for (int j = 0; j < m; ++j) {
      const double gj = dpooled[static_cast<size_t>(offset_into_pooled + j)];
      if (cfg.pooling == Pooling::average) {
        const double share = gj / static_cast<double>(p);
        for (int pos = 0; pos < p; ++pos) dweighted(pos, j) += share;
      } else {
        int arg = 0;
        double best = rt.weighted(0, j);
        for (int pos = 1; pos < p; ++pos) {
          const double v = rt.weighted(pos, j);
          const bool better = cfg.pooling == Pooling::max ? v > best : v < best;
          if (better) {
            best = v;
            arg = pos;
          }
        }
        dweighted(arg, j) += gj;
      }
    }

    // attention: weighted(pos, j) = weights[pos] * stacked(pos, j)
    Vector dweights(static_cast<size_t>(p), 0.0);
    Matrix dstacked(p, m, 0.0);
    for (int pos = 0; pos < p; ++pos) {
      const double w = rt.weights[static_cast<size_t>(pos)];
      const double* dwr = dweighted.row(pos);
      const double* xr = rt.stacked.row(pos);
      double* dxr = dstacked.row(pos);
      double acc = 0.0;
      for (int j = 0; j < m; ++j) {
        acc += dwr[j] * xr[j];
        dxr[j] += dwr[j] * w;
      }
      dweights[static_cast<size_t>(pos)] = acc;
    }

    // softmax over attention scores
    double wdot = 0.0;
    for (int pos = 0; pos < p; ++pos) {
      wdot += rt.weights[static_cast<size_t>(pos)] * dweights[static_cast<size_t>(pos)];
    }
    Vector dscores(static_cast<size_t>(p));
    for (int pos = 0; pos < p; ++pos) {
      dscores[static_cast<size_t>(pos)] =
          rt.weights[static_cast<size_t>(pos)] * (dweights[static_cast<size_t>(pos)] - wdot);
    }

    // scores = hidden * u, hidden = tanh(stacked * att_w + att_b)
    Matrix dhz(p, ka, 0.0);
    for (int pos = 0; pos < p; ++pos) {
      const double ds = dscores[static_cast<size_t>(pos)];
      const double* hrow = rt.hidden.row(pos);
      double* dzrow = dhz.row(pos);
      for (int q = 0; q < ka; ++q) {
        into.tensors.att_u[static_cast<size_t>(q)] += ds * hrow[q];
        const double dh = ds * params.att_u[static_cast<size_t>(q)];
        dzrow[q] = dh * (1.0 - hrow[q] * hrow[q]);
      }
    }
    for (int pos = 0; pos < p; ++pos) {
      const double* xr = rt.stacked.row(pos);
      const double* dzrow = dhz.row(pos);
      for (int q = 0; q < ka; ++q) {
        const double dz = dzrow[q];
        if (dz == 0.0) continue;
        greg.att_b[static_cast<size_t>(q)] += dz;
        for (int j = 0; j < m; ++j) greg.att_w(j, q) += xr[j] * dz;
      }
      double* dxr = dstacked.row(pos);
      for (int j = 0; j < m; ++j) {
        const double* wrow = region.att_w.row(j);
        double acc = 0.0;
        for (int q = 0; q < ka; ++q) acc += dzrow[q] * wrow[q];
        dxr[j] += acc;
      }
    }

    // convolution: feature map column j of stacked came from filter j
    for (int j = 0; j < m; ++j) {
      const Vector& pre = rt.preact[static_cast<size_t>(j)];
      const double bias = region.filter_bias[static_cast<size_t>(j)];
      Matrix& gfilter = greg.filters[static_cast<size_t>(j)];
      const Matrix& filter = region.filters[static_cast<size_t>(j)];
      for (int pos = 0; pos < p; ++pos) {
        const double dmap = dstacked(pos, j);
        if (dmap == 0.0) continue;
        const double dpre =
            dmap * activate_grad(cfg.activation, pre[static_cast<size_t>(pos)] + bias);
        if (dpre == 0.0) continue;
        greg.filter_bias[static_cast<size_t>(j)] += dpre;
        for (int k = 0; k < K; ++k) {
          const Matrix& a = trace.input[static_cast<size_t>(k)];
          const bool trainable = trace.channel_trainable[static_cast<size_t>(k)] != 0;
          for (int wr = 0; wr < h; ++wr) {
            const int row = pos - pad_offset + wr;
            if (row < 0 || row >= s) continue;
            const double* arow = a.row(row);
            double* gfrow = gfilter.row(k * h + wr);
            const int d = a.cols();
            for (int c = 0; c < d; ++c) gfrow[c] += dpre * arow[c];
            if (trainable) {
              const int32_t id = trace.ids[static_cast<size_t>(row)];
              if (id != Vocabulary::kPadId) {
                Vector& erow = into.embedding[static_cast<size_t>(k)][id];
                if (erow.empty()) erow.assign(static_cast<size_t>(d), 0.0);
                const double* frow = filter.row(k * h + wr);
                for (int c = 0; c < d; ++c) erow[static_cast<size_t>(c)] += dpre * frow[c];
              }
            }
          }
        }
      }
    }

    offset_into_pooled += m;
  }
}

}  // namespace acnn
