#include "acnn/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace acnn {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
    throw std::runtime_error("checkpoint: tensor '" + name + "' is not a nested array");
  }
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      throw std::runtime_error("checkpoint: ragged rows in tensor '" + name + "'");
    }
    for (int c = 0; c < cols; ++c) m(r, c) = row[static_cast<size_t>(c)].get<double>();
  }
  return m;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (double x : v) out.push_back(x);
  return out;
}

Vector vector_from_json(const json& j, const std::string& name) {
  if (!j.is_array()) throw std::runtime_error("checkpoint: tensor '" + name + "' is not an array");
  Vector v;
  v.reserve(j.size());
  for (const auto& x : j) v.push_back(x.get<double>());
  return v;
}

json config_to_json(const ModelConfig& cfg) {
  return json{{"region_sizes", cfg.region_sizes},
              {"filters_per_region", cfg.filters_per_region},
              {"embedding_dim", cfg.embedding_dim},
              {"channels", cfg.channels},
              {"attention_dim", cfg.attention_dim},
              {"class_count", cfg.class_count},
              {"activation", to_string(cfg.activation)},
              {"dropout", cfg.dropout},
              {"padding", to_string(cfg.padding)},
              {"pooling", to_string(cfg.pooling)},
              {"max_length", cfg.max_length}};
}

ModelConfig config_from_json(const json& j) {
  ModelConfig cfg;
  cfg.region_sizes = j.at("region_sizes").get<std::vector<int>>();
  cfg.filters_per_region = j.at("filters_per_region").get<int>();
  cfg.embedding_dim = j.at("embedding_dim").get<int>();
  cfg.channels = j.at("channels").get<int>();
  cfg.attention_dim = j.at("attention_dim").get<int>();
  cfg.class_count = j.at("class_count").get<int>();
  cfg.activation = parse_activation(j.at("activation").get<std::string>());
  cfg.dropout = j.at("dropout").get<double>();
  cfg.padding = parse_padding(j.at("padding").get<std::string>());
  cfg.pooling = parse_pooling(j.at("pooling").get<std::string>());
  cfg.max_length = j.at("max_length").get<int>();
  return cfg;
}

void check_shapes(const TrainedModel& model) {
  const ModelConfig& cfg = model.config;
  cfg.validate();
  const int m = cfg.filters_per_region;
  const int ka = cfg.effective_attention_dim();
  if (static_cast<int>(model.params.regions.size()) != cfg.region_count()) {
    throw std::runtime_error("checkpoint: region count does not match config");
  }
  for (size_t ri = 0; ri < model.params.regions.size(); ++ri) {
    const auto& r = model.params.regions[ri];
    const int h = cfg.region_sizes[ri];
    if (r.region_size != h) throw std::runtime_error("checkpoint: region size mismatch");
    if (static_cast<int>(r.filters.size()) != m ||
        static_cast<int>(r.filter_bias.size()) != m) {
      throw std::runtime_error("checkpoint: filter count mismatch");
    }
    for (const auto& f : r.filters) {
      if (f.rows() != cfg.channels * h || f.cols() != cfg.embedding_dim) {
        throw std::runtime_error("checkpoint: filter shape mismatch");
      }
    }
    if (r.att_w.rows() != m || r.att_w.cols() != ka ||
        static_cast<int>(r.att_b.size()) != ka) {
      throw std::runtime_error("checkpoint: attention shape mismatch");
    }
  }
  if (static_cast<int>(model.params.att_u.size()) != ka) {
    throw std::runtime_error("checkpoint: content vector shape mismatch");
  }
  if (model.params.dense_w.rows() != cfg.pooled_len() ||
      model.params.dense_w.cols() != cfg.class_count ||
      static_cast<int>(model.params.dense_b.size()) != cfg.class_count) {
    throw std::runtime_error("checkpoint: dense layer shape mismatch");
  }
  if (model.channels.count() != cfg.channels) {
    throw std::runtime_error("checkpoint: channel count mismatch");
  }
  for (const auto& t : model.channels.tables) {
    if (t.weights.rows() != model.vocab->size() || t.weights.cols() != cfg.embedding_dim) {
      throw std::runtime_error("checkpoint: embedding table shape mismatch");
    }
  }
}

}  // namespace

void save_checkpoint(const TrainedModel& model, const std::string& path) {
  check_shapes(model);
  json j;
  j["format_version"] = kFormatVersion;
  j["config"] = config_to_json(model.config);
  j["vocabulary"] = model.vocab->tokens();
  j["vocab_digest"] = model.vocab->digest();

  json regions = json::array();
  for (const auto& r : model.params.regions) {
    json jr;
    jr["region_size"] = r.region_size;
    json filters = json::array();
    for (const auto& f : r.filters) filters.push_back(matrix_to_json(f));
    jr["filters"] = std::move(filters);
    jr["filter_bias"] = vector_to_json(r.filter_bias);
    jr["att_w"] = matrix_to_json(r.att_w);
    jr["att_b"] = vector_to_json(r.att_b);
    regions.push_back(std::move(jr));
  }
  j["params"] = json{{"regions", std::move(regions)},
                     {"att_u", vector_to_json(model.params.att_u)},
                     {"dense_w", matrix_to_json(model.params.dense_w)},
                     {"dense_b", vector_to_json(model.params.dense_b)}};

  json channels = json::array();
  for (const auto& t : model.channels.tables) {
    channels.push_back(json{{"trainable", t.trainable}, {"weights", matrix_to_json(t.weights)}});
  }
  j["channels"] = std::move(channels);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out << j.dump();
  out << '\n';
  if (!out) throw std::runtime_error("failed writing checkpoint: " + path);
}

TrainedModel load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("checkpoint parse error in " + path + ": " + e.what());
  }

  try {
    if (!j.contains("format_version") || j.at("format_version").get<int>() != kFormatVersion) {
      throw std::runtime_error("checkpoint: unsupported format_version in " + path);
    }
    if (!j.contains("vocab_digest")) {
      throw std::runtime_error("checkpoint: vocab_digest missing in " + path);
    }

    TrainedModel model;
    model.config = config_from_json(j.at("config"));

    auto vocab = std::make_shared<Vocabulary>(
        Vocabulary::from_tokens(j.at("vocabulary").get<std::vector<std::string>>()));
    const auto stored_digest = j.at("vocab_digest").get<std::string>();
    if (vocab->digest() != stored_digest) {
      throw std::runtime_error("checkpoint: vocab_digest does not match the stored vocabulary");
    }
    model.vocab = std::move(vocab);

    const auto& jp = j.at("params");
    for (const auto& jr : jp.at("regions")) {
      RegionParams r;
      r.region_size = jr.at("region_size").get<int>();
      for (const auto& jf : jr.at("filters")) {
        r.filters.push_back(matrix_from_json(jf, "filter"));
      }
      r.filter_bias = vector_from_json(jr.at("filter_bias"), "filter_bias");
      r.att_w = matrix_from_json(jr.at("att_w"), "att_w");
      r.att_b = vector_from_json(jr.at("att_b"), "att_b");
      model.params.regions.push_back(std::move(r));
    }
    model.params.att_u = vector_from_json(jp.at("att_u"), "att_u");
    model.params.dense_w = matrix_from_json(jp.at("dense_w"), "dense_w");
    model.params.dense_b = vector_from_json(jp.at("dense_b"), "dense_b");

    for (const auto& jc : j.at("channels")) {
      EmbeddingTable t;
      t.trainable = jc.at("trainable").get<bool>();
      t.weights = matrix_from_json(jc.at("weights"), "channel weights");
      model.channels.tables.push_back(std::move(t));
    }

    check_shapes(model);
    return model;
  } catch (const json::exception& e) {
    throw std::runtime_error("checkpoint structure error in " + path + ": " + e.what());
  }
}

}  // namespace acnn
