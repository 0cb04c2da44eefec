#include "acnn/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace acnn {

RunConfig default_run_config() {
  RunConfig cfg;
  // tuned configuration: regions (4,5,6), 300 filters, dropout 0.6, relu,
  // 4-channel embeddings
  cfg.model.region_sizes = {4, 5, 6};
  cfg.model.filters_per_region = 300;
  cfg.model.dropout = 0.6;
  cfg.model.activation = Activation::relu;
  cfg.embedding.variant = EmbeddingVariant::four_channel;
  cfg.embedding.dim = 200;
  return cfg;
}

void apply_preset(RunConfig& cfg, const std::string& name) {
  if (name == "optimal") {
    cfg.model.region_sizes = {4, 5, 6};
    cfg.model.filters_per_region = 300;
    cfg.model.dropout = 0.6;
    cfg.model.activation = Activation::relu;
    cfg.embedding.variant = EmbeddingVariant::four_channel;
  } else if (name == "baseline") {
    cfg.model.region_sizes = {3, 4, 5};
    cfg.model.filters_per_region = 512;
    cfg.model.dropout = 0.5;
    cfg.model.activation = Activation::relu;
    cfg.embedding.variant = EmbeddingVariant::random;
  } else {
    throw ConfigError("unknown preset: " + name + " (expected baseline or optimal)");
  }
}

namespace {

int parse_int(const std::string& value, const std::string& key) {
  int out = 0;
  auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
    throw ConfigError("config: " + key + " expects an integer, got '" + value + "'");
  }
  return out;
}

uint64_t parse_u64(const std::string& value, const std::string& key) {
  uint64_t out = 0;
  auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
    throw ConfigError("config: " + key + " expects an unsigned integer, got '" + value + "'");
  }
  return out;
}

double parse_real(const std::string& value, const std::string& key) {
  try {
    size_t used = 0;
    const double out = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " expects a number, got '" + value + "'");
  }
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config: " + key + " expects a boolean, got '" + value + "'");
}

std::vector<int> parse_int_list(const std::string& value, const std::string& key) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (!part.empty()) out.push_back(parse_int(part, key));
  }
  if (out.empty()) throw ConfigError("config: " + key + " expects a comma-separated list");
  return out;
}

std::vector<std::string> parse_str_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void set_key(RunConfig& cfg, const std::string& section, const std::string& key,
             const std::string& value) {
  const std::string full = section + "." + key;
  try {
    if (section == "data") {
      if (key == "train") cfg.train_path = value;
      else if (key == "test") cfg.test_path = value;
      else if (key == "class_count") cfg.class_count = parse_int(value, full);
      else if (key == "s_max") cfg.s_max = parse_int(value, full);
      else if (key == "min_count") cfg.min_count = parse_int(value, full);
      else throw ConfigError("config: unknown key '" + full + "'");
    } else if (section == "embedding") {
      if (key == "variant") cfg.embedding.variant = parse_embedding_variant(value);
      else if (key == "dim") cfg.embedding.dim = parse_int(value, full);
      else if (key == "word2vec") cfg.embedding.word2vec_path = value;
      else if (key == "glove") cfg.embedding.glove_path = value;
      else if (key == "fasttext") cfg.embedding.fasttext_path = value;
      else throw ConfigError("config: unknown key '" + full + "'");
    } else if (section == "model") {
      if (key == "regions") cfg.model.region_sizes = parse_int_list(value, full);
      else if (key == "filters") cfg.model.filters_per_region = parse_int(value, full);
      else if (key == "attention_dim") cfg.model.attention_dim = parse_int(value, full);
      else if (key == "activation") cfg.model.activation = parse_activation(value);
      else if (key == "dropout") cfg.model.dropout = parse_real(value, full);
      else if (key == "padding") cfg.model.padding = parse_padding(value);
      else if (key == "pooling") cfg.model.pooling = parse_pooling(value);
      else throw ConfigError("config: unknown key '" + full + "'");
    } else if (section == "train") {
      if (key == "optimizer") cfg.train.optimizer = parse_optimizer(value);
      else if (key == "learning_rate") cfg.train.learning_rate = parse_real(value, full);
      else if (key == "rho") cfg.train.rho = parse_real(value, full);
      else if (key == "epsilon") cfg.train.epsilon = parse_real(value, full);
      else if (key == "batch_size") cfg.train.batch_size = parse_int(value, full);
      else if (key == "epochs") cfg.train.epochs = parse_int(value, full);
      else if (key == "seed") cfg.train.seed = parse_u64(value, full);
      else if (key == "repeats") cfg.train.repeats = parse_int(value, full);
      else if (key == "protocol") cfg.train.protocol = parse_protocol(value);
      else throw ConfigError("config: unknown key '" + full + "'");
    } else if (section == "output") {
      if (key == "dir") cfg.out_dir = value;
      else throw ConfigError("config: unknown key '" + full + "'");
    } else if (section == "transfer") {
      if (key == "checkpoint") cfg.checkpoint_path = value;
      else if (key == "mode") cfg.transfer_mode = value;
      else if (key == "head") cfg.head_policy = value;
      else if (key == "both") cfg.both_modes = parse_bool(value, full);
      else throw ConfigError("config: unknown key '" + full + "'");
    } else if (section == "evaluate") {
      if (key == "checkpoint") cfg.checkpoint_path = value;
      else if (key == "adapt") cfg.adapt = parse_bool(value, full);
      else throw ConfigError("config: unknown key '" + full + "'");
    } else if (section == "explain") {
      if (key == "checkpoint") cfg.checkpoint_path = value;
      else if (key == "words") cfg.words = parse_str_list(value);
      else if (key == "bins") cfg.bins = parse_int(value, full);
      else if (key == "format") cfg.report_format = value;
      else throw ConfigError("config: unknown key '" + full + "'");
    } else if (section == "sweep") {
      if (key == "axis") cfg.axis = value;
      else if (key == "values") cfg.values = value;
      else throw ConfigError("config: unknown key '" + full + "'");
    } else {
      throw ConfigError("config: unknown section '" + section + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError("config: bad value for '" + full + "': " + e.what());
  }
}

}  // namespace

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed section header");
      }
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    if (section.empty()) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": key outside any section");
    }
    set_key(cfg, section, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override '" + assignment + "': expected section.key=value");
  }
  const std::string key_path = trim(assignment.substr(0, eq));
  const size_t dot = key_path.find('.');
  if (dot == std::string::npos) {
    throw ConfigError("override '" + assignment + "': expected section.key=value");
  }
  set_key(cfg, key_path.substr(0, dot), key_path.substr(dot + 1),
          trim(assignment.substr(eq + 1)));
}

}  // namespace acnn
