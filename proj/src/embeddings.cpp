#include "acnn/embeddings.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace acnn {

namespace {

void zero_pad_row(Matrix& weights) {
  double* row = weights.row(Vocabulary::kPadId);
  for (int c = 0; c < weights.cols(); ++c) row[c] = 0.0;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

bool is_header_line(const std::vector<std::string_view>& fields) {
  if (fields.size() != 2) return false;
  for (const auto& f : fields) {
    uint64_t v = 0;
    auto res = std::from_chars(f.data(), f.data() + f.size(), v);
    if (res.ec != std::errc{} || res.ptr != f.data() + f.size()) return false;
  }
  return true;
}

}  // namespace

EmbeddingTable random_table(int vocab_size, int dim, Rng& rng, bool trainable) {
  if (vocab_size < 2 || dim < 1) {
    throw std::invalid_argument("random_table: need vocab_size >= 2 and dim >= 1");
  }
  EmbeddingTable table{Matrix(vocab_size, dim), trainable};
  for (double& x : table.weights.data()) x = rng.uniform(-kOovInitRange, kOovInitRange);
  zero_pad_row(table.weights);
  return table;
}

EmbeddingTable load_pretrained(const std::string& path, const Vocabulary& vocab, int dim,
                               Rng& rng, bool trainable) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vector file: " + path);

  EmbeddingTable table = random_table(vocab.size(), dim, rng, trainable);

  std::string line;
  int lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (first) {
      first = false;
      if (is_header_line(fields)) continue;
    }
    const auto where = path + ":" + std::to_string(lineno);
    if (static_cast<int>(fields.size()) != dim + 1) {
      throw std::runtime_error(where + ": expected " + std::to_string(dim) +
                               " values per token, got " + std::to_string(fields.size() - 1));
    }
    const std::string token(fields[0]);
    if (!vocab.contains(token)) continue;
    const int id = vocab.id(token);
    if (id == Vocabulary::kPadId) continue;
    double* row = table.weights.row(id);
    for (int c = 0; c < dim; ++c) {
      double v = 0.0;
      if (!parse_double(fields[static_cast<size_t>(c + 1)], v)) {
        throw std::runtime_error(where + ": unparseable value '" +
                                 std::string(fields[static_cast<size_t>(c + 1)]) + "'");
      }
      row[c] = v;
    }
  }
  zero_pad_row(table.weights);
  return table;
}

EmbeddingVariant parse_embedding_variant(const std::string& name) {
  if (name == "random") return EmbeddingVariant::random;
  if (name == "w2v-static") return EmbeddingVariant::w2v_static;
  if (name == "w2v-nonstatic") return EmbeddingVariant::w2v_nonstatic;
  if (name == "2-channel") return EmbeddingVariant::two_channel;
  if (name == "4-channel") return EmbeddingVariant::four_channel;
  throw std::invalid_argument("unknown embedding variant: " + name);
}

const char* to_string(EmbeddingVariant v) {
  switch (v) {
    case EmbeddingVariant::random: return "random";
    case EmbeddingVariant::w2v_static: return "w2v-static";
    case EmbeddingVariant::w2v_nonstatic: return "w2v-nonstatic";
    case EmbeddingVariant::two_channel: return "2-channel";
    case EmbeddingVariant::four_channel: return "4-channel";
  }
  return "?";
}

int channel_count(EmbeddingVariant v) {
  switch (v) {
    case EmbeddingVariant::random:
    case EmbeddingVariant::w2v_static:
    case EmbeddingVariant::w2v_nonstatic: return 1;
    case EmbeddingVariant::two_channel: return 2;
    case EmbeddingVariant::four_channel: return 4;
  }
  return 1;
}

ChannelSet make_channels(const EmbeddingSpec& spec, const Vocabulary& vocab, Rng& rng) {
  auto need = [&](const std::string& path, const char* which) -> const std::string& {
    if (path.empty()) {
      throw std::invalid_argument(std::string("embedding variant ") + to_string(spec.variant) +
                                  " requires a " + which + " vector file");
    }
    return path;
  };

  ChannelSet set;
  switch (spec.variant) {
    case EmbeddingVariant::random:
      set.tables.push_back(random_table(vocab.size(), spec.dim, rng, true));
      break;
    case EmbeddingVariant::w2v_static:
      set.tables.push_back(
          load_pretrained(need(spec.word2vec_path, "word2vec"), vocab, spec.dim, rng, false));
      break;
    case EmbeddingVariant::w2v_nonstatic:
      set.tables.push_back(
          load_pretrained(need(spec.word2vec_path, "word2vec"), vocab, spec.dim, rng, true));
      break;
    case EmbeddingVariant::two_channel:
      set.tables.push_back(
          load_pretrained(need(spec.word2vec_path, "word2vec"), vocab, spec.dim, rng, true));
      set.tables.push_back(random_table(vocab.size(), spec.dim, rng, true));
      break;
    case EmbeddingVariant::four_channel:
      set.tables.push_back(
          load_pretrained(need(spec.word2vec_path, "word2vec"), vocab, spec.dim, rng, true));
      set.tables.push_back(
          load_pretrained(need(spec.glove_path, "glove"), vocab, spec.dim, rng, true));
      set.tables.push_back(
          load_pretrained(need(spec.fasttext_path, "fasttext"), vocab, spec.dim, rng, true));
      set.tables.push_back(random_table(vocab.size(), spec.dim, rng, true));
      break;
  }
  return set;
}

std::vector<Matrix> assemble(const EncodedSentence& sent, const ChannelSet& channels) {
  if (channels.count() < 1) throw std::invalid_argument("assemble: empty channel set");
  const int s = static_cast<int>(sent.ids.size());
  const int d = channels.dim();
  const int vocab_size = channels.vocab_size();
  std::vector<Matrix> out;
  out.reserve(static_cast<size_t>(channels.count()));
  for (const auto& table : channels.tables) {
    Matrix m(s, d);
    for (int t = 0; t < s; ++t) {
      const int32_t id = sent.ids[static_cast<size_t>(t)];
      if (id < 0 || id >= vocab_size) {
        throw std::invalid_argument("assemble: token id " + std::to_string(id) +
                                    " outside vocabulary of size " + std::to_string(vocab_size));
      }
      const double* src = table.weights.row(id);
      double* dst = m.row(t);
      for (int c = 0; c < d; ++c) dst[c] = src[c];
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace acnn
