#include "acnn/corpus.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace acnn {

namespace {

const char* kPadToken = "<pad>";
const char* kUnkToken = "<unk>";

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr)) {
    throw std::runtime_error("sha256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  };
  for (char ch : text) {
    const unsigned char c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      flush();
    } else if (std::ispunct(c)) {
      flush();
      out.emplace_back(1, ch);
    } else {
      cur.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  flush();
  return out;
}

Vocabulary::Vocabulary() {
  id_to_token_ = {kPadToken, kUnkToken};
  token_to_id_[kPadToken] = kPadId;
  token_to_id_[kUnkToken] = kUnkId;
}

Vocabulary Vocabulary::from_tokens(const std::vector<std::string>& tokens) {
  if (tokens.size() < 2 || tokens[0] != kPadToken || tokens[1] != kUnkToken) {
    throw std::runtime_error("vocabulary list must start with the reserved pad/unk tokens");
  }
  Vocabulary v;
  for (size_t i = 2; i < tokens.size(); ++i) {
    if (!v.token_to_id_.emplace(tokens[i], static_cast<int>(i)).second) {
      throw std::runtime_error("duplicate token in vocabulary list: " + tokens[i]);
    }
    v.id_to_token_.push_back(tokens[i]);
  }
  return v;
}

int Vocabulary::add(const std::string& token) {
  auto [it, inserted] = token_to_id_.emplace(token, size());
  if (inserted) id_to_token_.push_back(token);
  return it->second;
}

int Vocabulary::id(const std::string& token) const {
  auto it = token_to_id_.find(token);
  return it == token_to_id_.end() ? kUnkId : it->second;
}

bool Vocabulary::contains(const std::string& token) const {
  return token_to_id_.find(token) != token_to_id_.end();
}

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || id >= size()) throw std::invalid_argument("Vocabulary: id out of range");
  return id_to_token_[static_cast<size_t>(id)];
}

std::string Vocabulary::digest() const {
  std::vector<std::string> sorted = id_to_token_;
  std::sort(sorted.begin(), sorted.end());
  std::string joined;
  for (const auto& t : sorted) {
    joined += t;
    joined += '\n';
  }
  return sha256_hex(joined);
}

Vocabulary build_vocab(const std::vector<LabeledSentence>& sentences, int min_count) {
  if (min_count < 1) throw std::invalid_argument("build_vocab: min_count must be >= 1");
  if (sentences.empty()) throw std::invalid_argument("build_vocab: empty corpus");

  struct Stat {
    int64_t freq = 0;
    int64_t first = 0;
  };
  std::unordered_map<std::string, Stat> stats;
  int64_t pos = 0;
  for (const auto& s : sentences) {
    for (const auto& t : s.tokens) {
      auto [it, inserted] = stats.try_emplace(t, Stat{0, pos});
      it->second.freq += 1;
      ++pos;
    }
  }

  struct Entry {
    const std::string* token;
    int64_t freq;
    int64_t first;
  };
  std::vector<Entry> entries;
  entries.reserve(stats.size());
  for (const auto& [token, st] : stats) {
    if (st.freq >= min_count) entries.push_back({&token, st.freq, st.first});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.freq != b.freq) return a.freq > b.freq;
    return a.first < b.first;
  });

  Vocabulary v;
  for (const auto& e : entries) v.add(*e.token);
  return v;
}

EncodedSentence encode(const LabeledSentence& sent, const Vocabulary& vocab, int s_max) {
  if (s_max < 1) throw std::invalid_argument("encode: s_max must be >= 1");
  if (sent.tokens.empty()) throw std::invalid_argument("encode: sentence has no tokens");
  EncodedSentence out;
  out.label = sent.label;
  out.true_len = std::min<int>(static_cast<int>(sent.tokens.size()), s_max);
  out.ids.assign(static_cast<size_t>(s_max), Vocabulary::kPadId);
  for (int i = 0; i < out.true_len; ++i) {
    out.ids[static_cast<size_t>(i)] = static_cast<int32_t>(vocab.id(sent.tokens[i]));
  }
  return out;
}

std::vector<LabeledSentence> read_labeled_tsv(const std::string& path, int class_count) {
  if (class_count < 2) throw std::invalid_argument("read_labeled_tsv: class_count must be >= 2");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);

  std::vector<LabeledSentence> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto where = path + ":" + std::to_string(lineno);
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error(where + ": expected 'label<TAB>text'");
    }
    int label = 0;
    const char* first = line.data();
    const char* last = line.data() + tab;
    auto res = std::from_chars(first, last, label);
    if (res.ec != std::errc{} || res.ptr != last) {
      throw std::runtime_error(where + ": label is not an integer: '" + line.substr(0, tab) + "'");
    }
    if (label < 0 || label >= class_count) {
      throw std::runtime_error(where + ": label " + std::to_string(label) +
                               " out of range [0, " + std::to_string(class_count) + ")");
    }
    auto tokens = tokenize(std::string_view(line).substr(tab + 1));
    if (tokens.empty()) throw std::runtime_error(where + ": empty text");
    out.push_back({std::move(tokens), label});
  }
  if (out.empty()) throw std::runtime_error(path + ": no records");
  return out;
}

int percentile_length(const std::vector<LabeledSentence>& sentences, double percentile) {
  if (sentences.empty()) throw std::invalid_argument("percentile_length: empty corpus");
  if (percentile <= 0.0 || percentile > 1.0) {
    throw std::invalid_argument("percentile_length: percentile must be in (0, 1]");
  }
  std::vector<int> lengths;
  lengths.reserve(sentences.size());
  for (const auto& s : sentences) lengths.push_back(static_cast<int>(s.tokens.size()));
  std::sort(lengths.begin(), lengths.end());
  const auto n = static_cast<int64_t>(lengths.size());
  int64_t rank = static_cast<int64_t>(std::ceil(percentile * static_cast<double>(n)));
  rank = std::clamp<int64_t>(rank, 1, n);
  return std::max(1, lengths[static_cast<size_t>(rank - 1)]);
}

Dataset encode_all(const std::vector<LabeledSentence>& sentences, int class_count,
                   std::shared_ptr<const Vocabulary> vocab, int s_max) {
  if (!vocab) throw std::invalid_argument("encode_all: null vocabulary");
  if (sentences.empty()) throw std::invalid_argument("encode_all: empty corpus");
  Dataset ds;
  ds.class_count = class_count;
  ds.max_length = s_max;
  ds.vocab = std::move(vocab);
  ds.sentences.reserve(sentences.size());
  for (const auto& s : sentences) {
    if (s.label < 0 || s.label >= class_count) {
      throw std::invalid_argument("encode_all: label " + std::to_string(s.label) +
                                  " out of range [0, " + std::to_string(class_count) + ")");
    }
    ds.sentences.push_back(encode(s, *ds.vocab, s_max));
  }
  return ds;
}

Dataset load_tsv(const std::string& path, int class_count,
                 std::shared_ptr<const Vocabulary> vocab, int s_max, int min_count) {
  auto raw = read_labeled_tsv(path, class_count);
  if (s_max <= 0) s_max = percentile_length(raw);
  if (!vocab) vocab = std::make_shared<Vocabulary>(build_vocab(raw, min_count));
  return encode_all(raw, class_count, std::move(vocab), s_max);
}

}  // namespace acnn
