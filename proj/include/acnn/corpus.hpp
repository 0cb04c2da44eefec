#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace acnn {

/// Lowercases, splits on whitespace, and breaks every punctuation character
/// out as its own token.
std::vector<std::string> tokenize(std::string_view text);

struct LabeledSentence {
  std::vector<std::string> tokens;
  int label = 0;
};

/// Token <-> id map. Id 0 is reserved for padding, id 1 for unknown tokens.
class Vocabulary {
 public:
  static constexpr int kPadId = 0;
  static constexpr int kUnkId = 1;

  Vocabulary();

  /// Rebuilds a vocabulary from an explicit id-ordered token list
  /// (tokens[0] must be the padding token, tokens[1] the unknown token).
  static Vocabulary from_tokens(const std::vector<std::string>& tokens);

  int add(const std::string& token);       // returns the existing id if present
  int id(const std::string& token) const;  // kUnkId for absent tokens
  bool contains(const std::string& token) const;
  const std::string& token(int id) const;
  int size() const { return static_cast<int>(id_to_token_.size()); }
  const std::vector<std::string>& tokens() const { return id_to_token_; }

  /// Hex SHA-256 over the lexicographically sorted token list.
  std::string digest() const;

 private:
  std::unordered_map<std::string, int> token_to_id_;
  std::vector<std::string> id_to_token_;
};

/// Every token with frequency >= min_count gets an id; ids are assigned in
/// descending frequency order, ties broken by first occurrence.
Vocabulary build_vocab(const std::vector<LabeledSentence>& sentences, int min_count);

struct EncodedSentence {
  std::vector<int32_t> ids;  // fixed length, padding ids after true_len
  int true_len = 0;
  int label = 0;
};

EncodedSentence encode(const LabeledSentence& sent, const Vocabulary& vocab, int s_max);

struct Dataset {
  std::vector<EncodedSentence> sentences;
  int class_count = 0;
  int max_length = 0;
  std::shared_ptr<const Vocabulary> vocab;

  bool empty() const { return sentences.empty(); }
  size_t size() const { return sentences.size(); }
};

/// Reads "label<TAB>text" records; labels must lie in [0, class_count).
std::vector<LabeledSentence> read_labeled_tsv(const std::string& path, int class_count);

/// Smallest sentence length covering the given fraction of the corpus.
int percentile_length(const std::vector<LabeledSentence>& sentences, double percentile = 0.95);

Dataset encode_all(const std::vector<LabeledSentence>& sentences, int class_count,
                   std::shared_ptr<const Vocabulary> vocab, int s_max);

/// One-stop ingestion: read, build the vocabulary if none is given
/// (s_max <= 0 picks the 95th-percentile length), and encode.
Dataset load_tsv(const std::string& path, int class_count,
                 std::shared_ptr<const Vocabulary> vocab = nullptr, int s_max = 0,
                 int min_count = 1);

}  // namespace acnn
