#pragma once

#include <string>
#include <vector>

#include "acnn/corpus.hpp"
#include "acnn/numerics.hpp"

namespace acnn {

/// Unseen tokens start uniform in [-kOovInitRange, kOovInitRange].
inline constexpr double kOovInitRange = 0.25;

/// One embedding channel: a vocab_size x dim lookup table.
/// Row 0 (padding) is pinned to zero and never updated.
struct EmbeddingTable {
  Matrix weights;
  bool trainable = true;
};

struct ChannelSet {
  std::vector<EmbeddingTable> tables;

  int count() const { return static_cast<int>(tables.size()); }
  int dim() const { return tables.empty() ? 0 : tables.front().weights.cols(); }
  int vocab_size() const { return tables.empty() ? 0 : tables.front().weights.rows(); }
};

EmbeddingTable random_table(int vocab_size, int dim, Rng& rng, bool trainable);

/// Text vector file: an optional "count dim" header line, then one
/// "token v1 ... vdim" record per line. Tokens missing from the file keep
/// their random initialization; the padding row is zeroed.
EmbeddingTable load_pretrained(const std::string& path, const Vocabulary& vocab, int dim,
                               Rng& rng, bool trainable);

enum class EmbeddingVariant { random, w2v_static, w2v_nonstatic, two_channel, four_channel };

EmbeddingVariant parse_embedding_variant(const std::string& name);
const char* to_string(EmbeddingVariant v);
int channel_count(EmbeddingVariant v);

struct EmbeddingSpec {
  EmbeddingVariant variant = EmbeddingVariant::random;
  int dim = 200;
  std::string word2vec_path;
  std::string glove_path;
  std::string fasttext_path;
};

ChannelSet make_channels(const EmbeddingSpec& spec, const Vocabulary& vocab, Rng& rng);

/// Per-channel sentence matrices: row t of channel k is that channel's vector
/// for ids[t]; padding rows come out zero.
std::vector<Matrix> assemble(const EncodedSentence& sent, const ChannelSet& channels);

}  // namespace acnn
