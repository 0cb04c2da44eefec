#pragma once

#include <map>
#include <string>
#include <vector>

#include "acnn/corpus.hpp"
#include "acnn/embeddings.hpp"
#include "acnn/numerics.hpp"

namespace acnn {

enum class Padding { wide, narrow };
enum class Pooling { max, average, min };

Padding parse_padding(const std::string& name);
Pooling parse_pooling(const std::string& name);
const char* to_string(Padding p);
const char* to_string(Pooling p);

struct ModelConfig {
  std::vector<int> region_sizes{4, 5, 6};
  int filters_per_region = 300;
  int embedding_dim = 200;
  int channels = 1;
  int attention_dim = 0;  // 0 picks filters_per_region
  int class_count = 2;
  Activation activation = Activation::relu;
  double dropout = 0.6;
  Padding padding = Padding::wide;
  Pooling pooling = Pooling::max;
  int max_length = 0;  // rows of the encoded sentence matrix

  int region_count() const { return static_cast<int>(region_sizes.size()); }
  int effective_attention_dim() const {
    return attention_dim > 0 ? attention_dim : filters_per_region;
  }
  int pooled_len() const { return region_count() * filters_per_region; }
  void validate() const;
  std::string describe() const;
};

/// Filters and attention parameters for one region size. Each filter spans
/// all channels: its matrix holds channel k in rows [k*h, (k+1)*h).
struct RegionParams {
  int region_size = 0;
  std::vector<Matrix> filters;  // filters_per_region entries, (channels*h) x dim each
  Vector filter_bias;           // one scalar per filter
  Matrix att_w;                 // filters_per_region x attention_dim
  Vector att_b;                 // attention_dim
};

struct ModelParams {
  std::vector<RegionParams> regions;
  Vector att_u;    // attention_dim, shared across region sizes
  Matrix dense_w;  // pooled_len x class_count
  Vector dense_b;  // class_count
};

/// Glorot-uniform weights, zero biases, zero content vector.
ModelParams init_params(const ModelConfig& cfg, Rng& rng);
ModelParams zeros_like(const ModelParams& p);

/// Flat views over every tensor, in a fixed order shared by optimizers,
/// serialization, and tests.
std::vector<std::pair<std::string, Vector*>> named_tensors(ModelParams& p);
std::vector<std::pair<std::string, const Vector*>> named_tensors(const ModelParams& p);
bool bitwise_equal(const ModelParams& a, const ModelParams& b);
bool bitwise_equal(const ChannelSet& a, const ChannelSet& b);

Matrix glorot_matrix(int rows, int cols, int fan_in, int fan_out, Rng& rng);

/// One filter slid over the sentence tensor; narrow gives s-h+1 positions,
/// wide pads h-1 zero rows per side and gives s+h-1.
Vector conv_region(const std::vector<Matrix>& input, const Matrix& filter, double bias,
                   Activation act, Padding pad);

struct AttendResult {
  Matrix stacked;   // window positions x filters
  Matrix hidden;    // window positions x attention_dim
  Vector weights;   // attention distribution over window positions
  Matrix weighted;  // stacked rows scaled by their attention weight
};

AttendResult attend_region(const std::vector<Vector>& maps, const Matrix& att_w,
                           const Vector& att_b, const Vector& att_u);

Vector pool_region(const Matrix& weighted, Pooling pooling);

struct RegionTrace {
  std::vector<Vector> preact;  // per filter: pre-bias sliding-window dot products
  Matrix stacked;
  Matrix hidden;
  Vector weights;
  Matrix weighted;
};

struct ForwardTrace {
  std::vector<Matrix> input;  // assembled sentence tensor, one matrix per channel
  std::vector<int32_t> ids;
  std::vector<uint8_t> channel_trainable;
  std::vector<RegionTrace> regions;
  Vector pooled;  // concatenated per-region pooled features, before dropout
  Vector mask;    // dropout mask; empty means all ones
  Vector logits;
  Vector probs;
  bool train_mode = false;
};

/// rng is only consulted in train mode with a positive dropout rate.
ForwardTrace forward(const EncodedSentence& sent, const ChannelSet& channels,
                     const ModelParams& params, const ModelConfig& cfg, bool train_mode,
                     Rng* rng = nullptr);

struct Gradients {
  ModelParams tensors;
  std::vector<std::map<int32_t, Vector>> embedding;  // per channel: id -> row gradient

  void accumulate(const Gradients& other);
  void scale(double factor);
};

Gradients zero_gradients(const ModelParams& params, int channel_count);

/// Exact reverse-mode gradients of the cross-entropy loss. Embedding rows are
/// reported only for trainable channels, never for the padding id.
Gradients backward(const ForwardTrace& trace, int target, const ModelParams& params,
                   const ModelConfig& cfg);
void accumulate_backward(const ForwardTrace& trace, int target, const ModelParams& params,
                         const ModelConfig& cfg, Gradients& into);

struct TrainedModel {
  ModelConfig config;
  ModelParams params;
  ChannelSet channels;
  std::shared_ptr<const Vocabulary> vocab;
};

}  // namespace acnn
