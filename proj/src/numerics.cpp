#include "acnn/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace acnn {

Matrix::Matrix(int rows, int cols, double fill) : rows_(rows), cols_(cols) {
  if (rows <= 0 || cols <= 0) {
    throw std::invalid_argument("Matrix: dimensions must be positive, got " +
                                std::to_string(rows) + "x" + std::to_string(cols));
  }
  data_.assign(static_cast<size_t>(rows) * cols, fill);
}

std::string Matrix::shape_str() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

namespace {

inline uint64_t mix64(uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

}  // namespace

uint64_t Rng::next_u64() {
  counter_ += 1;
  return mix64(seed_ + counter_ * 0x9E3779B97F4A7C15ULL);
}

uint64_t Rng::below(uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
  // rejection sampling keeps the draw unbiased
  const uint64_t threshold = (0 - n) % n;
  uint64_t x;
  do {
    x = next_u64();
  } while (x < threshold);
  return x % n;
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

Rng Rng::derive(uint64_t stream) const {
  return Rng(mix64(seed_ ^ mix64(0xA0761D6478BD642FULL + stream)));
}

Activation parse_activation(const std::string& name) {
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  if (name == "softplus") return Activation::softplus;
  if (name == "linear") return Activation::linear;
  throw std::invalid_argument("unknown activation: " + name);
}

const char* to_string(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::softplus: return "softplus";
    case Activation::linear: return "linear";
  }
  return "?";
}

double activate(Activation a, double z) {
  switch (a) {
    case Activation::relu: return z > 0.0 ? z : 0.0;
    case Activation::tanh: return std::tanh(z);
    case Activation::softplus:
      // max(z,0) + log1p(exp(-|z|)) avoids overflow on both tails
      return (z > 0.0 ? z : 0.0) + std::log1p(std::exp(-std::fabs(z)));
    case Activation::linear: return z;
  }
  return z;
}

double activate_grad(Activation a, double z) {
  switch (a) {
    case Activation::relu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::tanh: {
      const double t = std::tanh(z);
      return 1.0 - t * t;
    }
    case Activation::softplus: {
      if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
      const double e = std::exp(z);
      return e / (1.0 + e);
    }
    case Activation::linear: return 1.0;
  }
  return 1.0;
}

Vector apply_activation(Activation a, const Vector& v) {
  Vector out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = activate(a, v[i]);
  return out;
}

Matrix apply_activation(Activation a, const Matrix& m) {
  Matrix out = m;
  for (double& x : out.data()) x = activate(a, x);
  return out;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: shape mismatch " + a.shape_str() + " * " +
                                b.shape_str());
  }
  Matrix out(a.rows(), b.cols(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    double* dst = out.row(i);
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      const double* brow = b.row(k);
      for (int j = 0; j < b.cols(); ++j) dst[j] += aik * brow[j];
    }
  }
  return out;
}

Vector matvec(const Matrix& a, const Vector& v) {
  if (a.cols() != static_cast<int>(v.size())) {
    throw std::invalid_argument("matvec: shape mismatch " + a.shape_str() + " * vec(" +
                                std::to_string(v.size()) + ")");
  }
  Vector out(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    const double* arow = a.row(i);
    double acc = 0.0;
    for (int j = 0; j < a.cols(); ++j) acc += arow[j] * v[j];
    out[i] = acc;
  }
  return out;
}

Vector matvec_transposed(const Matrix& a, const Vector& v) {
  if (a.rows() != static_cast<int>(v.size())) {
    throw std::invalid_argument("matvec_transposed: shape mismatch " + a.shape_str() +
                                "^T * vec(" + std::to_string(v.size()) + ")");
  }
  Vector out(a.cols(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    const double* arow = a.row(i);
    const double vi = v[i];
    for (int j = 0; j < a.cols(); ++j) out[j] += arow[j] * vi;
  }
  return out;
}

Vector softmax(const Vector& v) {
  if (v.empty()) throw std::invalid_argument("softmax: empty input");
  double mx = v[0];
  for (double x : v) mx = std::max(mx, x);
  Vector out(v.size());
  double sum = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(v[i] - mx);
    sum += out[i];
  }
  for (double& x : out) x /= sum;
  return out;
}

Vector dropout_mask(Rng& rng, int len, double rate) {
  if (rate < 0.0 || rate >= 1.0) {
    throw std::invalid_argument("dropout_mask: rate must be in [0, 1), got " +
                                std::to_string(rate));
  }
  if (len < 0) throw std::invalid_argument("dropout_mask: negative length");
  const double keep_scale = 1.0 / (1.0 - rate);
  Vector mask(static_cast<size_t>(len));
  for (double& m : mask) m = rng.uniform() < rate ? 0.0 : keep_scale;
  return mask;
}

}  // namespace acnn
