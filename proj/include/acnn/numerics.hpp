#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace acnn {

using Vector = std::vector<double>;

/// Dense row-major matrix of 64-bit reals.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  double* row(int r) { return data_.data() + static_cast<size_t>(r) * cols_; }
  const double* row(int r) const { return data_.data() + static_cast<size_t>(r) * cols_; }

  Vector& data() { return data_; }
  const Vector& data() const { return data_; }

  bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
  std::string shape_str() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  Vector data_;
};

/// Counter-based pseudo-random generator. A fixed seed reproduces the same
/// sequence on every platform; derive() gives independent child streams.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed) {}

  uint64_t next_u64();
  uint64_t below(uint64_t n);  // uniform in [0, n)
  double uniform();            // uniform in [0, 1)
  double uniform(double lo, double hi);
  Rng derive(uint64_t stream) const;

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t seed_ = 0;
  uint64_t counter_ = 0;
};

enum class Activation { relu, tanh, softplus, linear };

Activation parse_activation(const std::string& name);
const char* to_string(Activation a);

double activate(Activation a, double z);
double activate_grad(Activation a, double z);  // derivative at pre-activation z
Vector apply_activation(Activation a, const Vector& v);
Matrix apply_activation(Activation a, const Matrix& m);

Matrix matmul(const Matrix& a, const Matrix& b);
Vector matvec(const Matrix& a, const Vector& v);             // a * v
Vector matvec_transposed(const Matrix& a, const Vector& v);  // a^T * v

/// Numerically safe softmax (max subtraction); output sums to 1.
Vector softmax(const Vector& v);

/// Inverted dropout: each entry is 0 with probability rate, else 1/(1-rate).
Vector dropout_mask(Rng& rng, int len, double rate);

}  // namespace acnn
