// Copyright 2026 The Pearlkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace pearlkit {

class Rng;

// Dense row-major matrix of f32 parameters. Parameters are stored in f32 so
// checkpoints round-trip bit-exactly; all arithmetic on them is carried out
// in double (see Vector below) to keep gradient checks tight.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  size_t size() const { return data_.size(); }

  float& at(size_t r, size_t c) { return data_[r * cols_ + c]; }
  float at(size_t r, size_t c) const { return data_[r * cols_ + c]; }

  float* data() { return data_.data(); }
  const float* data() const { return data_.data(); }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool operator==(const Matrix& other) const;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<float> data_;
};

// Activations and gradients flow through double-precision vectors.
using Vector = std::vector<double>;

// Double-precision gradient accumulator shaped like a parameter Matrix.
struct GradMatrix {
  GradMatrix() = default;
  GradMatrix(size_t rows, size_t cols)
      : rows(rows), cols(cols), data(rows * cols, 0.0) {}
  explicit GradMatrix(const Matrix& like)
      : GradMatrix(like.rows(), like.cols()) {}

  double& at(size_t r, size_t c) { return data[r * cols + c]; }
  double at(size_t r, size_t c) const { return data[r * cols + c]; }
  void add(const GradMatrix& other);
  void scale(double s);

  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> data;
};

// y = x W for a row vector x of length W.rows(); y has length W.cols().
Vector matvec(const Vector& x, const Matrix& w);

// Backward of y = x W. Pass nullptr for gradients that are not needed; dw is
// accumulated into, so callers can sum contributions across a batch.
void matvec_backward(const Vector& x, const Matrix& w, const Vector& dy,
                     Vector* dx, GradMatrix* dw);

double dot(const Vector& a, const Vector& b);
double norm(const Vector& a);

// Returns 0.0 if either vector has near-zero norm rather than dividing by
// zero; callers compare scores and a zero is the natural "no signal" value.
double cosine(const Vector& a, const Vector& b);

// Throws NumericError when the input norm is below 1e-12.
Vector l2_normalize(const Vector& x);

// Backward of y = x / ||x||, given the original x and upstream dy.
Vector l2_normalize_backward(const Vector& x, const Vector& dy);

// Numerically stable softmax (max subtraction).
Vector softmax(const Vector& z);

bool all_finite(const Vector& v);

void xavier_uniform_init(Matrix* w, Rng* rng);

// Adam with bias correction. First and second moments are held in f32 like
// the parameters they track, so optimizer state survives a checkpoint
// round-trip bit-exactly; the update math itself runs in double.
struct AdamState {
  AdamState() = default;
  explicit AdamState(const Matrix& like);
  Matrix m;
  Matrix v;
  uint64_t t = 0;
};

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEpsilon = 1e-8;

void adam_step(Matrix* param, const GradMatrix& grad, AdamState* state,
               double lr);

// Raw matrix block serialization: rows u32 LE, cols u32 LE, then f32 LE
// values in row-major order.
void write_u32(std::ostream& os, uint32_t v);
void write_u64(std::ostream& os, uint64_t v);
void write_f32(std::ostream& os, float v);
uint32_t read_u32(std::istream& is);
uint64_t read_u64(std::istream& is);
float read_f32(std::istream& is);
void write_matrix(std::ostream& os, const Matrix& m);
Matrix read_matrix(std::istream& is);

}  // namespace pearlkit
