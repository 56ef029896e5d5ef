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

#include "pearlkit/numkernel.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>

#include "pearlkit/errors.h"
#include "pearlkit/rng.h"

namespace pearlkit {

Matrix::Matrix(size_t rows, size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0f) {}

bool Matrix::operator==(const Matrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
}

void GradMatrix::add(const GradMatrix& other) {
  if (rows != other.rows || cols != other.cols) {
    throw DimensionError("gradient shape mismatch in add");
  }
  for (size_t i = 0; i < data.size(); ++i) data[i] += other.data[i];
}

void GradMatrix::scale(double s) {
  for (double& d : data) d *= s;
}

Vector matvec(const Vector& x, const Matrix& w) {
  if (x.size() != w.rows()) {
    throw DimensionError("matvec: vector length " + std::to_string(x.size()) +
                         " does not match matrix rows " +
                         std::to_string(w.rows()));
  }
  Vector y(w.cols(), 0.0);
  for (size_t r = 0; r < w.rows(); ++r) {
    double xr = x[r];
    if (xr == 0.0) continue;
    const float* row = w.data() + r * w.cols();
    for (size_t c = 0; c < w.cols(); ++c) {
      y[c] += xr * static_cast<double>(row[c]);
    }
  }
  return y;
}

void matvec_backward(const Vector& x, const Matrix& w, const Vector& dy,
                     Vector* dx, GradMatrix* dw) {
  if (x.size() != w.rows() || dy.size() != w.cols()) {
    throw DimensionError("matvec_backward: shape mismatch");
  }
  if (dx != nullptr) {
    dx->assign(w.rows(), 0.0);
    for (size_t r = 0; r < w.rows(); ++r) {
      const float* row = w.data() + r * w.cols();
      double acc = 0.0;
      for (size_t c = 0; c < w.cols(); ++c) {
        acc += static_cast<double>(row[c]) * dy[c];
      }
      (*dx)[r] = acc;
    }
  }
  if (dw != nullptr) {
    if (dw->rows != w.rows() || dw->cols != w.cols()) {
      throw DimensionError("matvec_backward: gradient buffer shape mismatch");
    }
    for (size_t r = 0; r < w.rows(); ++r) {
      double xr = x[r];
      if (xr == 0.0) continue;
      double* row = dw->data.data() + r * dw->cols;
      for (size_t c = 0; c < w.cols(); ++c) row[c] += xr * dy[c];
    }
  }
}

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw DimensionError("dot: length mismatch");
  }
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm(const Vector& a) { return std::sqrt(dot(a, a)); }

double cosine(const Vector& a, const Vector& b) {
  double na = norm(a);
  double nb = norm(b);
  if (na < 1e-12 || nb < 1e-12) return 0.0;
  return dot(a, b) / (na * nb);
}

Vector l2_normalize(const Vector& x) {
  double n = norm(x);
  if (n < 1e-12) {
    throw NumericError("cannot normalize a near-zero vector");
  }
  Vector y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] / n;
  return y;
}

Vector l2_normalize_backward(const Vector& x, const Vector& dy) {
  if (x.size() != dy.size()) {
    throw DimensionError("l2_normalize_backward: length mismatch");
  }
  double n = norm(x);
  if (n < 1e-12) {
    throw NumericError("cannot normalize a near-zero vector");
  }
  // y = x / n, dx = (dy - y (y . dy)) / n.
  Vector y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] / n;
  double proj = dot(y, dy);
  Vector dx(x.size());
  for (size_t i = 0; i < x.size(); ++i) dx[i] = (dy[i] - y[i] * proj) / n;
  return dx;
}

Vector softmax(const Vector& z) {
  if (z.empty()) {
    throw DimensionError("softmax: empty input");
  }
  double m = *std::max_element(z.begin(), z.end());
  Vector p(z.size());
  double sum = 0.0;
  for (size_t i = 0; i < z.size(); ++i) {
    p[i] = std::exp(z[i] - m);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

bool all_finite(const Vector& v) {
  for (double d : v) {
    if (!std::isfinite(d)) return false;
  }
  return true;
}

void xavier_uniform_init(Matrix* w, Rng* rng) {
  double fan_in = static_cast<double>(w->rows());
  double fan_out = static_cast<double>(w->cols());
  double limit = std::sqrt(6.0 / (fan_in + fan_out));
  for (size_t r = 0; r < w->rows(); ++r) {
    for (size_t c = 0; c < w->cols(); ++c) {
      w->at(r, c) = static_cast<float>(rng->uniform(-limit, limit));
    }
  }
}

AdamState::AdamState(const Matrix& like)
    : m(like.rows(), like.cols()), v(like.rows(), like.cols()), t(0) {}

void adam_step(Matrix* param, const GradMatrix& grad, AdamState* state,
               double lr) {
  if (grad.rows != param->rows() || grad.cols != param->cols() ||
      !state->m.same_shape(*param) || !state->v.same_shape(*param)) {
    throw DimensionError("adam_step: shape mismatch");
  }
  state->t += 1;
  double t = static_cast<double>(state->t);
  double bias1 = 1.0 - std::pow(kAdamBeta1, t);
  double bias2 = 1.0 - std::pow(kAdamBeta2, t);
  float* p = param->data();
  float* m = state->m.data();
  float* v = state->v.data();
  for (size_t i = 0; i < param->size(); ++i) {
    double g = grad.data[i];
    if (!std::isfinite(g)) {
      throw NumericError("non-finite gradient in adam_step");
    }
    double mi = kAdamBeta1 * static_cast<double>(m[i]) + (1.0 - kAdamBeta1) * g;
    double vi =
        kAdamBeta2 * static_cast<double>(v[i]) + (1.0 - kAdamBeta2) * g * g;
    m[i] = static_cast<float>(mi);
    v[i] = static_cast<float>(vi);
    double m_hat = mi / bias1;
    double v_hat = vi / bias2;
    double step = lr * m_hat / (std::sqrt(v_hat) + kAdamEpsilon);
    p[i] = static_cast<float>(static_cast<double>(p[i]) - step);
  }
}

void write_u32(std::ostream& os, uint32_t v) {
  char b[4];
  b[0] = static_cast<char>(v & 0xFF);
  b[1] = static_cast<char>((v >> 8) & 0xFF);
  b[2] = static_cast<char>((v >> 16) & 0xFF);
  b[3] = static_cast<char>((v >> 24) & 0xFF);
  os.write(b, 4);
}

void write_u64(std::ostream& os, uint64_t v) {
  write_u32(os, static_cast<uint32_t>(v & 0xFFFFFFFFULL));
  write_u32(os, static_cast<uint32_t>(v >> 32));
}

void write_f32(std::ostream& os, float v) {
  uint32_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  write_u32(os, bits);
}

namespace {
[[noreturn]] void truncated() {
  throw FormatError("unexpected end of stream while reading matrix data");
}
}  // namespace

uint32_t read_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) truncated();
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) |
         (static_cast<uint32_t>(b[3]) << 24);
}

uint64_t read_u64(std::istream& is) {
  uint64_t lo = read_u32(is);
  uint64_t hi = read_u32(is);
  return lo | (hi << 32);
}

float read_f32(std::istream& is) {
  uint32_t bits = read_u32(is);
  float v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

void write_matrix(std::ostream& os, const Matrix& m) {
  write_u32(os, static_cast<uint32_t>(m.rows()));
  write_u32(os, static_cast<uint32_t>(m.cols()));
  for (size_t i = 0; i < m.size(); ++i) write_f32(os, m.data()[i]);
}

Matrix read_matrix(std::istream& is) {
  uint32_t rows = read_u32(is);
  uint32_t cols = read_u32(is);
  // 256M entries (1 GiB of f32) is far beyond any model this library builds;
  // treat it as a corrupt header rather than trying to allocate.
  if (static_cast<uint64_t>(rows) * cols > (1ULL << 28)) {
    throw FormatError("matrix dimensions out of range");
  }
  Matrix m(rows, cols);
  for (size_t i = 0; i < m.size(); ++i) m.data()[i] = read_f32(is);
  return m;
}

}  // namespace pearlkit
