#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "brgcl/common.hpp"
#include "brgcl/errors.hpp"

namespace brgcl {

/// Dense row-major matrix. The carrier for features, embeddings, soft labels,
/// prototypes, and model weights.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<real_t> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, real_t(0)) {}
  Matrix(std::size_t r, std::size_t c, std::vector<real_t> values);

  real_t& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  real_t operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  real_t* row(std::size_t i) { return data.data() + i * cols; }
  const real_t* row(std::size_t i) const { return data.data() + i * cols; }

  std::size_t size() const { return data.size(); }
  bool same_shape(const Matrix& other) const { return rows == other.rows && cols == other.cols; }
  std::string shape_str() const;

  void fill(real_t v);
  void zero() { fill(real_t(0)); }

  static Matrix identity(std::size_t n);
};

/// Throws DimensionError naming the kernel and both shapes unless cond holds.
void check_dims(bool cond, const char* kernel, const Matrix& a, const Matrix& b);

bool all_finite(const Matrix& m);

/// Throws NumericError naming the context if any entry is NaN or infinite.
void require_finite(const Matrix& m, const std::string& context);

// -- kernel suite -----------------------------------------------------------

/// c = a * b
Matrix matmul(const Matrix& a, const Matrix& b);

/// c = a * b^T
Matrix matmul_abt(const Matrix& a, const Matrix& b);

/// c = a^T * b
Matrix matmul_atb(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

Matrix relu(const Matrix& a);

/// dx = dy where pre > 0, else 0.
Matrix relu_backward(const Matrix& pre, const Matrix& dy);

/// Row-wise softmax; rows sum to 1.
Matrix row_softmax(const Matrix& a);

/// Rows scaled to unit L2 norm; all-zero rows pass through unchanged.
Matrix row_l2_normalize(const Matrix& a);

/// Backward of row_l2_normalize given the original input x and upstream dy.
/// For zero rows the forward is the identity, so dy passes through.
Matrix row_l2_normalize_backward(const Matrix& x, const Matrix& dy);

Matrix add(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, real_t s);
void add_inplace(Matrix& a, const Matrix& b);
void axpy_inplace(Matrix& a, real_t s, const Matrix& b);

real_t squared_distance(const real_t* u, const real_t* v, std::size_t n);
real_t dot(const real_t* u, const real_t* v, std::size_t n);

}  // namespace brgcl
