#include "brgcl/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace brgcl {

Matrix::Matrix(std::size_t r, std::size_t c, std::vector<real_t> values)
    : rows(r), cols(c), data(std::move(values)) {
  if (data.size() != rows * cols) {
    throw DimensionError("Matrix: data length " + std::to_string(data.size()) +
                         " does not match shape " + shape_str());
  }
}

std::string Matrix::shape_str() const {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

void Matrix::fill(real_t v) { std::fill(data.begin(), data.end(), v); }

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = real_t(1);
  return m;
}

void check_dims(bool cond, const char* kernel, const Matrix& a, const Matrix& b) {
  if (!cond) {
    throw DimensionError(std::string(kernel) + ": dimension mismatch (" + a.shape_str() +
                         " vs " + b.shape_str() + ")");
  }
}

bool all_finite(const Matrix& m) {
  for (real_t v : m.data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void require_finite(const Matrix& m, const std::string& context) {
  if (!all_finite(m)) throw NumericError(context + ": non-finite matrix entries");
}

// The dense kernels below are row-blocked so the streamed operand is read
// once per block instead of once per row. Each output element still
// accumulates its terms in the same ascending-k order as the textbook loop,
// so results are bit-identical to the unblocked form.

Matrix matmul(const Matrix& a, const Matrix& b) {
  check_dims(a.cols == b.rows, "matmul", a, b);
  Matrix c(a.rows, b.cols);
  constexpr std::size_t kBlock = 4;
  for (std::size_t i0 = 0; i0 < a.rows; i0 += kBlock) {
    std::size_t ib = std::min(kBlock, a.rows - i0);
    for (std::size_t k = 0; k < a.cols; ++k) {
      const real_t* brow = b.row(k);
      for (std::size_t m = 0; m < ib; ++m) {
        real_t aik = a(i0 + m, k);
        if (aik == real_t(0)) continue;
        real_t* crow = c.row(i0 + m);
        for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
      }
    }
  }
  return c;
}

Matrix matmul_abt(const Matrix& a, const Matrix& b) {
  check_dims(a.cols == b.cols, "matmul_abt", a, b);
  Matrix c(a.rows, b.rows);
  constexpr std::size_t kBlock = 4;
  for (std::size_t i0 = 0; i0 < a.rows; i0 += kBlock) {
    std::size_t ib = std::min(kBlock, a.rows - i0);
    for (std::size_t j = 0; j < b.rows; ++j) {
      const real_t* brow = b.row(j);
      for (std::size_t m = 0; m < ib; ++m) c(i0 + m, j) = dot(a.row(i0 + m), brow, a.cols);
    }
  }
  return c;
}

Matrix matmul_atb(const Matrix& a, const Matrix& b) {
  check_dims(a.rows == b.rows, "matmul_atb", a, b);
  Matrix c(a.cols, b.cols);
  constexpr std::size_t kBlock = 4;
  for (std::size_t k0 = 0; k0 < a.rows; k0 += kBlock) {
    std::size_t kb = std::min(kBlock, a.rows - k0);
    for (std::size_t i = 0; i < a.cols; ++i) {
      real_t* crow = c.row(i);
      for (std::size_t m = 0; m < kb; ++m) {
        real_t aki = a(k0 + m, i);
        if (aki == real_t(0)) continue;
        const real_t* brow = b.row(k0 + m);
        for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aki * brow[j];
      }
    }
  }
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
  return t;
}

Matrix relu(const Matrix& a) {
  Matrix r(a.rows, a.cols);
  for (std::size_t i = 0; i < a.size(); ++i) r.data[i] = a.data[i] > real_t(0) ? a.data[i] : real_t(0);
  return r;
}

Matrix relu_backward(const Matrix& pre, const Matrix& dy) {
  check_dims(pre.same_shape(dy), "relu_backward", pre, dy);
  Matrix dx(pre.rows, pre.cols);
  for (std::size_t i = 0; i < pre.size(); ++i)
    dx.data[i] = pre.data[i] > real_t(0) ? dy.data[i] : real_t(0);
  return dx;
}

Matrix row_softmax(const Matrix& a) {
  Matrix s(a.rows, a.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const real_t* x = a.row(i);
    real_t* y = s.row(i);
    real_t mx = x[0];
    for (std::size_t j = 1; j < a.cols; ++j) mx = std::max(mx, x[j]);
    real_t sum = 0;
    for (std::size_t j = 0; j < a.cols; ++j) {
      y[j] = std::exp(x[j] - mx);
      sum += y[j];
    }
    for (std::size_t j = 0; j < a.cols; ++j) y[j] /= sum;
  }
  return s;
}

Matrix row_l2_normalize(const Matrix& a) {
  Matrix y(a.rows, a.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const real_t* x = a.row(i);
    real_t norm = std::sqrt(dot(x, x, a.cols));
    real_t* out = y.row(i);
    if (norm == real_t(0)) {
      std::copy(x, x + a.cols, out);
    } else {
      for (std::size_t j = 0; j < a.cols; ++j) out[j] = x[j] / norm;
    }
  }
  return y;
}

Matrix row_l2_normalize_backward(const Matrix& x, const Matrix& dy) {
  check_dims(x.same_shape(dy), "row_l2_normalize_backward", x, dy);
  Matrix dx(x.rows, x.cols);
  for (std::size_t i = 0; i < x.rows; ++i) {
    const real_t* xi = x.row(i);
    const real_t* dyi = dy.row(i);
    real_t* dxi = dx.row(i);
    real_t norm = std::sqrt(dot(xi, xi, x.cols));
    if (norm == real_t(0)) {
      std::copy(dyi, dyi + x.cols, dxi);
      continue;
    }
    real_t proj = 0;
    for (std::size_t j = 0; j < x.cols; ++j) proj += dyi[j] * xi[j] / norm;
    for (std::size_t j = 0; j < x.cols; ++j) dxi[j] = (dyi[j] - proj * xi[j] / norm) / norm;
  }
  return dx;
}

Matrix add(const Matrix& a, const Matrix& b) {
  check_dims(a.same_shape(b), "add", a, b);
  Matrix c(a.rows, a.cols);
  for (std::size_t i = 0; i < a.size(); ++i) c.data[i] = a.data[i] + b.data[i];
  return c;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
  check_dims(a.same_shape(b), "subtract", a, b);
  Matrix c(a.rows, a.cols);
  for (std::size_t i = 0; i < a.size(); ++i) c.data[i] = a.data[i] - b.data[i];
  return c;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  check_dims(a.same_shape(b), "hadamard", a, b);
  Matrix c(a.rows, a.cols);
  for (std::size_t i = 0; i < a.size(); ++i) c.data[i] = a.data[i] * b.data[i];
  return c;
}

Matrix scale(const Matrix& a, real_t s) {
  Matrix c(a.rows, a.cols);
  for (std::size_t i = 0; i < a.size(); ++i) c.data[i] = a.data[i] * s;
  return c;
}

void add_inplace(Matrix& a, const Matrix& b) {
  check_dims(a.same_shape(b), "add_inplace", a, b);
  for (std::size_t i = 0; i < a.size(); ++i) a.data[i] += b.data[i];
}

void axpy_inplace(Matrix& a, real_t s, const Matrix& b) {
  check_dims(a.same_shape(b), "axpy_inplace", a, b);
  for (std::size_t i = 0; i < a.size(); ++i) a.data[i] += s * b.data[i];
}

real_t squared_distance(const real_t* u, const real_t* v, std::size_t n) {
  real_t acc = 0;
  for (std::size_t j = 0; j < n; ++j) {
    real_t d = u[j] - v[j];
    acc += d * d;
  }
  return acc;
}

real_t dot(const real_t* u, const real_t* v, std::size_t n) {
  real_t acc = 0;
  for (std::size_t j = 0; j < n; ++j) acc += u[j] * v[j];
  return acc;
}

}  // namespace brgcl
