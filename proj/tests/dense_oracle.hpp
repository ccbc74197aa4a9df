// Naive dense reference implementations used only by tests.
//
// Everything here is deliberately simple and independent of the library
// under test: plain row-major std::vector matrices, explicit Kronecker
// products, textbook ladder matrices, and brute-force partial traces.
// Cost is no object; correctness by inspection is.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using Vec = std::vector<C>;

struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<C> a;  // row-major

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

  C& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const C& operator()(std::size_t i, std::size_t j) const {
    return a[i * cols + j];
  }
};

inline Mat identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

inline Mat mul(const Mat& x, const Mat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("oracle mul shape");
  Mat out(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t k = 0; k < x.cols; ++k) {
      const C xv = x(i, k);
      if (xv == C{}) continue;
      for (std::size_t j = 0; j < y.cols; ++j) out(i, j) += xv * y(k, j);
    }
  }
  return out;
}

inline Mat add(const Mat& x, const Mat& y) {
  Mat out = x;
  for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] += y.a[i];
  return out;
}

inline Mat sub(const Mat& x, const Mat& y) {
  Mat out = x;
  for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] -= y.a[i];
  return out;
}

inline Mat scale(C s, const Mat& x) {
  Mat out = x;
  for (auto& v : out.a) v *= s;
  return out;
}

// Kronecker product; the LEFT factor owns the slow digit of the composite
// index, matching the site-ascending slowest-first convention used for
// multi-site realizations.
inline Mat kron(const Mat& x, const Mat& y) {
  Mat out(x.rows * y.rows, x.cols * y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) {
      const C xv = x(i, j);
      if (xv == C{}) continue;
      for (std::size_t k = 0; k < y.rows; ++k)
        for (std::size_t l = 0; l < y.cols; ++l) {
          const C yv = y(k, l);
          if (yv == C{}) continue;
          out(i * y.rows + k, j * y.cols + l) = xv * yv;
        }
    }
  return out;
}

inline Vec kron_vec(const Vec& x, const Vec& y) {
  Vec out(x.size() * y.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t k = 0; k < y.size(); ++k)
      out[i * y.size() + k] = x[i] * y[k];
  return out;
}

// Inner product, conjugating the first argument.
inline C dot(const Vec& x, const Vec& y) {
  C out{};
  for (std::size_t i = 0; i < x.size(); ++i) out += std::conj(x[i]) * y[i];
  return out;
}

// |x><y| (outer product, conjugating y).
inline Mat outer(const Vec& x, const Vec& y) {
  Mat out(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j)
      out(i, j) = x[i] * std::conj(y[j]);
  return out;
}

inline Mat commutator(const Mat& x, const Mat& y) {
  return sub(mul(x, y), mul(y, x));
}

// --- truncated oscillator matrices --------------------------------------

// Lowering operator: a(n-1, n) = sqrt(n).
inline Mat lowering(std::size_t dim) {
  Mat m(dim, dim);
  for (std::size_t n = 1; n < dim; ++n) m(n - 1, n) = std::sqrt(double(n));
  return m;
}

inline Mat raising(std::size_t dim) {
  Mat m(dim, dim);
  for (std::size_t n = 1; n < dim; ++n) m(n, n - 1) = std::sqrt(double(n));
  return m;
}

// x = (a + a^dag)/sqrt(2): tridiagonal, x(n-1, n) = x(n, n-1) = sqrt(n/2).
inline Mat position(std::size_t dim) {
  Mat m(dim, dim);
  for (std::size_t n = 1; n < dim; ++n) {
    const double v = std::sqrt(double(n) / 2.0);
    m(n - 1, n) = v;
    m(n, n - 1) = v;
  }
  return m;
}

// p = -i (a - a^dag)/sqrt(2).
inline Mat momentum(std::size_t dim) {
  Mat m(dim, dim);
  for (std::size_t n = 1; n < dim; ++n) {
    const double v = std::sqrt(double(n) / 2.0);
    m(n - 1, n) = C(0.0, -v);
    m(n, n - 1) = C(0.0, v);
  }
  return m;
}

// Dense x^a * p^b built by repeated multiplication (x factors to the left
// of p factors).
inline Mat xp_power(std::size_t dim, int a, int b) {
  Mat out = identity(dim);
  const Mat x = position(dim);
  const Mat p = momentum(dim);
  for (int i = 0; i < a; ++i) out = mul(out, x);
  for (int i = 0; i < b; ++i) out = mul(out, p);
  return out;
}

// --- banded one-site position application -------------------------------
//
// Digits of a composite index run over `dims` with dims[0] slowest.

inline std::vector<std::size_t> strides_of(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) {
    strides[i - 1] = strides[i] * dims[i];
  }
  return strides;
}

// X_which * M where X_which acts as the position matrix on digit `which`
// and as identity elsewhere. Uses only the tridiagonal structure of x.
inline Mat apply_x_left(const Mat& m, const std::vector<std::size_t>& dims,
                        std::size_t which) {
  const auto strides = strides_of(dims);
  const std::size_t d = dims[which];
  const std::size_t stride = strides[which];
  Mat out(m.rows, m.cols);
  for (std::size_t u = 0; u < m.rows; ++u) {
    const std::size_t digit = (u / stride) % d;
    // x(digit, digit') nonzero for digit' = digit -/+ 1.
    if (digit > 0) {
      const double coeff = std::sqrt(double(digit) / 2.0);
      const std::size_t w = u - stride;
      for (std::size_t v = 0; v < m.cols; ++v) out(u, v) += coeff * m(w, v);
    }
    if (digit + 1 < d) {
      const double coeff = std::sqrt(double(digit + 1) / 2.0);
      const std::size_t w = u + stride;
      for (std::size_t v = 0; v < m.cols; ++v) out(u, v) += coeff * m(w, v);
    }
  }
  return out;
}

// M * X_which.
inline Mat apply_x_right(const Mat& m, const std::vector<std::size_t>& dims,
                         std::size_t which) {
  const auto strides = strides_of(dims);
  const std::size_t d = dims[which];
  const std::size_t stride = strides[which];
  Mat out(m.rows, m.cols);
  // x(digit', digit) nonzero for digit' = digit -/+ 1. Hoist the per-column
  // band coefficients so the row sweep below reads contiguously.
  std::vector<double> down(m.cols, 0.0);
  std::vector<double> up(m.cols, 0.0);
  for (std::size_t v = 0; v < m.cols; ++v) {
    const std::size_t digit = (v / stride) % d;
    if (digit > 0) down[v] = std::sqrt(double(digit) / 2.0);
    if (digit + 1 < d) up[v] = std::sqrt(double(digit + 1) / 2.0);
  }
  for (std::size_t u = 0; u < m.rows; ++u) {
    const C* row = &m.a[u * m.cols];
    C* out_row = &out.a[u * m.cols];
    for (std::size_t v = 0; v < m.cols; ++v) {
      if (down[v] != 0.0) out_row[v] += row[v - stride] * down[v];
      if (up[v] != 0.0) out_row[v] += row[v + stride] * up[v];
    }
  }
  return out;
}

// --- partial trace ------------------------------------------------------

// Trace out every digit not listed in `kept` (kept must be strictly
// increasing). The reduced matrix keeps the kept digits in their original
// relative order, first kept digit slowest.
// Adds scale * (x_which m - m x_which) into `out` in one pass: the fused
// form of scale * (apply_x_left(m) - apply_x_right(m)), same band rules.
inline void accumulate_x_bracket(Mat& out, const Mat& m,
                                 const std::vector<std::size_t>& dims,
                                 std::size_t which, double scale) {
  const auto strides = strides_of(dims);
  const std::size_t d = dims[which];
  const std::size_t stride = strides[which];
  std::vector<double> down(m.cols, 0.0);
  std::vector<double> up(m.cols, 0.0);
  for (std::size_t v = 0; v < m.cols; ++v) {
    const std::size_t digit = (v / stride) % d;
    if (digit > 0) down[v] = std::sqrt(double(digit) / 2.0);
    if (digit + 1 < d) up[v] = std::sqrt(double(digit + 1) / 2.0);
  }
  for (std::size_t u = 0; u < m.rows; ++u) {
    const std::size_t digit = (u / stride) % d;
    const C* row_down = digit > 0 ? &m.a[(u - stride) * m.cols] : nullptr;
    const C* row_up = digit + 1 < d ? &m.a[(u + stride) * m.cols] : nullptr;
    const double cd = digit > 0 ? std::sqrt(double(digit) / 2.0) : 0.0;
    const double cu = digit + 1 < d ? std::sqrt(double(digit + 1) / 2.0) : 0.0;
    const C* row = &m.a[u * m.cols];
    C* out_row = &out.a[u * m.cols];
    for (std::size_t v = 0; v < m.cols; ++v) {
      C acc{};
      if (row_down != nullptr) acc += cd * row_down[v];
      if (row_up != nullptr) acc += cu * row_up[v];
      if (down[v] != 0.0) acc -= row[v - stride] * down[v];
      if (up[v] != 0.0) acc -= row[v + stride] * up[v];
      out_row[v] += scale * acc;
    }
  }
}

inline Mat partial_trace(const Mat& rho, const std::vector<std::size_t>& dims,
                         const std::vector<std::size_t>& kept) {
  std::vector<std::size_t> traced;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    bool is_kept = false;
    for (std::size_t k : kept) is_kept = is_kept || (k == i);
    if (!is_kept) traced.push_back(i);
  }
  const auto strides = strides_of(dims);

  std::size_t kept_dim = 1;
  for (std::size_t k : kept) kept_dim *= dims[k];
  std::size_t traced_dim = 1;
  for (std::size_t t : traced) traced_dim *= dims[t];

  // Decompose a flat kept (resp. traced) index into an offset in the full
  // index space.
  auto offset_of = [&](std::size_t flat, const std::vector<std::size_t>& which) {
    std::size_t offset = 0;
    for (std::size_t i = which.size(); i-- > 0;) {
      const std::size_t d = dims[which[i]];
      offset += (flat % d) * strides[which[i]];
      flat /= d;
    }
    return offset;
  };

  Mat out(kept_dim, kept_dim);
  for (std::size_t i = 0; i < kept_dim; ++i) {
    const std::size_t oi = offset_of(i, kept);
    for (std::size_t j = 0; j < kept_dim; ++j) {
      const std::size_t oj = offset_of(j, kept);
      C sum{};
      for (std::size_t t = 0; t < traced_dim; ++t) {
        const std::size_t ot = offset_of(t, traced);
        sum += rho(oi + ot, oj + ot);
      }
      out(i, j) = sum;
    }
  }
  return out;
}

inline double max_abs_diff(const Mat& x, const Mat& y) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.a.size(); ++i) {
    worst = std::max(worst, std::abs(x.a[i] - y.a[i]));
  }
  return worst;
}

}  // namespace oracle
