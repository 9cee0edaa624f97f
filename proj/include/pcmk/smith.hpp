#ifndef PCMK_SMITH_HPP
#define PCMK_SMITH_HPP

#include "pcmk/integer.hpp"

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pcmk {

namespace detail {

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("int64 overflow in integer elimination");
  return r;
}
inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("int64 overflow in integer elimination");
  return r;
}
inline Integer checked_mul(const Integer& a, const Integer& b) { return a * b; }
inline Integer checked_add(const Integer& a, const Integer& b) { return a + b; }

template <typename Scalar>
Scalar abs_value(const Scalar& a) {
  return a < Scalar(0) ? Scalar(0) - a : a;
}

// row(dst) -= q * row(src)
template <typename Scalar>
void row_axpy(MatrixX<Scalar>& m, Eigen::Index dst, Eigen::Index src, const Scalar& q) {
  if (q == Scalar(0)) return;
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    if (m(src, c) != Scalar(0)) m(dst, c) = checked_add(m(dst, c), checked_mul(Scalar(0) - q, m(src, c)));
}

// col(dst) -= q * col(src)
template <typename Scalar>
void col_axpy(MatrixX<Scalar>& m, Eigen::Index dst, Eigen::Index src, const Scalar& q) {
  if (q == Scalar(0)) return;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    if (m(r, src) != Scalar(0)) m(r, dst) = checked_add(m(r, dst), checked_mul(Scalar(0) - q, m(r, src)));
}

}  // namespace detail

/// Result of a Smith normal form computation: diagonal == left * input * right,
/// with left and right unimodular and d_0 | d_1 | ... on the diagonal.
template <typename Scalar>
struct SmithForm {
  MatrixX<Scalar> diagonal;
  MatrixX<Scalar> left;   // rows x rows; empty when not requested
  MatrixX<Scalar> right;  // cols x cols; empty when not requested
  Eigen::Index rank = 0;

  std::vector<Scalar> invariants() const {
    std::vector<Scalar> out;
    for (Eigen::Index i = 0; i < rank; ++i) out.push_back(diagonal(i, i));
    return out;
  }
};

struct SmithOptions {
  bool want_left = true;
  bool want_right = true;
};

template <typename Scalar>
SmithForm<Scalar> smith_normal_form(const MatrixX<Scalar>& input, SmithOptions opts = {}) {
  using detail::abs_value;
  const Eigen::Index rows = input.rows();
  const Eigen::Index cols = input.cols();
  MatrixX<Scalar> a = input;
  MatrixX<Scalar> u, v;
  if (opts.want_left) u = MatrixX<Scalar>::Identity(rows, rows);
  if (opts.want_right) v = MatrixX<Scalar>::Identity(cols, cols);

  auto swap_rows = [&](Eigen::Index i, Eigen::Index j) {
    if (i == j) return;
    a.row(i).swap(a.row(j));
    if (opts.want_left) u.row(i).swap(u.row(j));
  };
  auto swap_cols = [&](Eigen::Index i, Eigen::Index j) {
    if (i == j) return;
    a.col(i).swap(a.col(j));
    if (opts.want_right) v.col(i).swap(v.col(j));
  };
  auto row_op = [&](Eigen::Index dst, Eigen::Index src, const Scalar& q) {
    detail::row_axpy(a, dst, src, q);
    if (opts.want_left) detail::row_axpy(u, dst, src, q);
  };
  auto col_op = [&](Eigen::Index dst, Eigen::Index src, const Scalar& q) {
    detail::col_axpy(a, dst, src, q);
    if (opts.want_right) detail::col_axpy(v, dst, src, q);
  };

  Eigen::Index rank = 0;
  const Eigen::Index limit = std::min(rows, cols);
  for (Eigen::Index t = 0; t < limit; ++t) {
    bool found = false;
    while (true) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      Eigen::Index pi = -1, pj = -1;
      Scalar best{};
      for (Eigen::Index i = t; i < rows; ++i)
        for (Eigen::Index j = t; j < cols; ++j)
          if (a(i, j) != Scalar(0) && (pi < 0 || abs_value(a(i, j)) < best)) {
            pi = i;
            pj = j;
            best = abs_value(a(i, j));
            if (best == Scalar(1)) goto pivot_chosen;
          }
    pivot_chosen:
      if (pi < 0) break;
      found = true;
      swap_rows(t, pi);
      swap_cols(t, pj);

      bool clean = true;
      for (Eigen::Index i = t + 1; i < rows; ++i) {
        if (a(i, t) == Scalar(0)) continue;
        row_op(i, t, a(i, t) / a(t, t));
        if (a(i, t) != Scalar(0)) clean = false;
      }
      for (Eigen::Index j = t + 1; j < cols; ++j) {
        if (a(t, j) == Scalar(0)) continue;
        col_op(j, t, a(t, j) / a(t, t));
        if (a(t, j) != Scalar(0)) clean = false;
      }
      if (!clean) continue;

      Eigen::Index bad = -1;
      for (Eigen::Index i = t + 1; i < rows && bad < 0; ++i)
        for (Eigen::Index j = t + 1; j < cols; ++j)
          if (a(i, j) % a(t, t) != Scalar(0)) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      row_op(t, bad, Scalar(-1));
    }
    if (!found) break;
    if (a(t, t) < Scalar(0)) {
      for (Eigen::Index c = 0; c < cols; ++c) a(t, c) = Scalar(0) - a(t, c);
      if (opts.want_left)
        for (Eigen::Index c = 0; c < rows; ++c) u(t, c) = Scalar(0) - u(t, c);
    }
    rank = t + 1;
  }
  return {std::move(a), std::move(u), std::move(v), rank};
}

/// Exact determinant by fraction-free (Bareiss) elimination.
template <typename Scalar>
Scalar determinant(MatrixX<Scalar> m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  if (n == 0) return Scalar(1);
  Scalar sign(1), prev(1);
  for (Eigen::Index k = 0; k < n - 1; ++k) {
    if (m(k, k) == Scalar(0)) {
      Eigen::Index s = k + 1;
      while (s < n && m(s, k) == Scalar(0)) ++s;
      if (s == n) return Scalar(0);
      m.row(k).swap(m.row(s));
      sign = Scalar(0) - sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j)
        m(i, j) = (detail::checked_add(detail::checked_mul(m(i, j), m(k, k)),
                                       Scalar(0) - detail::checked_mul(m(i, k), m(k, j)))) /
                  prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

}  // namespace pcmk

#endif  // PCMK_SMITH_HPP
