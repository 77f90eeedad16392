#pragma once

// Dense exact linear algebra over a field: row reduction, rank, kernels,
// images and linear solves. Rational matrices are reduced fraction-free
// (Bareiss) on integer rows; prime-field matrices use plain Gauss-Jordan.

#include "qhw/scalar.hpp"

#include <Eigen/Core>

#include <optional>
#include <utility>
#include <vector>

namespace qhw {

using Index = Eigen::Index;

template <class S>
using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vector = Eigen::Matrix<S, Eigen::Dynamic, 1>;
using IntMatrix = Matrix<Integer>;

template <class S>
Matrix<S> zeros(Index rows, Index cols) {
  return Matrix<S>::Constant(rows, cols, S(0));
}

template <class S>
Matrix<S> identity(Index n) {
  Matrix<S> m = zeros<S>(n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = S(1);
  return m;
}

template <class Derived>
bool is_zero(const Eigen::MatrixBase<Derived>& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!m(i, j).is_zero()) return false;
  return true;
}

/// Exact product; Eigen's GEMM kernels are tuned for floating point.
template <class S>
Matrix<S> mul(const Matrix<S>& a, const Matrix<S>& b) {
  Matrix<S> c = zeros<S>(a.rows(), b.cols());
  for (Index j = 0; j < b.cols(); ++j)
    for (Index k = 0; k < a.cols(); ++k) {
      const S& bkj = b(k, j);
      if (bkj.is_zero()) continue;
      for (Index i = 0; i < a.rows(); ++i)
        if (!a(i, k).is_zero()) c(i, j) += a(i, k) * bkj;
    }
  return c;
}

template <class S>
Matrix<S> hstack(const Matrix<S>& a, const Matrix<S>& b) {
  if (a.cols() == 0) return b;
  if (b.cols() == 0) return a;
  Matrix<S> c(a.rows(), a.cols() + b.cols());
  c << a, b;
  return c;
}

template <class S>
Matrix<S> vstack(const Matrix<S>& a, const Matrix<S>& b) {
  if (a.rows() == 0) return b;
  if (b.rows() == 0) return a;
  Matrix<S> c(a.rows() + b.rows(), a.cols());
  c << a, b;
  return c;
}

/// Reduced row echelon form together with its pivot columns.
template <class S>
struct RowReduced {
  Matrix<S> rref;
  std::vector<Index> pivots;
  Index rank() const { return static_cast<Index>(pivots.size()); }
};

namespace detail {

// Fraction-free elimination in place; returns pivot columns. Row i < rank
// of the result holds the i-th pivot row.
inline std::vector<Index> bareiss_echelon(IntMatrix& m) {
  std::vector<Index> pivots;
  const Index rows = m.rows(), cols = m.cols();
  Integer prev(1);
  Index r = 0;
  for (Index c = 0; c < cols && r < rows; ++c) {
    Index p = r;
    while (p < rows && m(p, c).is_zero()) ++p;
    if (p == rows) continue;
    if (p != r) m.row(p).swap(m.row(r));
    const Integer pivot = m(r, c);
    for (Index i = r + 1; i < rows; ++i) {
      const Integer lead = m(i, c);
      for (Index j = c + 1; j < cols; ++j) {
        Integer v = pivot * m(i, j);
        if (!lead.is_zero() && !m(r, j).is_zero()) v -= lead * m(r, j);
        if (!v.is_zero()) v /= prev;
        m(i, j) = std::move(v);
      }
      m(i, c) = Integer(0);
    }
    prev = pivot;
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

/// Forward elimination that only touches rows with a nonzero lead and only
/// the pivot row's support; fast on the mostly-monomial matrices we meet.
template <class S>
Index sparse_rank(Matrix<S> m) {
  const Index rows = m.rows(), cols = m.cols();
  std::vector<bool> used(static_cast<size_t>(rows), false);
  std::vector<Index> support;
  Index r = 0;
  for (Index c = 0; c < cols && r < rows; ++c) {
    Index p = -1, best = cols + 1;
    for (Index i = 0; i < rows; ++i) {
      if (used[static_cast<size_t>(i)] || m(i, c).is_zero()) continue;
      Index nnz = 0;
      for (Index j = c; j < cols; ++j)
        if (!m(i, j).is_zero()) ++nnz;
      if (nnz < best) best = nnz, p = i;
    }
    if (p < 0) continue;
    used[static_cast<size_t>(p)] = true;
    ++r;
    support.clear();
    for (Index j = c + 1; j < cols; ++j)
      if (!m(p, j).is_zero()) support.push_back(j);
    const S inv = S(1) / m(p, c);
    for (Index i = 0; i < rows; ++i) {
      if (used[static_cast<size_t>(i)] || m(i, c).is_zero()) continue;
      const S f = m(i, c) * inv;
      for (Index j : support) m(i, j) -= f * m(p, j);
      m(i, c) = S(0);
    }
  }
  return r;
}

inline IntMatrix clear_denominators(const Matrix<Rational>& m) {
  IntMatrix out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    mpz_class l = 1;
    for (Index j = 0; j < m.cols(); ++j) {
      const auto& d = m(i, j).raw().get_den();
      if (d != 1) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
    }
    for (Index j = 0; j < m.cols(); ++j) {
      mpz_class v = m(i, j).raw().get_num() * (l / m(i, j).raw().get_den());
      out(i, j) = Integer(std::move(v));
    }
  }
  return out;
}

template <class S>
void back_substitute(Matrix<S>& m, const std::vector<Index>& pivots) {
  for (Index r = static_cast<Index>(pivots.size()) - 1; r >= 0; --r) {
    const Index c = pivots[r];
    const S inv = S(1) / m(r, c);
    for (Index j = c; j < m.cols(); ++j)
      if (!m(r, j).is_zero()) m(r, j) *= inv;
    for (Index i = 0; i < r; ++i) {
      if (m(i, c).is_zero()) continue;
      const S f = m(i, c);
      for (Index j = c; j < m.cols(); ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
  }
}

template <class S>
RowReduced<S> gauss_jordan(Matrix<S> m) {
  std::vector<Index> pivots;
  const Index rows = m.rows(), cols = m.cols();
  Index r = 0;
  for (Index c = 0; c < cols && r < rows; ++c) {
    Index p = r;
    while (p < rows && m(p, c).is_zero()) ++p;
    if (p == rows) continue;
    if (p != r) m.row(p).swap(m.row(r));
    const S inv = S(1) / m(r, c);
    for (Index j = c; j < cols; ++j)
      if (!m(r, j).is_zero()) m(r, j) *= inv;
    for (Index i = 0; i < rows; ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      const S f = m(i, c);
      for (Index j = c; j < cols; ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

}  // namespace detail

template <class S>
RowReduced<S> row_reduce(const Matrix<S>& m) {
  if constexpr (std::is_same_v<S, Rational>) {
    IntMatrix im = detail::clear_denominators(m);
    auto pivots = detail::bareiss_echelon(im);
    const Index r = static_cast<Index>(pivots.size());
    Matrix<Rational> out = zeros<Rational>(m.rows(), m.cols());
    for (Index i = 0; i < r; ++i)
      for (Index j = 0; j < m.cols(); ++j)
        if (!im(i, j).is_zero()) out(i, j) = Rational(im(i, j));
    detail::back_substitute(out, pivots);
    return {std::move(out), std::move(pivots)};
  } else {
    return detail::gauss_jordan<S>(m);
  }
}

/// Row rank over the scalar field.
template <class S>
Index rank(const Matrix<S>& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  if constexpr (std::is_same_v<S, Rational>) {
    return detail::sparse_rank(m);
  } else {
    return row_reduce(m).rank();
  }
}

/// Columns form a basis of the right null space.
template <class S>
Matrix<S> kernel_basis(const Matrix<S>& m) {
  const Index cols = m.cols();
  if (m.rows() == 0) return identity<S>(cols);
  auto rr = row_reduce(m);
  std::vector<bool> is_pivot(static_cast<size_t>(cols), false);
  for (Index p : rr.pivots) is_pivot[static_cast<size_t>(p)] = true;
  Matrix<S> k = zeros<S>(cols, cols - rr.rank());
  Index out = 0;
  for (Index f = 0; f < cols; ++f) {
    if (is_pivot[static_cast<size_t>(f)]) continue;
    k(f, out) = S(1);
    for (Index r = 0; r < rr.rank(); ++r) k(rr.pivots[r], out) = -rr.rref(r, f);
    ++out;
  }
  return k;
}

/// A basis of the column space, chosen among the columns of m.
template <class S>
Matrix<S> image_basis(const Matrix<S>& m) {
  if (m.rows() == 0 || m.cols() == 0) return zeros<S>(m.rows(), 0);
  auto rr = row_reduce(m);
  Matrix<S> out(m.rows(), rr.rank());
  for (Index i = 0; i < rr.rank(); ++i) out.col(i) = m.col(rr.pivots[i]);
  return out;
}

/// Some X with a*X = b, free variables set to zero; nullopt if inconsistent.
template <class S>
std::optional<Matrix<S>> solve(const Matrix<S>& a, const Matrix<S>& b) {
  const Index n = a.cols();
  if (a.rows() == 0) {
    if (!is_zero(b)) return std::nullopt;
    return zeros<S>(n, b.cols());
  }
  auto rr = row_reduce(hstack(a, b));
  for (Index p : rr.pivots)
    if (p >= n) return std::nullopt;
  Matrix<S> x = zeros<S>(n, b.cols());
  for (Index r = 0; r < rr.rank(); ++r) x.row(rr.pivots[r]) = rr.rref.block(r, n, 1, b.cols());
  return x;
}

template <class S>
std::optional<Matrix<S>> inverse(const Matrix<S>& a) {
  if (a.rows() != a.cols()) return std::nullopt;
  if (rank(a) != a.rows()) return std::nullopt;
  return solve(a, identity<S>(a.rows()));
}

/// True when every column of v lies in the column span of basis.
template <class S>
bool in_span(const Matrix<S>& basis, const Matrix<S>& v) {
  if (v.cols() == 0) return true;
  return rank(hstack(basis, v)) == rank(basis);
}

/// Columns extending `sub` (assumed independent) to a basis of span(sub, ambient):
/// chosen greedily among the columns of `ambient` in order.
template <class S>
Matrix<S> complement_columns(const Matrix<S>& sub, const Matrix<S>& ambient) {
  auto rr = row_reduce(hstack(sub, ambient));
  std::vector<Index> picked;
  for (Index p : rr.pivots)
    if (p >= sub.cols()) picked.push_back(p - sub.cols());
  Matrix<S> out(ambient.rows(), static_cast<Index>(picked.size()));
  for (size_t i = 0; i < picked.size(); ++i) out.col(static_cast<Index>(i)) = ambient.col(picked[i]);
  return out;
}

/// Basis of the intersection of two column spaces.
template <class S>
Matrix<S> intersect_spans(const Matrix<S>& a, const Matrix<S>& b) {
  // a*x = b*y  <=>  [a | -b] (x; y) = 0
  Matrix<S> k = kernel_basis<S>(hstack<S>(a, Matrix<S>(-b)));
  Matrix<S> v = mul<S>(a, k.topRows(a.cols()));
  return image_basis(v);
}

template <class S>
S determinant(const Matrix<S>& a) {
  auto rr = detail::gauss_jordan<S>(a);  // only used on small matrices
  if (rr.rank() < a.rows()) return S(0);
  // recompute with explicit pivot tracking
  Matrix<S> m = a;
  S det(1);
  const Index n = m.rows();
  for (Index c = 0; c < n; ++c) {
    Index p = c;
    while (p < n && m(p, c).is_zero()) ++p;
    if (p != c) {
      m.row(p).swap(m.row(c));
      det = -det;
    }
    det *= m(c, c);
    const S inv = S(1) / m(c, c);
    for (Index i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      const S f = m(i, c) * inv;
      for (Index j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

inline Integer determinant(const IntMatrix& a) {
  if (a.rows() == 0) return Integer(1);
  IntMatrix m = a;
  const Index n = m.rows();
  Integer prev(1);
  int sign = 1;
  for (Index c = 0; c < n; ++c) {
    Index p = c;
    while (p < n && m(p, c).is_zero()) ++p;
    if (p == n) return Integer(0);
    if (p != c) {
      m.row(p).swap(m.row(c));
      sign = -sign;
    }
    for (Index i = c + 1; i < n; ++i) {
      for (Index j = c + 1; j < n; ++j) m(i, j) = (m(c, c) * m(i, j) - m(i, c) * m(c, j)) / prev;
      m(i, c) = Integer(0);
    }
    prev = m(c, c);
  }
  return sign > 0 ? m(n - 1, n - 1) : -m(n - 1, n - 1);
}

template <class S>
Matrix<S> to_field(const IntMatrix& m) {
  Matrix<S> out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) out(i, j) = S(m(i, j));
  return out;
}

inline IntMatrix int_mul(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix c = IntMatrix::Constant(a.rows(), b.cols(), Integer(0));
  for (Index i = 0; i < a.rows(); ++i)
    for (Index k = 0; k < a.cols(); ++k) {
      if (a(i, k).is_zero()) continue;
      for (Index j = 0; j < b.cols(); ++j)
        if (!b(k, j).is_zero()) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

}  // namespace qhw
