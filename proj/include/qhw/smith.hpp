#pragma once

// Smith normal form over the integers with unimodular transforms.

#include "qhw/linalg.hpp"

#include <string>
#include <vector>

namespace qhw {

/// u * m * v = diag(factors) padded with zeros; u_inv, v_inv undo u and v.
struct SmithForm {
  std::vector<Integer> factors;  // d1 | d2 | ..., all positive; zero factors omitted
  IntMatrix u, v, u_inv, v_inv;
  IntMatrix diagonal() const;
};

inline IntMatrix int_identity(Index n) {
  IntMatrix m = IntMatrix::Constant(n, n, Integer(0));
  for (Index i = 0; i < n; ++i) m(i, i) = Integer(1);
  return m;
}

namespace detail {

// Applies [[s, t], [-b', a']] (det 1) to rows i, j of m.
inline void row_combine(IntMatrix& m, Index i, Index j, const Integer& s, const Integer& t,
                        const Integer& bp, const Integer& ap) {
  for (Index c = 0; c < m.cols(); ++c) {
    Integer x = m(i, c), y = m(j, c);
    m(i, c) = s * x + t * y;
    m(j, c) = ap * y - bp * x;
  }
}

// Right-multiplies columns i, j of m by the inverse [[a', -t], [b', s]].
inline void col_combine_inverse(IntMatrix& m, Index i, Index j, const Integer& s, const Integer& t,
                                const Integer& bp, const Integer& ap) {
  for (Index r = 0; r < m.rows(); ++r) {
    Integer x = m(r, i), y = m(r, j);
    m(r, i) = x * ap + y * bp;
    m(r, j) = y * s - x * t;
  }
}

}  // namespace detail

inline IntMatrix SmithForm::diagonal() const {
  IntMatrix d = IntMatrix::Constant(u.rows(), v.rows(), Integer(0));
  for (size_t i = 0; i < factors.size(); ++i) d(static_cast<Index>(i), static_cast<Index>(i)) = factors[i];
  return d;
}

inline SmithForm smith_normal_form(const IntMatrix& m) {
  const Index rows = m.rows(), cols = m.cols();
  IntMatrix d = m;
  SmithForm out;
  out.u = int_identity(rows);
  out.u_inv = int_identity(rows);
  out.v = int_identity(cols);
  out.v_inv = int_identity(cols);

  // Row operation E on d and u; E^{-1} appended on the right of u_inv.
  auto rows_op = [&](Index i, Index j, const Integer& s, const Integer& t, const Integer& bp, const Integer& ap) {
    detail::row_combine(d, i, j, s, t, bp, ap);
    detail::row_combine(out.u, i, j, s, t, bp, ap);
    detail::col_combine_inverse(out.u_inv, i, j, s, t, bp, ap);
  };
  // Column operation via transposes: d E^T, v E^T, E^{-T} v_inv.
  auto cols_op = [&](Index i, Index j, const Integer& s, const Integer& t, const Integer& bp, const Integer& ap) {
    IntMatrix dt = d.transpose(), vt = out.v.transpose(), vit = out.v_inv.transpose();
    detail::row_combine(dt, i, j, s, t, bp, ap);
    detail::row_combine(vt, i, j, s, t, bp, ap);
    detail::col_combine_inverse(vit, i, j, s, t, bp, ap);
    d = dt.transpose();
    out.v = vt.transpose();
    out.v_inv = vit.transpose();
  };
  auto swap_rows = [&](Index i, Index j) {
    if (i == j) return;
    d.row(i).swap(d.row(j));
    out.u.row(i).swap(out.u.row(j));
    out.u_inv.col(i).swap(out.u_inv.col(j));
  };
  auto swap_cols = [&](Index i, Index j) {
    if (i == j) return;
    d.col(i).swap(d.col(j));
    out.v.col(i).swap(out.v.col(j));
    out.v_inv.row(i).swap(out.v_inv.row(j));
  };

  for (Index t = 0; t < std::min(rows, cols); ++t) {
    // smallest nonzero entry of the trailing block as pivot
    Index pr = -1, pc = -1;
    for (Index i = t; i < rows; ++i)
      for (Index j = t; j < cols; ++j)
        if (!d(i, j).is_zero() && (pr < 0 || abs(d(i, j)) < abs(d(pr, pc)))) {
          pr = i;
          pc = j;
        }
    if (pr < 0) break;
    swap_rows(t, pr);
    swap_cols(t, pc);
    for (;;) {
      bool changed = false;
      for (Index i = t + 1; i < rows; ++i) {
        if (d(i, t).is_zero()) continue;
        if (divmod(d(i, t), d(t, t)).second.is_zero()) {
          rows_op(t, i, Integer(1), Integer(0), d(i, t) / d(t, t), Integer(1));
        } else {
          auto [g, s, tt] = xgcd(d(t, t), d(i, t));
          rows_op(t, i, s, tt, d(i, t) / g, d(t, t) / g);
        }
        changed = true;
      }
      for (Index j = t + 1; j < cols; ++j) {
        if (d(t, j).is_zero()) continue;
        if (divmod(d(t, j), d(t, t)).second.is_zero()) {
          cols_op(t, j, Integer(1), Integer(0), d(t, j) / d(t, t), Integer(1));
        } else {
          auto [g, s, tt] = xgcd(d(t, t), d(t, j));
          cols_op(t, j, s, tt, d(t, j) / g, d(t, t) / g);
        }
        changed = true;
      }
      if (changed) continue;
      // enforce divisibility of the trailing block by the pivot
      Index bad = -1;
      for (Index i = t + 1; i < rows && bad < 0; ++i)
        for (Index j = t + 1; j < cols; ++j)
          if (!divmod(d(i, j), d(t, t)).second.is_zero()) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      // add row `bad` into row t: E = [[1,1],[0,1]] in the (t, bad) plane
      rows_op(t, bad, Integer(1), Integer(1), Integer(0), Integer(1));
    }
    if (d(t, t).sign() < 0) {
      for (Index c = 0; c < cols; ++c) d(t, c) = -d(t, c);
      for (Index c = 0; c < rows; ++c) out.u(t, c) = -out.u(t, c);
      for (Index r = 0; r < rows; ++r) out.u_inv(r, t) = -out.u_inv(r, t);
    }
    out.factors.push_back(d(t, t));
  }
  return out;
}

/// Invariant factors other than 1 (the torsion part) and the free rank of coker m.
struct CokernelInfo {
  std::vector<Integer> torsion;
  Index free_rank = 0;
  std::string to_string() const;
};

inline CokernelInfo cokernel(const IntMatrix& m) {
  auto s = smith_normal_form(m);
  CokernelInfo c;
  for (const auto& f : s.factors)
    if (!(f == Integer(1))) c.torsion.push_back(f);
  c.free_rank = m.rows() - static_cast<Index>(s.factors.size());
  return c;
}

inline std::string CokernelInfo::to_string() const {
  std::string out;
  for (Index i = 0; i < free_rank; ++i) out += (out.empty() ? "" : " + ") + std::string("Z");
  for (const auto& t : torsion) out += (out.empty() ? "" : " + ") + std::string("Z/") + t.to_string();
  return out.empty() ? "0" : out;
}

}  // namespace qhw
