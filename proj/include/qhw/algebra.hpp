#pragma once

// Finite-dimensional algebras given by structure constants, modules given
// by action matrices, Hom spaces, centers and central idempotents.

#include "qhw/error.hpp"
#include "qhw/linalg.hpp"
#include "qhw/sparse.hpp"

#include <algorithm>
#include <optional>
#include <type_traits>
#include <string>
#include <vector>

namespace qhw {

enum class Side { Left, Right };

template <class S>
class FinDimAlgebra {
 public:
  FinDimAlgebra() = default;
  /// products[i * n + j] holds b_i * b_j in basis coordinates.
  FinDimAlgebra(std::vector<std::string> names, std::vector<SparseVec<S>> products, Vector<S> unit)
      : names_(std::move(names)), products_(std::move(products)), unit_(std::move(unit)) {
    const size_t n = names_.size();
    if (products_.size() != n * n || static_cast<size_t>(unit_.size()) != n)
      throw Error(ErrorCode::DimensionMismatch, "structure constants do not match the basis");
  }

  Index dim() const { return static_cast<Index>(names_.size()); }
  const std::string& name(Index i) const { return names_[static_cast<size_t>(i)]; }
  const std::vector<std::string>& names() const { return names_; }
  const Vector<S>& unit() const { return unit_; }
  const SparseVec<S>& product(Index i, Index j) const {
    return products_[static_cast<size_t>(i * dim() + j)];
  }

  Vector<S> basis_vector(Index i) const {
    Vector<S> v = Vector<S>::Constant(dim(), S(0));
    v(i) = S(1);
    return v;
  }

  Vector<S> mul(const Vector<S>& x, const Vector<S>& y) const {
    Vector<S> out = Vector<S>::Constant(dim(), S(0));
    for (Index i = 0; i < dim(); ++i) {
      if (x(i).is_zero()) continue;
      for (Index j = 0; j < dim(); ++j) {
        if (y(j).is_zero()) continue;
        const S c = x(i) * y(j);
        for (const auto& [k, v] : product(i, j)) out(k) += c * v;
      }
    }
    return out;
  }

  /// Matrix of y -> x y.
  Matrix<S> left_of(const Vector<S>& x) const {
    Matrix<S> m = zeros<S>(dim(), dim());
    for (Index i = 0; i < dim(); ++i) {
      if (x(i).is_zero()) continue;
      for (Index j = 0; j < dim(); ++j)
        for (const auto& [k, v] : product(i, j)) m(k, j) += x(i) * v;
    }
    return m;
  }

  /// Matrix of y -> y x.
  Matrix<S> right_of(const Vector<S>& x) const {
    Matrix<S> m = zeros<S>(dim(), dim());
    for (Index j = 0; j < dim(); ++j) {
      if (x(j).is_zero()) continue;
      for (Index i = 0; i < dim(); ++i)
        for (const auto& [k, v] : product(i, j)) m(k, i) += x(j) * v;
    }
    return m;
  }

  /// Associativity on all basis triples and two-sided unit; throws InvariantViolated.
  void verify() const {
    for (Index i = 0; i < dim(); ++i)
      for (Index j = 0; j < dim(); ++j) {
        // (b_i b_j) b_k versus b_i (b_j b_k) for all k at once
        for (Index k = 0; k < dim(); ++k) {
          Vector<S> lhs = Vector<S>::Constant(dim(), S(0)), rhs = lhs;
          for (const auto& [p, c] : product(i, j))
            for (const auto& [q, d] : product(p, k)) lhs(q) += c * d;
          for (const auto& [p, c] : product(j, k))
            for (const auto& [q, d] : product(i, p)) rhs(q) += c * d;
          if (lhs != rhs)
            throw Error(ErrorCode::InvariantViolated,
                        "not associative on (" + name(i) + ", " + name(j) + ", " + name(k) + ")");
        }
      }
    for (Index i = 0; i < dim(); ++i) {
      const Vector<S> b = basis_vector(i);
      if (mul(unit_, b) != b || mul(b, unit_) != b)
        throw Error(ErrorCode::InvariantViolated, "unit fails on " + name(i));
    }
  }

  FinDimAlgebra opposite() const {
    std::vector<SparseVec<S>> prods(products_.size());
    for (Index i = 0; i < dim(); ++i)
      for (Index j = 0; j < dim(); ++j) prods[static_cast<size_t>(i * dim() + j)] = product(j, i);
    return FinDimAlgebra(names_, std::move(prods), unit_);
  }

  /// Columns span the center.
  Matrix<S> center() const {
    // z central iff sum_i z_i (b_i b_j - b_j b_i) = 0 for all j
    Matrix<S> sys = zeros<S>(dim() * dim(), dim());
    for (Index i = 0; i < dim(); ++i)
      for (Index j = 0; j < dim(); ++j) {
        for (const auto& [k, v] : product(i, j)) sys(j * dim() + k, i) += v;
        for (const auto& [k, v] : product(j, i)) sys(j * dim() + k, i) -= v;
      }
    return kernel_basis(sys);
  }

  /// Semisimple iff the trace form (x, y) -> tr(L_{xy}) is nondegenerate
  /// (sufficient in every characteristic, necessary in characteristic 0).
  bool trace_form_nondegenerate() const {
    std::vector<S> tr(static_cast<size_t>(dim()), S(0));
    for (Index k = 0; k < dim(); ++k) tr[static_cast<size_t>(k)] = left_of(basis_vector(k)).trace();
    Matrix<S> g = zeros<S>(dim(), dim());
    for (Index i = 0; i < dim(); ++i)
      for (Index j = 0; j < dim(); ++j)
        for (const auto& [k, v] : product(i, j)) g(i, j) += v * tr[static_cast<size_t>(k)];
    return rank(g) == dim();
  }

  friend bool operator==(const FinDimAlgebra& a, const FinDimAlgebra& b) {
    return a.products_ == b.products_ && a.unit_ == b.unit_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<SparseVec<S>> products_;
  Vector<S> unit_;
};

/// Builds an algebra from a dense product callback f(i, j) -> Vector.
template <class S, class F>
FinDimAlgebra<S> algebra_from_products(std::vector<std::string> names, F&& f, Vector<S> unit) {
  const Index n = static_cast<Index>(names.size());
  std::vector<SparseVec<S>> prods;
  prods.reserve(static_cast<size_t>(n * n));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) prods.push_back(to_sparse<S>(f(i, j)));
  return FinDimAlgebra<S>(std::move(names), std::move(prods), std::move(unit));
}

/// Checks that the linear map F (columns = images of basis vectors of a)
/// is a unital algebra homomorphism a -> b.
template <class S>
bool is_algebra_map(const FinDimAlgebra<S>& a, const FinDimAlgebra<S>& b, const Matrix<S>& f) {
  if (f.rows() != b.dim() || f.cols() != a.dim()) return false;
  if (Vector<S>(f * a.unit()) != b.unit()) {
    // Eigen product on exact scalars is fine for small sizes
    return false;
  }
  for (Index i = 0; i < a.dim(); ++i)
    for (Index j = 0; j < a.dim(); ++j) {
      Vector<S> lhs = Vector<S>::Constant(b.dim(), S(0));
      for (const auto& [k, v] : a.product(i, j)) lhs += v * f.col(k);
      if (lhs != b.mul(f.col(i), f.col(j))) return false;
    }
  return true;
}

template <class S>
struct FinDimModule {
  Side side = Side::Left;
  Index dim = 0;
  /// action[i]: matrix of m -> b_i m (left) or m -> m b_i (right).
  std::vector<Matrix<S>> action;

  Matrix<S> act(const Vector<S>& x) const {
    Matrix<S> m = zeros<S>(dim, dim);
    for (Index i = 0; i < x.size(); ++i)
      if (!x(i).is_zero()) m += x(i) * action[static_cast<size_t>(i)];
    return m;
  }

  /// Throws NotAModule unless the action respects the structure constants.
  void verify(const FinDimAlgebra<S>& alg) const {
    if (static_cast<Index>(action.size()) != alg.dim())
      throw Error(ErrorCode::NotAModule, "wrong number of action matrices");
    for (const auto& m : action)
      if (m.rows() != dim || m.cols() != dim) throw Error(ErrorCode::NotAModule, "action matrix has wrong shape");
    if (act(alg.unit()) != identity<S>(dim)) throw Error(ErrorCode::NotAModule, "unit does not act as identity");
    for (Index i = 0; i < alg.dim(); ++i)
      for (Index j = 0; j < alg.dim(); ++j) {
        Matrix<S> prod_action = zeros<S>(dim, dim);
        for (const auto& [k, v] : alg.product(i, j)) prod_action += v * action[static_cast<size_t>(k)];
        const auto& ai = action[static_cast<size_t>(i)];
        const auto& aj = action[static_cast<size_t>(j)];
        Matrix<S> composed = side == Side::Left ? mul<S>(ai, aj) : mul<S>(aj, ai);
        if (composed != prod_action)
          throw Error(ErrorCode::NotAModule, "action fails on (" + alg.name(i) + ", " + alg.name(j) + ")");
      }
  }
};

template <class S>
FinDimModule<S> regular_module(const FinDimAlgebra<S>& alg, Side side) {
  FinDimModule<S> m{side, alg.dim(), {}};
  for (Index i = 0; i < alg.dim(); ++i)
    m.action.push_back(side == Side::Left ? alg.left_of(alg.basis_vector(i)) : alg.right_of(alg.basis_vector(i)));
  return m;
}

/// Restricts the action to the subspace spanned by the columns of `basis`
/// (which must be invariant).
template <class S>
FinDimModule<S> restrict_to(const FinDimModule<S>& m, const Matrix<S>& basis) {
  FinDimModule<S> out{m.side, basis.cols(), {}};
  for (const auto& a : m.action) {
    auto x = solve<S>(basis, mul<S>(a, basis));
    if (!x) throw Error(ErrorCode::NotAModule, "subspace is not invariant");
    out.action.push_back(*x);
  }
  return out;
}

/// Smallest invariant subspace containing the columns of gens (basis columns).
template <class S>
Matrix<S> generated_submodule(const FinDimModule<S>& m, const Matrix<S>& gens) {
  Matrix<S> span = image_basis(gens);
  for (;;) {
    Matrix<S> all = span;
    for (const auto& a : m.action) all = hstack<S>(all, mul<S>(a, span));
    Matrix<S> next = image_basis(all);
    if (next.cols() == span.cols()) return span;
    span = next;
  }
}

/// Quotient by an invariant subspace; also returns the projection matrix.
template <class S>
std::pair<FinDimModule<S>, Matrix<S>> quotient_module(const FinDimModule<S>& m, const Matrix<S>& sub) {
  // complement spanned by standard basis vectors, chosen greedily
  Matrix<S> comp = complement_columns<S>(sub, identity<S>(m.dim));
  Matrix<S> full = hstack<S>(sub, comp);
  auto inv = inverse(full);
  Matrix<S> proj = inv->bottomRows(comp.cols());
  FinDimModule<S> q{m.side, comp.cols(), {}};
  for (const auto& a : m.action) q.action.push_back(mul<S>(proj, mul<S>(a, comp)));
  return {q, proj};
}

template <class S>
FinDimModule<S> direct_sum(const FinDimModule<S>& a, const FinDimModule<S>& b) {
  FinDimModule<S> out{a.side, a.dim + b.dim, {}};
  for (size_t i = 0; i < a.action.size(); ++i) {
    Matrix<S> m = zeros<S>(out.dim, out.dim);
    m.topLeftCorner(a.dim, a.dim) = a.action[i];
    m.bottomRightCorner(b.dim, b.dim) = b.action[i];
    out.action.push_back(std::move(m));
  }
  return out;
}

/// Transports the action along an invertible change of basis g: m -> g m.
template <class S>
FinDimModule<S> change_basis(const FinDimModule<S>& m, const Matrix<S>& g) {
  auto ginv = inverse(g);
  if (!ginv) throw Error(ErrorCode::InvariantViolated, "change of basis is singular");
  FinDimModule<S> out{m.side, m.dim, {}};
  for (const auto& a : m.action) out.action.push_back(mul<S>(g, mul<S>(a, *ginv)));
  return out;
}

/// Basis of Hom_A(M, N): matrices X (dim N x dim M) with X a_M = a_N X.
template <class S>
std::vector<Matrix<S>> hom_space(const FinDimModule<S>& m, const FinDimModule<S>& n) {
  const Index dm = m.dim, dn = n.dim, unknowns = dm * dn;
  // X stored column-major: X(r, c) -> index c * dn + r
  std::vector<SparseVec<S>> rows;
  for (size_t a = 0; a < m.action.size(); ++a) {
    const auto& am = m.action[a];
    const auto& an = n.action[a];
    for (Index r = 0; r < dn; ++r)
      for (Index c = 0; c < dm; ++c) {
        // (X am)(r, c) - (an X)(r, c)
        std::vector<std::pair<Index, S>> e;
        for (Index k = 0; k < dm; ++k)
          if (!am(k, c).is_zero()) e.emplace_back(k * dn + r, am(k, c));
        for (Index k = 0; k < dn; ++k)
          if (!an(r, k).is_zero()) e.emplace_back(c * dn + k, -an(r, k));
        auto v = make_sparse<S>(std::move(e));
        if (!v.empty()) rows.push_back(std::move(v));
      }
  }
  Matrix<S> sys = zeros<S>(static_cast<Index>(rows.size()), unknowns);
  for (size_t i = 0; i < rows.size(); ++i)
    for (const auto& [j, v] : rows[i]) sys(static_cast<Index>(i), j) = v;
  Matrix<S> ker = kernel_basis(sys);
  std::vector<Matrix<S>> out;
  for (Index k = 0; k < ker.cols(); ++k) {
    Matrix<S> x(dn, dm);
    for (Index c = 0; c < dm; ++c)
      for (Index r = 0; r < dn; ++r) x(r, c) = ker(c * dn + r, k);
    out.push_back(std::move(x));
  }
  return out;
}

template <class S>
bool is_module_map(const FinDimModule<S>& m, const FinDimModule<S>& n, const Matrix<S>& f) {
  for (size_t a = 0; a < m.action.size(); ++a)
    if (mul<S>(f, m.action[a]) != mul<S>(n.action[a], f)) return false;
  return true;
}

template <class S>
Vector<S> flatten(const Matrix<S>& m) {
  Vector<S> v(m.size());
  for (Index c = 0; c < m.cols(); ++c)
    for (Index r = 0; r < m.rows(); ++r) v(c * m.rows() + r) = m(r, c);
  return v;
}

/// Columns = flattened matrices.
template <class S>
Matrix<S> flatten_all(const std::vector<Matrix<S>>& ms, Index rows, Index cols) {
  Matrix<S> out = zeros<S>(rows * cols, static_cast<Index>(ms.size()));
  for (size_t i = 0; i < ms.size(); ++i) out.col(static_cast<Index>(i)) = flatten(ms[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Central idempotents of a split semisimple algebra.

namespace detail {

inline std::vector<Integer> divisors(const Integer& n) {
  std::vector<Integer> out;
  Integer a = abs(n);
  if (a.is_zero()) return out;
  // trial division; inputs here are small
  for (Integer d(1); d * d <= a; d += Integer(1)) {
    if (divmod(a, d).second.is_zero()) {
      out.push_back(d);
      Integer e = a / d;
      if (!(e == d)) out.push_back(e);
    }
  }
  return out;
}

template <class S>
S eval_poly(const std::vector<S>& c, const S& x) {
  S acc(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

/// Roots in the base field (without multiplicity) of a monic polynomial
/// c[0] + c[1] x + ... ; returns nullopt when it does not split into
/// distinct linear factors.
template <class S>
std::optional<std::vector<S>> distinct_roots(const std::vector<S>& c) {
  const size_t deg = c.size() - 1;
  std::vector<S> roots;
  if constexpr (std::is_same_v<S, Rational>) {
    // clear denominators
    Integer l(1);
    for (const auto& x : c) l = l / gcd(l, x.denominator()) * x.denominator();
    std::vector<Integer> ic;
    for (const auto& x : c) ic.push_back(x.numerator() * (l / x.denominator()));
    size_t shift = 0;
    while (shift < ic.size() && ic[shift].is_zero()) ++shift;
    if (shift > 0) roots.push_back(S(0));
    if (shift < ic.size() - 1) {
      auto ps = divisors(ic[shift]);
      auto qs = divisors(ic.back());
      for (const auto& p : ps)
        for (const auto& q : qs)
          for (int sgn : {1, -1}) {
            S r = S(p * Integer(sgn)) / S(q);
            if (std::find(roots.begin(), roots.end(), r) != roots.end()) continue;
            if (eval_poly(c, r).is_zero()) roots.push_back(r);
          }
    }
  } else {
    const auto p = S::modulus();
    if (p > (1u << 22)) return std::nullopt;
    for (std::uint64_t v = 0; v < p && roots.size() < deg; ++v)
      if (eval_poly(c, S(static_cast<long>(v))).is_zero()) roots.push_back(S(static_cast<long>(v)));
  }
  if (roots.size() != deg) return std::nullopt;
  return roots;
}

}  // namespace detail

/// Primitive central idempotents, ordered by their first nonzero coordinate.
/// Throws NotSemisimple if the algebra is not split semisimple.
template <class S>
std::vector<Vector<S>> central_idempotents(const FinDimAlgebra<S>& alg) {
  if (!alg.trace_form_nondegenerate()) throw Error(ErrorCode::NotSemisimple, "trace form is degenerate");
  const Matrix<S> z = alg.center();
  std::vector<Vector<S>> idems{alg.unit()};
  for (Index k = 0; k < z.cols(); ++k) {
    std::vector<Vector<S>> next;
    for (const auto& c : idems) {
      const Vector<S> w = alg.mul(c, z.col(k));
      // minimal polynomial of w inside cA (unit c)
      std::vector<Vector<S>> powers{c};
      Matrix<S> span = c;
      std::vector<S> coeffs;
      for (;;) {
        Vector<S> p = alg.mul(powers.back(), w);
        auto x = solve<S>(span, Matrix<S>(p));
        if (x) {
          // p = sum x_i w^i  ->  w^d - sum x_i w^i = 0
          for (Index i = 0; i < x->rows(); ++i) coeffs.push_back(-(*x)(i, 0));
          coeffs.push_back(S(1));
          break;
        }
        powers.push_back(p);
        span = hstack<S>(span, Matrix<S>(p));
      }
      auto roots = detail::distinct_roots(coeffs);
      if (!roots) throw Error(ErrorCode::NotSemisimple, "center does not split over the base field");
      if (roots->size() == 1) {
        next.push_back(c);
        continue;
      }
      for (size_t j = 0; j < roots->size(); ++j) {
        Vector<S> e = c;
        for (size_t i = 0; i < roots->size(); ++i) {
          if (i == j) continue;
          Vector<S> f = (w - (*roots)[i] * c) / ((*roots)[j] - (*roots)[i]);
          e = alg.mul(e, f);
        }
        next.push_back(e);
      }
    }
    idems = std::move(next);
  }
  auto first_nz = [](const Vector<S>& v) {
    for (Index i = 0; i < v.size(); ++i)
      if (!v(i).is_zero()) return i;
    return v.size();
  };
  std::stable_sort(idems.begin(), idems.end(),
                   [&](const Vector<S>& a, const Vector<S>& b) { return first_nz(a) < first_nz(b); });
  return idems;
}

/// Matrix block sizes n_i with dim(c_i A) = n_i^2.
template <class S>
std::vector<Index> block_sizes(const FinDimAlgebra<S>& alg, const std::vector<Vector<S>>& idems) {
  std::vector<Index> out;
  for (const auto& c : idems) {
    const Index d = rank(alg.left_of(c));
    Index n = 0;
    while ((n + 1) * (n + 1) <= d) ++n;
    if (n * n != d) throw Error(ErrorCode::NotSemisimple, "block dimension is not a square");
    out.push_back(n);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tensor products over a subalgebra.

/// V (x)_B W for a right B-module V and a left B-module W: the quotient of
/// V (x)_k W (index v * dim W + w) by v b (x) w - v (x) b w.
template <class S>
struct TensorProduct {
  Index dim = 0;
  Matrix<S> projection;  // (dim) x (dim V * dim W)
  Matrix<S> section;     // basis of a complement, in V (x)_k W coordinates
};

template <class S>
TensorProduct<S> tensor_over(const FinDimModule<S>& v, const FinDimModule<S>& w) {
  const Index dv = v.dim, dw = w.dim, n = dv * dw;
  std::vector<SparseVec<S>> rels;
  for (size_t b = 0; b < v.action.size(); ++b)
    for (Index i = 0; i < dv; ++i)
      for (Index j = 0; j < dw; ++j) {
        std::vector<std::pair<Index, S>> e;
        // (e_i b) (x) e_j - e_i (x) (b e_j)
        for (Index k = 0; k < dv; ++k)
          if (!v.action[b](k, i).is_zero()) e.emplace_back(k * dw + j, v.action[b](k, i));
        for (Index k = 0; k < dw; ++k)
          if (!w.action[b](k, j).is_zero()) e.emplace_back(i * dw + k, -w.action[b](k, j));
        auto s = make_sparse<S>(std::move(e));
        if (!s.empty()) rels.push_back(std::move(s));
      }
  Matrix<S> r = zeros<S>(n, static_cast<Index>(rels.size()));
  for (size_t c = 0; c < rels.size(); ++c)
    for (const auto& [i, x] : rels[c]) r(i, static_cast<Index>(c)) = x;
  Matrix<S> rel_basis = image_basis(r);
  Matrix<S> comp = complement_columns<S>(rel_basis, identity<S>(n));
  Matrix<S> full = hstack<S>(rel_basis, comp);
  auto inv = inverse(full);
  TensorProduct<S> t;
  t.dim = comp.cols();
  t.projection = inv->bottomRows(comp.cols());
  t.section = comp;
  return t;
}

}  // namespace qhw
