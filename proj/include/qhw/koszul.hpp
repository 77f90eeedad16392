#pragma once

// The Koszul complex K of kQ/J^2: K^{-n} = kQ_n + kQ_{n+1}, d(a, b) = (0, a),
// with its right A-action, the signed left action of B = (kQ)^opp, the
// endomorphism complex End_{A^opp}(K) in a window, and the dual DK.

#include "qhw/complex.hpp"
#include "qhw/pathalg.hpp"
#include "qhw/sparse.hpp"

#include <map>
#include <optional>

namespace qhw {

template <class S>
struct KoszulWindow {
  Quiver quiver;
  int depth = 0;
  /// paths[n] = Q_n for 0 <= n <= depth + 1, in enumeration order.
  std::vector<std::vector<Path>> paths;
  std::vector<std::map<Path, Index>> path_index;
  /// Terms K^{-depth} .. K^0; the basis of K^{-n} is Q_n (as (a, 0)) then Q_{n+1} (as (0, b)).
  BoundedComplex<S> complex{0, {0}, {}};
  /// right_action[n][b]: matrix of k -> k.b on K^{-n}, b running over the basis of A (vertices, then arrows).
  std::vector<std::vector<Matrix<S>>> right_action;

  Index first_count(int n) const { return static_cast<Index>(paths[static_cast<size_t>(n)].size()); }
  Index dim(int n) const { return first_count(n) + first_count(n + 1); }
  /// Index in K^{-n} of (a, 0) or (0, b).
  Index left_index(int n, const Path& a) const { return path_index[static_cast<size_t>(n)].at(a); }
  Index right_index(int n, const Path& b) const {
    return first_count(n) + path_index[static_cast<size_t>(n + 1)].at(b);
  }
};

template <class S>
KoszulWindow<S> build_koszul(const Quiver& q, int depth) {
  if (depth < 1) throw Error(ErrorCode::WindowTooSmall, "Koszul window needs depth >= 1");
  KoszulWindow<S> kw;
  kw.quiver = q;
  kw.depth = depth;
  for (int n = 0; n <= depth + 1; ++n) {
    kw.paths.push_back(enumerate_paths(q, n));
    std::map<Path, Index> idx;
    for (size_t i = 0; i < kw.paths.back().size(); ++i) idx.emplace(kw.paths.back()[i], static_cast<Index>(i));
    kw.path_index.push_back(std::move(idx));
  }
  // the complex in increasing degree: K^{-depth}, ..., K^0
  std::vector<Index> dims;
  std::vector<Matrix<S>> diffs;
  for (int n = depth; n >= 0; --n) dims.push_back(kw.dim(n));
  for (int n = depth; n >= 1; --n) {
    Matrix<S> d = zeros<S>(kw.dim(n - 1), kw.dim(n));
    for (Index i = 0; i < kw.first_count(n); ++i) d(kw.first_count(n - 1) + i, i) = S(1);
    diffs.push_back(std::move(d));
  }
  kw.complex = BoundedComplex<S>(-depth, std::move(dims), std::move(diffs));

  const int nv = q.num_vertices();
  for (int n = 0; n <= depth; ++n) {
    std::vector<Matrix<S>> acts;
    const auto& qn = kw.paths[static_cast<size_t>(n)];
    const auto& qn1 = kw.paths[static_cast<size_t>(n + 1)];
    for (int j = 0; j < nv; ++j) {
      Matrix<S> m = zeros<S>(kw.dim(n), kw.dim(n));
      for (size_t i = 0; i < qn.size(); ++i)
        if (qn[i].source(q) == j) m(static_cast<Index>(i), static_cast<Index>(i)) = S(1);
      for (size_t i = 0; i < qn1.size(); ++i)
        if (qn1[i].source(q) == j) m(kw.right_index(n, qn1[i]), kw.right_index(n, qn1[i])) = S(1);
      acts.push_back(std::move(m));
    }
    for (int a = 0; a < q.num_arrows(); ++a) {
      // (x, 0).alpha = (0, x alpha); (0, y).alpha = 0
      Matrix<S> m = zeros<S>(kw.dim(n), kw.dim(n));
      const Path pa = Path::arrow(q, a);
      for (size_t i = 0; i < qn.size(); ++i)
        if (composable(q, qn[i], pa)) m(kw.right_index(n, concat(q, qn[i], pa)), static_cast<Index>(i)) = S(1);
      acts.push_back(std::move(m));
    }
    kw.right_action.push_back(std::move(acts));
  }
  return kw;
}

/// K^{-n} as a right module over kQ/J^2 (basis order of build_rs0).
template <class S>
FinDimModule<S> koszul_term_module(const KoszulWindow<S>& kw, int n) {
  return {Side::Right, kw.dim(n), kw.right_action[static_cast<size_t>(n)]};
}

struct ResolutionReport {
  Index h0_dim = 0;
  bool radical_kills_h0 = false;
  std::vector<std::pair<int, Index>> higher;  // (degree -n, dim H^{-n}) for 1 <= n <= depth
  int truncated_degree = 0;
  bool pass = false;
};

/// H^0(K) = kQ_0 with the radical acting by zero; H^{-n} = 0 for 1 <= n < depth.
template <class S>
ResolutionReport verify_resolution(const KoszulWindow<S>& kw) {
  ResolutionReport r;
  const auto h0 = kw.complex.cohomology(0);
  r.h0_dim = h0.dim;
  const Matrix<S> bnd = image_basis(kw.complex.d(-1));
  r.radical_kills_h0 = true;
  for (int a = 0; a < kw.quiver.num_arrows(); ++a) {
    const auto& act = kw.right_action[0][static_cast<size_t>(kw.quiver.num_vertices() + a)];
    if (!in_span<S>(bnd, mul<S>(act, h0.representatives))) r.radical_kills_h0 = false;
  }
  r.truncated_degree = -kw.depth;
  r.pass = r.h0_dim == kw.quiver.num_vertices() && r.radical_kills_h0;
  for (int n = 1; n <= kw.depth; ++n) {
    const Index d = kw.complex.cohomology(-n).dim;
    r.higher.emplace_back(-n, d);
    if (n < kw.depth && d != 0) r.pass = false;
  }
  return r;
}

// ---------------------------------------------------------------------------
// The left action of B = (kQ)^opp.

/// Result of a path acting on a basis element: coefficient and index in K^{-n+l}.
struct BasisTerm {
  int sign = 1;
  Index index = 0;
};

/// p.(basis element k of K^{-n}) = (-1)^{ln} (delta_p a, delta_p b) when l <= n.
template <class S>
std::optional<BasisTerm> b_action(const KoszulWindow<S>& kw, const Path& p, int n, Index k) {
  const int l = p.length();
  if (l > n) return std::nullopt;
  const Quiver& q = kw.quiver;
  const bool first = k < kw.first_count(n);
  const Path& x = first ? kw.paths[static_cast<size_t>(n)][static_cast<size_t>(k)]
                        : kw.paths[static_cast<size_t>(n + 1)][static_cast<size_t>(k - kw.first_count(n))];
  Path rest;
  if (!strip_prefix(q, p, x, rest)) return std::nullopt;
  const int sign = (l * n) % 2 == 0 ? 1 : -1;
  return BasisTerm{sign, first ? kw.left_index(n - l, rest) : kw.right_index(n - l, rest)};
}

/// Matrix of p. : K^{-n} -> K^{-n+l}.
template <class S>
Matrix<S> b_action_matrix(const KoszulWindow<S>& kw, const Path& p, int n) {
  const int l = p.length();
  Matrix<S> m = zeros<S>(l <= n ? kw.dim(n - l) : 0, kw.dim(n));
  if (l > n) return m;
  for (Index k = 0; k < kw.dim(n); ++k)
    if (auto t = b_action(kw, p, n, k)) m(t->index, k) = S(t->sign);
  return m;
}

/// Product in B: p * q = (-1)^{lm} qp (concatenation in kQ), zero when not composable.
inline std::optional<std::pair<int, Path>> b_product(const Quiver& q, const Path& p, const Path& r) {
  if (!composable(q, r, p)) return std::nullopt;
  const int sign = (p.length() * r.length()) % 2 == 0 ? 1 : -1;
  return std::make_pair(sign, concat(q, r, p));
}

/// (-1)^{l(l+1)/2}: the sign of the graded isomorphism kQ^op -> B on a path of length l.
inline int sign_twist(const Path& p) {
  const long l = p.length();
  return (l * (l + 1) / 2) % 2 == 0 ? 1 : -1;
}

// ---------------------------------------------------------------------------
// End_{A^opp}(K) restricted to Hom(K^{>= -(N-1)}, K^{>= -N}).
//
// A degree-n map is fixed by the images of the generators (a, 0), a in Q_m,
// of K^{-m}; the image lies in K^{-m+n} e_{s(a)}. Basis elements are
// (m, a, t) with t = (c, 0), c in Q_{m-n}, or t = (0, d), d in Q_{m-n+1},
// both starting at s(a).

template <class S>
class EndComplex {
 public:
  struct Key {
    int m;
    Index a;      // index in Q_m
    bool second;  // t = (0, d) instead of (c, 0)
    Index t;      // index of c or d in its Q
    auto operator<=>(const Key&) const = default;
  };

  explicit EndComplex(const KoszulWindow<S>& kw) : kw_(kw) {}

  int lo() const { return -(kw_.depth - 1); }
  int hi() const { return kw_.depth - 1; }

  std::vector<Key> basis(int n) const {
    std::vector<Key> out;
    const Quiver& q = kw_.quiver;
    const int big = kw_.depth;
    for (int m = std::max(n, 0); m <= std::min(big - 1, big + n); ++m) {
      const auto& qm = kw_.paths[static_cast<size_t>(m)];
      for (size_t a = 0; a < qm.size(); ++a) {
        const int sa = qm[a].source(q);
        const auto& qc = kw_.paths[static_cast<size_t>(m - n)];
        for (size_t c = 0; c < qc.size(); ++c)
          if (qc[c].source(q) == sa) out.push_back({m, static_cast<Index>(a), false, static_cast<Index>(c)});
        const auto& qd = kw_.paths[static_cast<size_t>(m - n + 1)];
        for (size_t d = 0; d < qd.size(); ++d)
          if (qd[d].source(q) == sa) out.push_back({m, static_cast<Index>(a), true, static_cast<Index>(d)});
      }
    }
    return out;
  }

  std::map<Key, Index> index(int n) const {
    std::map<Key, Index> idx;
    auto b = basis(n);
    for (size_t i = 0; i < b.size(); ++i) idx.emplace(b[i], static_cast<Index>(i));
    return idx;
  }

  /// d(f) = d_K f - (-1)^n f d_K on a basis element of degree n.
  SparseVec<S> differential(int n, const Key& k, const std::map<Key, Index>& target) const {
    std::vector<std::pair<Index, S>> e;
    if (k.second) return {};
    const Quiver& q = kw_.quiver;
    const Path& a = kw_.paths[static_cast<size_t>(k.m)][static_cast<size_t>(k.a)];
    const Path& c = kw_.paths[static_cast<size_t>(k.m - n)][static_cast<size_t>(k.t)];
    // d_K(c, 0) = (0, c), nonzero only below degree 0
    if (k.m >= n + 1) e.emplace_back(target.at({k.m, k.a, true, k.t}), S(1));
    // f(d_K(a alpha, 0)) = f((a, 0).alpha) = (0, c alpha)
    if (k.m + 1 <= kw_.depth - 1) {
      const S sign = n % 2 == 0 ? S(-1) : S(1);
      for (int al : q.arrows_to(a.source(q))) {
        const Path pa = Path::arrow(q, al);
        const Index aa = kw_.left_index(k.m + 1, concat(q, a, pa));
        const Index ca = kw_.path_index[static_cast<size_t>(k.m - n + 1)].at(concat(q, c, pa));
        e.emplace_back(target.at({k.m + 1, aa, true, ca}), sign);
      }
    }
    return make_sparse<S>(std::move(e));
  }

  /// rho(x) for a path x of length n: (a, 0) -> x.(a, 0) = (-1)^{nm} (a', 0) where a = x a'.
  SparseVec<S> rho(const Path& x, const std::map<Key, Index>& idx) const {
    const int n = x.length();
    std::vector<std::pair<Index, S>> e;
    const Quiver& q = kw_.quiver;
    for (int m = std::max(n, 0); m <= std::min(kw_.depth - 1, kw_.depth + n); ++m) {
      const auto& qm = kw_.paths[static_cast<size_t>(m)];
      for (size_t a = 0; a < qm.size(); ++a) {
        Path rest;
        if (!strip_prefix(q, x, qm[a], rest)) continue;
        const S sign = (n * m) % 2 == 0 ? S(1) : S(-1);
        e.emplace_back(idx.at({m, static_cast<Index>(a), false, kw_.path_index[static_cast<size_t>(m - n)].at(rest)}), sign);
      }
    }
    return make_sparse<S>(std::move(e));
  }

  /// Columns of d^n as sparse vectors in the degree-(n+1) basis.
  std::vector<SparseVec<S>> differential_columns(int n) const {
    const auto src = basis(n);
    const auto tgt = index(n + 1);
    std::vector<SparseVec<S>> cols;
    cols.reserve(src.size());
    for (const auto& k : src) cols.push_back(differential(n, k, tgt));
    return cols;
  }

  const KoszulWindow<S>& window() const { return kw_; }

 private:
  const KoszulWindow<S>& kw_;
};

struct EndDegreeReport {
  int degree = 0;
  Index dim = 0;
  Index expected = 0;
  bool reliable = false;
  bool rho_cocycles = false;   // rho(Q_n) lies in Z^n
  bool rho_injective = false;  // rho(B^n) meets the coboundaries trivially
  bool witness = false;        // rho(p)((p, 0)) = (-1)^n (e_{s(p)}, 0) for every p in Q_n
  bool pass() const { return !reliable || (dim == expected && rho_cocycles && rho_injective && witness); }
};

namespace detail {

/// Applies the map with the given sparse columns to x.
template <class S>
SparseVec<S> apply_sparse(const std::vector<SparseVec<S>>& cols, const SparseVec<S>& x) {
  SparseVec<S> out;
  for (const auto& [i, v] : x) out = axpy(out, v, cols[static_cast<size_t>(i)]);
  return out;
}

}  // namespace detail

/// dim H^n(End) for 0 <= n <= depth - 1; degrees up to depth - 2 are reliable.
template <class S>
std::vector<EndDegreeReport> end_cohomology_dims(const KoszulWindow<S>& kw) {
  EndComplex<S> ec(kw);
  const Quiver& q = kw.quiver;
  std::vector<EndDegreeReport> out;
  auto prev_cols = ec.differential_columns(-1);
  for (int n = 0; n <= kw.depth - 1; ++n) {
    EndDegreeReport r;
    r.degree = n;
    r.expected = static_cast<Index>(kw.paths[static_cast<size_t>(n)].size());
    r.reliable = n <= kw.depth - 2;
    const auto cols = ec.differential_columns(n);
    const Index dim_n = static_cast<Index>(cols.size());
    EchelonBasis<S> bnd;
    for (const auto& c : prev_cols) bnd.insert(c);
    const Index rank_prev = bnd.rank();
    const Index rank_n = sparse_rank(cols);
    r.dim = dim_n - rank_n - rank_prev;

    const auto idx = ec.index(n);
    r.rho_cocycles = true;
    r.witness = true;
    EchelonBasis<S> with_rho = bnd;
    Index grew = 0;
    for (const auto& x : kw.paths[static_cast<size_t>(n)]) {
      const auto rx = ec.rho(x, idx);
      if (!detail::apply_sparse(cols, rx).empty()) r.rho_cocycles = false;
      if (with_rho.insert(rx)) ++grew;
      // rho(x)((x, 0)) is the coefficient of (n, x, (e_{s(x)}, 0))
      const typename EndComplex<S>::Key w{n, kw.left_index(n, x), false,
                                          kw.path_index[0].at(Path::trivial(x.source(q)))};
      S coeff(0);
      for (const auto& [i, v] : rx)
        if (i == idx.at(w)) coeff = v;
      if (coeff != (n % 2 == 0 ? S(1) : S(-1))) r.witness = false;
    }
    r.rho_injective = grew == r.expected;
    out.push_back(r);
    prev_cols = cols;
  }
  return out;
}

/// DK: a complex of left A-modules with (DK)^n = (K^{-n})^*, via BoundedComplex::dual.
template <class S>
struct DualKoszul {
  BoundedComplex<S> complex{0, {0}, {}};
  /// left_action[n][b] on (DK)^n = D(K^{-n}): the transpose of the right action.
  std::vector<std::vector<Matrix<S>>> left_action;
};

template <class S>
DualKoszul<S> dualize(const KoszulWindow<S>& kw) {
  DualKoszul<S> dk;
  dk.complex = kw.complex.dual();
  for (int n = 0; n <= kw.depth; ++n) {
    std::vector<Matrix<S>> acts;
    for (const auto& m : kw.right_action[static_cast<size_t>(n)]) acts.push_back(m.transpose());
    dk.left_action.push_back(std::move(acts));
  }
  return dk;
}

}  // namespace qhw
