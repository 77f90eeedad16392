#pragma once

// Leavitt path algebras by Cuntz-Krieger rewriting.
//
// Words over the double quiver are written right to left like paths. The
// rules are
//   CK1:  alpha beta*  ->  delta_{alpha,beta} e_{t(alpha)}
//   CK2:  g* g         ->  e_v - sum_{alpha != g, s(alpha) = v} alpha* alpha
// where g = g_v is the first declared arrow out of the non-sink v. Normal
// words are q* p (ghosts written first) with t(p) = t(q) and no g* g at the
// junction.

#include "qhw/algebra.hpp"
#include "qhw/quiver.hpp"
#include "qhw/sparse.hpp"

#include <map>
#include <optional>
#include <random>
#include <set>

namespace qhw {

/// A word over the double quiver; the empty word is e_anchor.
struct LWord {
  std::vector<int> letters;
  int anchor = 0;
  int degree = 0;  // #real - #ghost, filled in by the rewrite system

  int length() const { return static_cast<int>(letters.size()); }
  bool is_trivial() const { return letters.empty(); }

  friend bool operator==(const LWord& a, const LWord& b) {
    return a.letters == b.letters && a.anchor == b.anchor;
  }
  /// Total length, then degree, then letters.
  friend bool operator<(const LWord& a, const LWord& b) {
    if (a.letters.size() != b.letters.size()) return a.letters.size() < b.letters.size();
    if (a.degree != b.degree) return a.degree < b.degree;
    if (a.letters != b.letters) return a.letters < b.letters;
    return a.anchor < b.anchor;
  }
};

template <class S>
using LElement = std::map<LWord, S>;

template <class S>
void add_term(LElement<S>& x, const LWord& w, const S& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = x.emplace(w, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) x.erase(it);
  }
}

template <class S>
LElement<S> add(LElement<S> a, const LElement<S>& b, const S& c = S(1)) {
  for (const auto& [w, v] : b) add_term(a, w, c * v);
  return a;
}

enum class RedexKind { CK1, CK2 };

struct Redex {
  size_t pos;
  RedexKind kind;
};

class RewriteSystem {
 public:
  explicit RewriteSystem(Quiver q);

  const Quiver& quiver() const { return dq_.base(); }
  const DoubleQuiver& double_quiver() const { return dq_; }
  /// g_v, or -1 when v is a sink.
  int special(int v) const { return special_[static_cast<size_t>(v)]; }

  LWord trivial(int v) const { return {{}, v, 0}; }
  LWord letter(int l) const;
  LWord real_path(const Path& p) const;
  LWord ghost_path(const Path& p) const;  // p*
  /// Builds a word from letters, or nullopt when the letters do not compose.
  std::optional<LWord> make(std::vector<int> letters, int anchor_if_empty = 0) const;
  std::optional<LWord> concat(const LWord& a, const LWord& b) const;

  int source(const LWord& w) const { return w.is_trivial() ? w.anchor : dq_.source(w.letters.back()); }
  int target(const LWord& w) const { return w.is_trivial() ? w.anchor : dq_.target(w.letters.front()); }

  std::vector<Redex> redexes(const LWord& w) const;
  bool is_normal(const LWord& w) const { return redexes(w).empty(); }

  /// One rewrite step at the given redex: terms with integer coefficients.
  std::vector<std::pair<LWord, int>> rewrite(const LWord& w, const Redex& r) const;

  /// Termination measure: (length, number of CK2 redexes).
  std::pair<int, int> measure(const LWord& w) const;

  /// "a*.b.e_v"-style text; "e_v" for trivial words.
  std::string to_string(const LWord& w) const;
  LWord parse_word(std::string_view text) const;

  /// Reverse the word and swap real and ghost letters.
  LWord star(const LWord& w) const;

  /// Normal monomials of degree n and total length <= bound, in LWord order.
  std::vector<LWord> graded_basis(int n, int bound) const;

  /// All composable words of length exactly len.
  std::vector<LWord> all_words(int len) const;

 private:
  DoubleQuiver dq_;
  std::vector<int> special_;
};

// ---------------------------------------------------------------------------
// Normalization.

/// Exhaustive rewriting; the leftmost redex is always chosen.
template <class S>
LElement<S> normalize(const RewriteSystem& rs, const LElement<S>& x) {
  LElement<S> out;
  std::vector<std::pair<LWord, S>> work(x.begin(), x.end());
  while (!work.empty()) {
    auto [w, c] = std::move(work.back());
    work.pop_back();
    const auto red = rs.redexes(w);
    if (red.empty()) {
      add_term(out, w, c);
      continue;
    }
    for (auto& [nw, k] : rs.rewrite(w, red.front())) work.emplace_back(std::move(nw), c * S(static_cast<long>(k)));
  }
  return out;
}

/// Same, but choosing a uniformly random redex at every step.
/// Random composable word of the given length (shorter if it runs into a dead end).
inline LWord random_word(const RewriteSystem& rs, std::mt19937_64& rng, int len) {
  const auto& dq = rs.double_quiver();
  std::uniform_int_distribution<int> any(0, dq.num_letters() - 1);
  std::vector<int> letters{any(rng)};
  while (static_cast<int>(letters.size()) < len) {
    std::vector<int> options;
    for (int l = 0; l < dq.num_letters(); ++l)
      if (dq.target(l) == dq.source(letters.back())) options.push_back(l);
    if (options.empty()) break;
    letters.push_back(options[std::uniform_int_distribution<size_t>(0, options.size() - 1)(rng)]);
  }
  return *rs.make(letters);
}

template <class S>
LElement<S> normalize_random(const RewriteSystem& rs, const LElement<S>& x, std::mt19937_64& rng) {
  LElement<S> out;
  std::vector<std::pair<LWord, S>> work(x.begin(), x.end());
  while (!work.empty()) {
    std::uniform_int_distribution<size_t> pick_item(0, work.size() - 1);
    const size_t i = pick_item(rng);
    std::swap(work[i], work.back());
    auto [w, c] = std::move(work.back());
    work.pop_back();
    const auto red = rs.redexes(w);
    if (red.empty()) {
      add_term(out, w, c);
      continue;
    }
    std::uniform_int_distribution<size_t> pick(0, red.size() - 1);
    for (auto& [nw, k] : rs.rewrite(w, red[pick(rng)])) work.emplace_back(std::move(nw), c * S(static_cast<long>(k)));
  }
  return out;
}

template <class S>
LElement<S> normalize_word(const RewriteSystem& rs, const LWord& w) {
  return normalize<S>(rs, LElement<S>{{w, S(1)}});
}

/// Normal form of the product; non-composable pairs vanish.
template <class S>
LElement<S> multiply(const RewriteSystem& rs, const LElement<S>& x, const LElement<S>& y) {
  LElement<S> raw;
  for (const auto& [a, c] : x)
    for (const auto& [b, d] : y)
      if (auto w = rs.concat(a, b)) add_term(raw, *w, c * d);
  return normalize<S>(rs, raw);
}

template <class S>
LElement<S> involution(const RewriteSystem& rs, const LElement<S>& x) {
  LElement<S> raw;
  for (const auto& [w, c] : x) add_term(raw, rs.star(w), c);
  return normalize<S>(rs, raw);
}

template <class S>
std::string to_string(const RewriteSystem& rs, const LElement<S>& x) {
  if (x.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : x) {
    S v = c;
    if (!first) out += v.sign() < 0 ? " - " : " + ";
    else if (v.sign() < 0) out += "-";
    if (v.sign() < 0) v = -v;
    if (!v.is_one()) out += v.to_string() + "*";
    out += rs.to_string(w);
    first = false;
  }
  return out;
}

/// Degree components present in x.
template <class S>
std::set<int> degrees(const LElement<S>& x) {
  std::set<int> out;
  for (const auto& [w, c] : x) out.insert(w.degree);
  return out;
}

// ---------------------------------------------------------------------------
// Local confluence.

struct ConfluenceFailure {
  std::string word;
  std::string first, second;
};

struct ConfluenceReport {
  int max_length = 0;
  long words_checked = 0;       // composable words with at least two redexes
  long critical_overlaps = 0;   // length-3 words whose two redexes overlap
  long resolved = 0;
  bool measure_decreases = true;
  std::vector<ConfluenceFailure> failures;
  bool confluent() const { return failures.empty() && measure_decreases; }
};

/// For every composable word of length <= max_length with two or more
/// redexes, all one-step reducts must reach the same normal form. Together
/// with the strictly decreasing measure this gives confluence on those words.
template <class S>
ConfluenceReport check_local_confluence(const RewriteSystem& rs, int max_length) {
  ConfluenceReport rep;
  rep.max_length = max_length;
  for (int len = 2; len <= max_length; ++len)
    for (const auto& w : rs.all_words(len)) {
      const auto red = rs.redexes(w);
      for (const auto& r : red)
        for (const auto& [nw, k] : rs.rewrite(w, r))
          if (!(rs.measure(nw) < rs.measure(w))) rep.measure_decreases = false;
      if (red.size() < 2) continue;
      ++rep.words_checked;
      if (len == 3) ++rep.critical_overlaps;
      std::optional<LElement<S>> first;
      size_t first_idx = 0;
      bool ok = true;
      for (size_t i = 0; i < red.size(); ++i) {
        LElement<S> raw;
        for (const auto& [nw, k] : rs.rewrite(w, red[i])) add_term(raw, nw, S(static_cast<long>(k)));
        auto nf = normalize<S>(rs, raw);
        if (!first) {
          first = nf;
          first_idx = i;
        } else if (nf != *first) {
          rep.failures.push_back({rs.to_string(w), "redex at " + std::to_string(red[first_idx].pos),
                                  "redex at " + std::to_string(red[i].pos)});
          ok = false;
        }
      }
      if (ok) ++rep.resolved;
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Stage algebras S_m: degree-0 normal monomials of length <= 2m.

/// Expands a normalized element over a basis; nullopt if a term falls outside.
template <class S>
std::optional<Vector<S>> coordinates(const LElement<S>& x, const std::map<LWord, Index>& index, Index dim) {
  Vector<S> v = Vector<S>::Constant(dim, S(0));
  for (const auto& [w, c] : x) {
    auto it = index.find(w);
    if (it == index.end()) return std::nullopt;
    v(it->second) = c;
  }
  return v;
}

template <class S>
struct MatrixUnitFamily {
  int vertex = 0;
  int length = 0;
  std::vector<Path> paths;                        // paths of the given length ending at vertex
  std::vector<std::vector<Vector<S>>> units;      // units[i][j] = normalize(q_i* q_j)
};

template <class S>
struct StageAlgebra {
  int stage = 0;
  std::vector<LWord> basis;
  std::map<LWord, Index> index;
  FinDimAlgebra<S> algebra;
  std::vector<MatrixUnitFamily<S>> families;
  std::vector<Index> block_sizes;
  bool matrix_units_certified = false;
};

namespace detail {

template <class S>
FinDimAlgebra<S> span_algebra(const RewriteSystem& rs, const std::vector<LWord>& basis,
                              const std::map<LWord, Index>& index, const std::string& what) {
  const Index n = static_cast<Index>(basis.size());
  std::vector<std::string> names;
  for (const auto& w : basis) names.push_back(rs.to_string(w));
  std::vector<SparseVec<S>> prods;
  prods.reserve(static_cast<size_t>(n * n));
  for (const auto& a : basis)
    for (const auto& b : basis) {
      auto c = coordinates<S>(multiply<S>(rs, {{a, S(1)}}, {{b, S(1)}}), index, n);
      if (!c) throw Error(ErrorCode::InvalidStage, what + " is not closed under multiplication");
      prods.push_back(to_sparse<S>(*c));
    }
  Vector<S> unit = Vector<S>::Constant(n, S(0));
  for (int v = 0; v < rs.quiver().num_vertices(); ++v) unit(index.at(rs.trivial(v))) = S(1);
  return FinDimAlgebra<S>(std::move(names), std::move(prods), std::move(unit));
}

}  // namespace detail

/// Builds S_m, certifies a complete system of matrix units (falling back to
/// central idempotents for the block sizes when that fails).
template <class S>
StageAlgebra<S> stage_algebra(const RewriteSystem& rs, int m) {
  if (m < 0) throw Error(ErrorCode::InvalidStage, "stage index must be non-negative");
  StageAlgebra<S> st;
  st.stage = m;
  st.basis = rs.graded_basis(0, 2 * m);
  for (size_t i = 0; i < st.basis.size(); ++i) st.index.emplace(st.basis[i], static_cast<Index>(i));
  st.algebra = detail::span_algebra<S>(rs, st.basis, st.index, "stage algebra");
  const Index n = st.algebra.dim();
  const Quiver& q = rs.quiver();

  // families (v, m), plus (v, l) for l < m at sinks
  for (int v = 0; v < q.num_vertices(); ++v)
    for (int l = 0; l <= m; ++l) {
      const bool sink = q.arrows_from(v).empty();
      if (l != m && !sink) continue;
      MatrixUnitFamily<S> fam;
      fam.vertex = v;
      fam.length = l;
      fam.paths = paths_ending_at(q, l, v);
      if (fam.paths.empty()) continue;
      for (const auto& qi : fam.paths) {
        std::vector<Vector<S>> row;
        for (const auto& pj : fam.paths) {
          auto w = rs.concat(rs.ghost_path(qi), rs.real_path(pj));
          auto c = coordinates<S>(normalize_word<S>(rs, *w), st.index, n);
          if (!c) throw Error(ErrorCode::InvalidStage, "matrix unit outside the stage");
          row.push_back(*c);
        }
        fam.units.push_back(std::move(row));
      }
      st.families.push_back(std::move(fam));
    }

  // certificate: E_ij E_kl = delta_jk E_il, orthogonal across families, sum of E_ii = 1, spanning
  bool ok = true;
  Index total = 0;
  Vector<S> sum = Vector<S>::Constant(n, S(0));
  std::vector<SparseVec<S>> all;
  for (size_t f = 0; f < st.families.size() && ok; ++f) {
    const auto& fa = st.families[f];
    const size_t k = fa.paths.size();
    total += static_cast<Index>(k * k);
    for (size_t i = 0; i < k; ++i) {
      sum += fa.units[i][i];
      for (size_t j = 0; j < k; ++j) all.push_back(to_sparse<S>(fa.units[i][j]));
    }
    for (size_t g = 0; g < st.families.size() && ok; ++g) {
      const auto& fb = st.families[g];
      for (size_t i = 0; i < k && ok; ++i)
        for (size_t j = 0; j < k && ok; ++j)
          for (size_t a = 0; a < fb.paths.size() && ok; ++a)
            for (size_t b = 0; b < fb.paths.size() && ok; ++b) {
              const Vector<S> prod = st.algebra.mul(fa.units[i][j], fb.units[a][b]);
              const Vector<S> expect =
                  (f == g && j == a) ? fa.units[i][b] : Vector<S>(Vector<S>::Constant(n, S(0)));
              if (prod != expect) ok = false;
            }
    }
  }
  ok = ok && total == n && sum == st.algebra.unit() && sparse_rank(all) == n;
  st.matrix_units_certified = ok;
  if (ok) {
    for (const auto& f : st.families) st.block_sizes.push_back(static_cast<Index>(f.paths.size()));
  } else {
    st.block_sizes = block_sizes(st.algebra, central_idempotents(st.algebra));
  }
  return st;
}

/// Columns: images of the basis of S_m in S_{m+1}.
template <class S>
Matrix<S> stage_embedding(const StageAlgebra<S>& from, const StageAlgebra<S>& to) {
  Matrix<S> f = zeros<S>(to.algebra.dim(), from.algebra.dim());
  for (size_t i = 0; i < from.basis.size(); ++i) f(to.index.at(from.basis[i]), static_cast<Index>(i)) = S(1);
  return f;
}

// ---------------------------------------------------------------------------
// Stage bimodules L^d_m: degree-d normal monomials of length <= 2m + |d|.

template <class S>
struct StageBimodule {
  int degree = 0;
  std::vector<LWord> basis;
  std::map<LWord, Index> index;
  FinDimModule<S> left, right;  // over the stage algebra
};

template <class S>
StageBimodule<S> bimodule_stage(const RewriteSystem& rs, const StageAlgebra<S>& st, int d) {
  StageBimodule<S> b;
  b.degree = d;
  b.basis = rs.graded_basis(d, 2 * st.stage + std::abs(d));
  for (size_t i = 0; i < b.basis.size(); ++i) b.index.emplace(b.basis[i], static_cast<Index>(i));
  const Index n = static_cast<Index>(b.basis.size());
  b.left = {Side::Left, n, {}};
  b.right = {Side::Right, n, {}};
  for (const auto& s : st.basis) {
    Matrix<S> l = zeros<S>(n, n), r = zeros<S>(n, n);
    for (Index j = 0; j < n; ++j) {
      auto lc = coordinates<S>(multiply<S>(rs, {{s, S(1)}}, {{b.basis[static_cast<size_t>(j)], S(1)}}), b.index, n);
      auto rc = coordinates<S>(multiply<S>(rs, {{b.basis[static_cast<size_t>(j)], S(1)}}, {{s, S(1)}}), b.index, n);
      if (!lc || !rc) throw Error(ErrorCode::InvalidStage, "stage bimodule is not closed under the stage action");
      l.col(j) = *lc;
      r.col(j) = *rc;
    }
    b.left.action.push_back(std::move(l));
    b.right.action.push_back(std::move(r));
  }
  return b;
}

/// Multiplication x (x) y -> xy in coordinates of the given degree-0 basis;
/// column (i * dim y + j).
template <class S>
Matrix<S> pairing_matrix(const RewriteSystem& rs, const std::map<LWord, Index>& target, const StageBimodule<S>& x,
                         const StageBimodule<S>& y) {
  const Index n = static_cast<Index>(target.size());
  Matrix<S> m = zeros<S>(n, static_cast<Index>(x.basis.size() * y.basis.size()));
  Index col = 0;
  for (const auto& a : x.basis)
    for (const auto& b : y.basis) {
      auto c = coordinates<S>(multiply<S>(rs, {{a, S(1)}}, {{b, S(1)}}), target, n);
      if (!c) throw Error(ErrorCode::InvalidStage, "pairing leaves the target stage");
      m.col(col++) = *c;
    }
  return m;
}

template <class S>
Matrix<S> pairing_matrix(const RewriteSystem& rs, const StageAlgebra<S>& st, const StageBimodule<S>& x,
                         const StageBimodule<S>& y) {
  return pairing_matrix<S>(rs, st.index, x, y);
}

namespace detail {

/// Distinct products xy as columns; monomial products are taken up to scalar.
template <class S>
Matrix<S> product_span(const RewriteSystem& rs, const std::map<LWord, Index>& target, const StageBimodule<S>& x,
                       const StageBimodule<S>& y) {
  const Index n = static_cast<Index>(target.size());
  std::set<LWord> monomials;
  std::set<std::vector<std::pair<Index, std::string>>> seen;
  std::vector<Vector<S>> cols;
  for (const auto& a : x.basis)
    for (const auto& b : y.basis) {
      const auto prod = multiply<S>(rs, {{a, S(1)}}, {{b, S(1)}});
      if (prod.empty()) continue;
      if (prod.size() == 1 && !monomials.insert(prod.begin()->first).second) continue;
      auto c = coordinates<S>(prod, target, n);
      if (!c) throw Error(ErrorCode::InvalidStage, "pairing leaves the target stage");
      if (prod.size() > 1) {
        std::vector<std::pair<Index, std::string>> key;
        for (const auto& [w, v] : prod) key.emplace_back(target.at(w), v.to_string());
        if (!seen.insert(std::move(key)).second) continue;
      }
      cols.push_back(std::move(*c));
    }
  Matrix<S> m = zeros<S>(n, static_cast<Index>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j) m.col(static_cast<Index>(j)) = cols[j];
  return m;
}

}  // namespace detail

/// Degree-0 normal monomials of length <= 2m, indexed.
inline std::map<LWord, Index> stage_index(const RewriteSystem& rs, int m) {
  std::map<LWord, Index> idx;
  for (const auto& w : rs.graded_basis(0, 2 * m)) idx.emplace(w, static_cast<Index>(idx.size()));
  return idx;
}

/// Products of the stage-m slices of L^1 and L^-1 land in S_{m+1}; the
/// pairing is surjective at stage m when their span contains S_m.
struct StrongGradingReport {
  int stage = 0;
  Index stage_dim = 0;
  Index plus_dim = 0, minus_dim = 0;
  Index rank_plus_minus = 0;  // rank of the image of L^1 (x) L^-1 in S_{m+1}
  Index rank_minus_plus = 0;
  bool plus_minus_covers = false;
  bool minus_plus_covers = false;
  bool pass() const { return plus_minus_covers && minus_plus_covers; }
};

template <class S>
StrongGradingReport verify_strongly_graded(const RewriteSystem& rs, int m) {
  if (rs.quiver().has_sink()) throw Error(ErrorCode::HasSink, "strong gradedness needs a quiver without sinks");
  const auto cur = stage_index(rs, m);
  const auto next = stage_index(rs, m + 1);
  StageBimodule<S> plus, minus;
  plus.basis = rs.graded_basis(1, 2 * m + 1);
  minus.basis = rs.graded_basis(-1, 2 * m + 1);
  Matrix<S> incl = zeros<S>(static_cast<Index>(next.size()), static_cast<Index>(cur.size()));
  for (const auto& [w, i] : cur) incl(next.at(w), i) = S(1);
  StrongGradingReport r;
  r.stage = m;
  r.stage_dim = static_cast<Index>(cur.size());
  r.plus_dim = static_cast<Index>(plus.basis.size());
  r.minus_dim = static_cast<Index>(minus.basis.size());
  const Matrix<S> pm = detail::product_span<S>(rs, next, plus, minus);
  const Matrix<S> mp = detail::product_span<S>(rs, next, minus, plus);
  r.rank_plus_minus = rank(pm);
  r.rank_minus_plus = rank(mp);
  r.plus_minus_covers = rank<S>(hstack<S>(pm, incl)) == r.rank_plus_minus;
  r.minus_plus_covers = rank<S>(hstack<S>(mp, incl)) == r.rank_minus_plus;
  return r;
}

// ---------------------------------------------------------------------------
// Explicit inverses for the localizing maps.

struct InverseCheck {
  int vertex = 0;
  bool row_times_column = false;  // sum alpha* alpha = e_i
  bool column_times_row = false;  // (alpha beta*) = diag(e_{t(alpha)})
  bool pass() const { return row_times_column && column_times_row; }
};

struct InvertingReport {
  std::vector<InverseCheck> iota;   // vertices of Q that are not sinks, checked in L(Q)
  std::vector<InverseCheck> kappa;  // vertices of Q that are not sources, checked in L(Q^op)
  bool pass() const {
    for (const auto& c : iota)
      if (!c.pass()) return false;
    for (const auto& c : kappa)
      if (!c.pass()) return false;
    return true;
  }
};

/// The column C = (alpha)_{s(alpha)=i} against the row R = (alpha*): R C = e_i and C R = diag(e_{t(alpha)}).
template <class S>
InverseCheck check_vertex_inverse(const RewriteSystem& rs, int i) {
  const Quiver& q = rs.quiver();
  const auto arrows = q.arrows_from(i);
  InverseCheck c;
  c.vertex = i;
  LElement<S> rc;
  for (int a : arrows) {
    auto w = rs.concat(rs.letter(rs.double_quiver().ghost(a)), rs.letter(a));
    rc = add(rc, normalize_word<S>(rs, *w));
  }
  c.row_times_column = rc == LElement<S>{{rs.trivial(i), S(1)}};
  c.column_times_row = true;
  for (int a : arrows)
    for (int b : arrows) {
      LElement<S> entry;
      if (auto w = rs.concat(rs.letter(a), rs.letter(rs.double_quiver().ghost(b)))) entry = normalize_word<S>(rs, *w);
      const LElement<S> expect =
          a == b ? LElement<S>{{rs.trivial(q.arrow(a).target), S(1)}} : LElement<S>{};
      if (entry != expect) c.column_times_row = false;
    }
  return c;
}

template <class S>
InvertingReport verify_inverting(const Quiver& q) {
  InvertingReport rep;
  RewriteSystem rs(q);
  for (int i = 0; i < q.num_vertices(); ++i)
    if (!q.arrows_from(i).empty()) rep.iota.push_back(check_vertex_inverse<S>(rs, i));
  RewriteSystem op(opposite(q));
  for (int i = 0; i < q.num_vertices(); ++i)
    if (!q.arrows_to(i).empty()) rep.kappa.push_back(check_vertex_inverse<S>(op, i));
  return rep;
}

struct IotaInjectivity {
  int bound = 0;
  Index paths = 0;
  Index independent = 0;
  bool degrees_match = true;  // image of kQ_n lies in degree n
  bool pass() const { return paths == independent && degrees_match; }
};

template <class S>
IotaInjectivity verify_iota_injective(const RewriteSystem& rs, int bound) {
  IotaInjectivity r;
  r.bound = bound;
  std::map<LWord, Index> idx;
  EchelonBasis<S> eb;
  for (int l = 0; l <= bound; ++l)
    for (const auto& p : enumerate_paths(rs.quiver(), l)) {
      ++r.paths;
      const auto img = normalize_word<S>(rs, rs.real_path(p));
      std::vector<std::pair<Index, S>> e;
      for (const auto& [w, c] : img) {
        if (w.degree != l) r.degrees_match = false;
        auto [it, fresh] = idx.emplace(w, static_cast<Index>(idx.size()));
        e.emplace_back(it->second, c);
      }
      if (eb.insert(make_sparse<S>(std::move(e)))) ++r.independent;
    }
  return r;
}

}  // namespace qhw
