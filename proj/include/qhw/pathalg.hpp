#pragma once

// The path algebra kQ with its length grading, the radical square zero
// algebra A = kQ/J^2, and homogeneous maps between graded free right
// kQ-modules of the form e_i kQ(d).

#include "qhw/algebra.hpp"
#include "qhw/quiver.hpp"
#include "qhw/sparse.hpp"

#include <map>
#include <memory>
#include <optional>
#include <sstream>

namespace qhw {

template <class S>
class PathElement {
 public:
  using QuiverPtr = std::shared_ptr<const Quiver>;

  PathElement() = default;
  explicit PathElement(QuiverPtr q) : quiver_(std::move(q)) {}
  static PathElement path(QuiverPtr q, Path p, S c = S(1)) {
    PathElement x(std::move(q));
    if (!c.is_zero()) x.terms_.emplace(std::move(p), std::move(c));
    return x;
  }

  /// Parses "2*a.b - c + 1/2*e_1".
  static PathElement parse(QuiverPtr q, std::string_view text) {
    PathElement out(q);
    std::string s;
    for (char ch : text)
      if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw SyntaxError(1, 1, "empty path expression");
    size_t pos = 0;
    while (pos < s.size()) {
      S sign(1);
      if (s[pos] == '+' || s[pos] == '-') {
        if (s[pos] == '-') sign = S(-1);
        ++pos;
      } else if (pos != 0) {
        throw SyntaxError(1, static_cast<int>(pos) + 1, "expected + or -");
      }
      size_t end = pos;
      while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
      std::string term = s.substr(pos, end - pos);
      if (term.empty()) throw SyntaxError(1, static_cast<int>(pos) + 1, "missing term");
      S coeff(1);
      if (auto star = term.find('*'); star != std::string::npos) {
        try {
          coeff = S::parse(term.substr(0, star));
        } catch (const std::exception&) {
          throw SyntaxError(1, static_cast<int>(pos) + 1, "bad coefficient '" + term.substr(0, star) + "'");
        }
        term = term.substr(star + 1);
      }
      out += path(q, parse_path(*q, term), sign * coeff);
      pos = end;
    }
    return out;
  }

  const QuiverPtr& quiver() const { return quiver_; }
  const std::map<Path, S>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  S coefficient(const Path& p) const {
    auto it = terms_.find(p);
    return it == terms_.end() ? S(0) : it->second;
  }

  /// Degree-n component (paths of length n).
  PathElement component(int n) const {
    PathElement out(quiver_);
    for (const auto& [p, c] : terms_)
      if (p.length() == n) out.terms_.emplace(p, c);
    return out;
  }

  /// The common length of all terms, if homogeneous and nonzero.
  std::optional<int> degree() const {
    if (terms_.empty()) return std::nullopt;
    const int d = terms_.begin()->first.length();
    for (const auto& [p, c] : terms_)
      if (p.length() != d) return std::nullopt;
    return d;
  }

  PathElement& operator+=(const PathElement& o) {
    check_same(o);
    if (!quiver_) quiver_ = o.quiver_;
    for (const auto& [p, c] : o.terms_) {
      auto [it, fresh] = terms_.emplace(p, c);
      if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
      }
    }
    return *this;
  }
  PathElement& operator*=(const S& c) {
    if (c.is_zero()) terms_.clear();
    for (auto& [p, v] : terms_) v *= c;
    return *this;
  }
  friend PathElement operator+(PathElement a, const PathElement& b) { return a += b; }
  friend PathElement operator-(PathElement a, const PathElement& b) { return a += S(-1) * b; }
  friend PathElement operator*(const S& c, PathElement a) { return a *= c; }
  friend bool operator==(const PathElement& a, const PathElement& b) { return a.terms_ == b.terms_; }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [p, c] : terms_) {
      S v = c;
      if (!first) os << (v.sign() < 0 ? " - " : " + ");
      else if (v.sign() < 0) os << "-";
      if (v.sign() < 0) v = -v;
      if (!v.is_one()) os << v.to_string() << "*";
      os << p.to_string(*quiver_);
      first = false;
    }
    return os.str();
  }

  void check_same(const PathElement& o) const {
    if (quiver_ && o.quiver_ && quiver_ != o.quiver_ && !(*quiver_ == *o.quiver_))
      throw Error(ErrorCode::QuiverMismatch, "elements live over different quivers");
  }

 private:
  QuiverPtr quiver_;
  std::map<Path, S> terms_;
};

/// Bilinear extension of concatenation; non-composable products vanish.
template <class S>
PathElement<S> multiply(const PathElement<S>& x, const PathElement<S>& y) {
  x.check_same(y);
  PathElement<S> out(x.quiver() ? x.quiver() : y.quiver());
  for (const auto& [p, c] : x.terms())
    for (const auto& [r, d] : y.terms())
      if (composable(*out.quiver(), p, r)) out += PathElement<S>::path(out.quiver(), concat(*out.quiver(), p, r), c * d);
  return out;
}

// ---------------------------------------------------------------------------
// A = kQ/J^2

template <class S>
struct Rs0Algebra {
  Quiver quiver;
  /// Basis: e_v for each vertex, then each arrow.
  FinDimAlgebra<S> algebra;
  /// Left modules: P_i = A e_i, S_i its top, I_i = D(e_i A).
  std::vector<FinDimModule<S>> projectives, simples, injectives;

  Index vertex_basis(int v) const { return v; }
  Index arrow_basis(int a) const { return quiver.num_vertices() + a; }
  /// Element (x, y) with x in kQ_0 and y in kQ_1.
  Vector<S> element(const Vector<S>& x, const Vector<S>& y) const {
    Vector<S> v(algebra.dim());
    v << x, y;
    return v;
  }
};

template <class S>
Rs0Algebra<S> build_rs0(const Quiver& q) {
  const int nv = q.num_vertices(), na = q.num_arrows();
  const Index n = nv + na;
  std::vector<std::string> names;
  for (int v = 0; v < nv; ++v) names.push_back("e_" + q.vertex_name(v));
  for (int a = 0; a < na; ++a) names.push_back(q.arrow(a).name);
  // basis element b -> (kind, index)
  auto prod = [&](Index i, Index j) {
    Vector<S> out = Vector<S>::Constant(n, S(0));
    const bool iv = i < nv, jv = j < nv;
    if (iv && jv) {
      if (i == j) out(i) = S(1);
    } else if (iv) {
      if (q.arrow(static_cast<int>(j - nv)).target == i) out(j) = S(1);
    } else if (jv) {
      if (q.arrow(static_cast<int>(i - nv)).source == j) out(i) = S(1);
    }
    return out;
  };
  Vector<S> unit = Vector<S>::Constant(n, S(0));
  for (int v = 0; v < nv; ++v) unit(v) = S(1);
  Rs0Algebra<S> r{q, algebra_from_products<S>(names, prod, unit), {}, {}, {}};

  const auto regular = regular_module(r.algebra, Side::Left);
  const auto right_regular = regular_module(r.algebra, Side::Right);
  for (int i = 0; i < nv; ++i) {
    // A e_i: e_i and the arrows starting at i
    std::vector<Index> pb{i};
    for (int a : q.arrows_from(i)) pb.push_back(nv + a);
    Matrix<S> pbasis = zeros<S>(n, static_cast<Index>(pb.size()));
    for (size_t k = 0; k < pb.size(); ++k) pbasis(pb[k], static_cast<Index>(k)) = S(1);
    r.projectives.push_back(restrict_to(regular, pbasis));

    FinDimModule<S> simple{Side::Left, 1, {}};
    for (Index b = 0; b < n; ++b) simple.action.push_back(Matrix<S>::Constant(1, 1, S(b == i ? 1 : 0)));
    r.simples.push_back(std::move(simple));

    // e_i A: e_i and the arrows ending at i; the dual carries the transposed action
    std::vector<Index> ib{i};
    for (int a : q.arrows_to(i)) ib.push_back(nv + a);
    Matrix<S> ibasis = zeros<S>(n, static_cast<Index>(ib.size()));
    for (size_t k = 0; k < ib.size(); ++k) ibasis(ib[k], static_cast<Index>(k)) = S(1);
    auto eia = restrict_to(right_regular, ibasis);
    FinDimModule<S> inj{Side::Left, eia.dim, {}};
    for (const auto& m : eia.action) inj.action.push_back(m.transpose());
    r.injectives.push_back(std::move(inj));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Graded free right kQ-modules and homogeneous maps between them.

struct GradedSummand {
  int vertex = 0;
  int shift = 0;  // e_v kQ(shift), whose degree-n part is spanned by paths of length n + shift ending at v
  friend bool operator==(const GradedSummand&, const GradedSummand&) = default;
};

/// x in the c-th source summand maps to sum_r entries[r][c] * x.
template <class S>
struct GradedFreeMap {
  std::shared_ptr<const Quiver> quiver;
  std::vector<GradedSummand> source, target;
  std::vector<std::vector<PathElement<S>>> entries;  // [row][col]

  const PathElement<S>& entry(size_t r, size_t c) const { return entries[r][c]; }

  /// Throws NotComposable if an entry has the wrong endpoints or degree.
  void validate() const {
    if (entries.size() != target.size()) throw Error(ErrorCode::DimensionMismatch, "row count");
    for (size_t r = 0; r < target.size(); ++r) {
      if (entries[r].size() != source.size()) throw Error(ErrorCode::DimensionMismatch, "column count");
      for (size_t c = 0; c < source.size(); ++c)
        for (const auto& [p, v] : entries[r][c].terms()) {
          if (p.target(*quiver) != target[r].vertex || p.source(*quiver) != source[c].vertex ||
              p.length() != target[r].shift - source[c].shift)
            throw Error(ErrorCode::NotComposable, "entry " + p.to_string(*quiver) + " is not homogeneous for its slot");
        }
    }
  }
};

/// Basis of the degree-n part of a graded free module, one block per summand.
inline std::vector<std::vector<Path>> graded_basis(const Quiver& q, const std::vector<GradedSummand>& sums, int n) {
  std::vector<std::vector<Path>> out;
  for (const auto& s : sums) {
    const int len = n + s.shift;
    out.push_back(len < 0 ? std::vector<Path>{} : paths_ending_at(q, len, s.vertex));
  }
  return out;
}

inline Index graded_dim(const Quiver& q, const std::vector<GradedSummand>& sums, int n) {
  Index d = 0;
  for (const auto& b : graded_basis(q, sums, n)) d += static_cast<Index>(b.size());
  return d;
}

/// Matrix of the map in degree n, with respect to graded_basis.
template <class S>
Matrix<S> degree_matrix(const GradedFreeMap<S>& f, int n) {
  const Quiver& q = *f.quiver;
  const auto sb = graded_basis(q, f.source, n);
  const auto tb = graded_basis(q, f.target, n);
  std::vector<std::map<Path, Index>> tindex(tb.size());
  Index rows = 0;
  for (size_t r = 0; r < tb.size(); ++r)
    for (const auto& p : tb[r]) tindex[r][p] = rows++;
  Index cols = 0;
  for (const auto& b : sb) cols += static_cast<Index>(b.size());
  Matrix<S> m = zeros<S>(rows, cols);
  Index col = 0;
  for (size_t c = 0; c < sb.size(); ++c)
    for (const auto& x : sb[c]) {
      for (size_t r = 0; r < tb.size(); ++r)
        for (const auto& [p, v] : f.entries[r][c].terms()) {
          if (!composable(q, p, x)) continue;
          m(tindex[r].at(concat(q, p, x)), col) += v;
        }
      ++col;
    }
  return m;
}

/// p -> sum_{s(alpha)=i} alpha p, from e_i kQ(-1) to the sum of e_{t(alpha)} kQ.
template <class S>
GradedFreeMap<S> eta_map(std::shared_ptr<const Quiver> q, int i) {
  const auto from = q->arrows_from(i);
  if (from.empty()) throw Error(ErrorCode::VertexIsSink, "vertex " + q->vertex_name(i) + " is a sink");
  GradedFreeMap<S> f{q, {{i, -1}}, {}, {}};
  for (int a : from) {
    f.target.push_back({q->arrow(a).target, 0});
    f.entries.push_back({PathElement<S>::path(q, Path::arrow(*q, a))});
  }
  return f;
}

/// p in e_{s(alpha)} kQ(-1) -> alpha p in e_i kQ; empty when i is a source.
template <class S>
GradedFreeMap<S> xi_map(std::shared_ptr<const Quiver> q, int i) {
  GradedFreeMap<S> f{q, {}, {{i, 0}}, {{}}};
  for (int a : q->arrows_to(i)) {
    f.source.push_back({q->arrow(a).source, -1});
    f.entries[0].push_back(PathElement<S>::path(q, Path::arrow(*q, a)));
  }
  return f;
}

/// Shifts source and target by k: f(k).
template <class S>
GradedFreeMap<S> shift_map(GradedFreeMap<S> f, int k) {
  for (auto& s : f.source) s.shift += k;
  for (auto& s : f.target) s.shift += k;
  return f;
}

/// The transpose of a map over Q viewed as a map over the opposite quiver
/// (reversing paths), with negated shifts.
template <class S>
GradedFreeMap<S> transpose_dual(const GradedFreeMap<S>& f, std::shared_ptr<const Quiver> op) {
  GradedFreeMap<S> g{op, {}, {}, {}};
  for (const auto& t : f.target) g.source.push_back({t.vertex, -t.shift});
  for (const auto& s : f.source) g.target.push_back({s.vertex, -s.shift});
  g.entries.assign(f.source.size(), std::vector<PathElement<S>>(f.target.size(), PathElement<S>(op)));
  for (size_t r = 0; r < f.target.size(); ++r)
    for (size_t c = 0; c < f.source.size(); ++c)
      for (const auto& [p, v] : f.entries[r][c].terms()) {
        Path rp{std::vector<int>(p.word.rbegin(), p.word.rend()), p.anchor};
        if (!rp.is_trivial()) rp.anchor = op->arrow(rp.word.front()).target;
        g.entries[c][r] += PathElement<S>::path(op, rp, v);
      }
  return g;
}

template <class S>
bool same_map(const GradedFreeMap<S>& a, const GradedFreeMap<S>& b) {
  return *a.quiver == *b.quiver && a.source == b.source && a.target == b.target && a.entries == b.entries;
}

struct WindowDegreeReport {
  int degree = 0;
  bool first_injective = false;
  bool exact = false;          // exact at every middle term
  Index cokernel_dim = 0;      // cokernel of the last map
};

struct ExactnessReport {
  std::vector<WindowDegreeReport> degrees;
  bool all_exact() const {
    for (const auto& d : degrees)
      if (!d.first_injective || !d.exact) return false;
    return true;
  }
};

/// Checks 0 -> F_0 -> F_1 -> ... -> F_k -> C -> 0 in degrees lo..hi, where
/// C is the cokernel of the last map, built as an explicit projection.
template <class S>
ExactnessReport verify_exact_window(const std::vector<GradedFreeMap<S>>& maps, int lo, int hi) {
  if (maps.empty()) throw Error(ErrorCode::DimensionMismatch, "no maps given");
  for (const auto& f : maps) f.validate();
  for (size_t k = 0; k + 1 < maps.size(); ++k)
    if (!(maps[k].target == maps[k + 1].source))
      throw Error(ErrorCode::NotComposable, "target of map " + std::to_string(k) + " is not the next source");
  ExactnessReport rep;
  for (int n = lo; n <= hi; ++n) {
    WindowDegreeReport d{n, false, true, 0};
    std::vector<Matrix<S>> ms;
    for (const auto& f : maps) ms.push_back(degree_matrix(f, n));
    d.first_injective = rank(ms[0]) == ms[0].cols();
    for (size_t k = 0; k + 1 < ms.size(); ++k) {
      if (!is_zero(mul<S>(ms[k + 1], ms[k])) ||
          rank(ms[k]) != ms[k + 1].cols() - rank(ms[k + 1]))
        d.exact = false;
    }
    // explicit cokernel projection pi: ker pi = im of the last map
    const Matrix<S>& last = ms.back();
    const Matrix<S> im = image_basis(last);
    const Matrix<S> comp = complement_columns<S>(im, identity<S>(last.rows()));
    const Matrix<S> pi = inverse<S>(hstack<S>(im, comp))->bottomRows(comp.cols());
    if (!is_zero(mul<S>(pi, last)) || last.rows() - rank(pi) != rank(last)) d.exact = false;
    d.cokernel_dim = pi.rows();
    rep.degrees.push_back(d);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Graded Hom and Ext^1 out of a two-term free presentation.

/// A graded right kQ-module known in degrees lo..hi: dims[n - lo][v] is
/// dim N^n e_v, and act(n, a) maps N^n e_{t(a)} to N^{n+1} e_{s(a)} (y -> y a).
template <class S>
struct GradedWindowModule {
  int lo = 0, hi = -1;
  std::vector<std::vector<Index>> dims;
  std::map<std::pair<int, int>, Matrix<S>> arrow_action;

  bool in_window(int n) const { return n >= lo && n <= hi; }
  Index dim(int n, int v) const {
    return in_window(n) ? dims[static_cast<size_t>(n - lo)][static_cast<size_t>(v)] : 0;
  }
  Matrix<S> act(const Quiver& q, int n, int a) const {
    auto it = arrow_action.find({n, a});
    if (it != arrow_action.end()) return it->second;
    return zeros<S>(dim(n + 1, q.arrow(a).source), dim(n, q.arrow(a).target));
  }
};

/// The graded simple at vertex i concentrated in degree 0, known on [lo, hi].
template <class S>
GradedWindowModule<S> graded_simple(const Quiver& q, int i, int lo, int hi) {
  GradedWindowModule<S> m{lo, hi, {}, {}};
  for (int n = lo; n <= hi; ++n) {
    std::vector<Index> d(static_cast<size_t>(q.num_vertices()), 0);
    if (n == 0) d[static_cast<size_t>(i)] = 1;
    m.dims.push_back(d);
  }
  return m;
}

struct HomExt {
  Index hom = 0;
  Index ext1 = 0;
};

/// dim Hom_Gr(M, N(t)) and dim Ext^1_Gr(M, N(t)) for M = coker(f), f an
/// injective map of graded free right modules.
template <class S>
HomExt graded_hom_ext(const GradedFreeMap<S>& f, const GradedWindowModule<S>& n, int twist) {
  f.validate();
  const Quiver& q = *f.quiver;
  // Hom(e_v kQ(d), N(t)) = N^{t-d} e_v
  auto need = [&](const GradedSummand& s) {
    const int deg = twist - s.shift;
    if (!n.in_window(deg))
      throw Error(ErrorCode::WindowTooSmall, "degree " + std::to_string(deg) + " of the module is outside its window");
    return deg;
  };
  std::vector<Index> roff{0}, coff{0};
  for (const auto& s : f.target) roff.push_back(roff.back() + n.dim(need(s), s.vertex));
  for (const auto& s : f.source) coff.push_back(coff.back() + n.dim(need(s), s.vertex));
  // (y_r) -> (sum_r y_r . entry(r, c))_c
  Matrix<S> hom_f = zeros<S>(coff.back(), roff.back());
  for (size_t r = 0; r < f.target.size(); ++r)
    for (size_t c = 0; c < f.source.size(); ++c)
      for (const auto& [p, v] : f.entries[r][c].terms()) {
        int deg = twist - f.target[r].shift;
        Matrix<S> m = identity<S>(n.dim(deg, f.target[r].vertex));
        // right action: the last written arrow acts last, word[0] first
        for (size_t k = 0; k < p.word.size(); ++k) {
          m = mul<S>(n.act(q, deg, p.word[k]), m);
          ++deg;
        }
        hom_f.block(coff[c], roff[r], m.rows(), m.cols()) += v * m;
      }
  const Index rk = rank(hom_f);
  return {roff.back() - rk, coff.back() - rk};
}

}  // namespace qhw
