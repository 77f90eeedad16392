#pragma once

// Graded K0 of a Leavitt path algebra as a stage system Z^{Q0} -> Z^{Q0} -> ...,
// the shift automorphism, and comparison of two quivers by computable invariants.

#include "qhw/leavitt.hpp"
#include "qhw/smith.hpp"
#include "qhw/trivext.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace qhw {

/// T(w, v) = number of arrows v -> w, i.e. the transpose of the usual adjacency matrix.
inline IntMatrix transition_matrix(const Quiver& q) { return adjacency_matrix(q); }

inline IntMatrix int_power(const IntMatrix& m, int k) {
  IntMatrix out = int_identity(m.rows());
  for (int i = 0; i < k; ++i) out = int_mul(out, m);
  return out;
}

inline Integer int_trace(const IntMatrix& m) {
  Integer t(0);
  for (Index i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

/// Rank of T^N for N = size: the rank of the direct limit.
inline Index eventual_rank(const IntMatrix& t) {
  return rank<Rational>(to_field<Rational>(int_power(t, static_cast<int>(t.rows()))));
}

/// Order of t on its eventual range, nullopt if infinite (or above the bound).
inline std::optional<long> shift_order(const IntMatrix& t, long bound = 2520) {
  const Matrix<Rational> tf = to_field<Rational>(t);
  const Matrix<Rational> e = image_basis<Rational>(to_field<Rational>(int_power(t, static_cast<int>(t.rows()))));
  const Index r = e.cols();
  if (r == 0) return 1;
  const auto restricted = solve<Rational>(e, mul<Rational>(tf, e));
  if (!restricted) throw Error(ErrorCode::InvariantViolated, "eventual range is not invariant");
  const Matrix<Rational> id = identity<Rational>(r);
  Matrix<Rational> p = *restricted;
  for (long k = 1; k <= bound; ++k) {
    if (p == id) return k;
    // a finite-order matrix has all eigenvalues on the unit circle
    Rational tr(0);
    for (Index i = 0; i < r; ++i) tr += p(i, i);
    if (abs(tr.numerator()) > Integer(static_cast<long>(r)) * tr.denominator()) return std::nullopt;
    p = mul<Rational>(p, *restricted);
  }
  return std::nullopt;
}

/// Cycle lengths (sorted) when t permutes the vertex classes, empty otherwise.
inline std::vector<long> permutation_orbits(const IntMatrix& t) {
  const Index n = t.rows();
  std::vector<Index> image(static_cast<size_t>(n), -1);
  for (Index v = 0; v < n; ++v) {
    for (Index w = 0; w < n; ++w) {
      if (t(w, v) == Integer(0)) continue;
      if (!(t(w, v) == Integer(1)) || image[static_cast<size_t>(v)] >= 0) return {};
      image[static_cast<size_t>(v)] = w;
    }
    if (image[static_cast<size_t>(v)] < 0) return {};
  }
  std::vector<bool> hit(static_cast<size_t>(n), false);
  for (Index w : image) {
    if (hit[static_cast<size_t>(w)]) return {};
    hit[static_cast<size_t>(w)] = true;
  }
  std::vector<long> out;
  std::vector<bool> seen(static_cast<size_t>(n), false);
  for (Index v = 0; v < n; ++v) {
    long len = 0;
    for (Index x = v; !seen[static_cast<size_t>(x)]; x = image[static_cast<size_t>(x)]) {
      seen[static_cast<size_t>(x)] = true;
      ++len;
    }
    if (len) out.push_back(len);
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct GradedK0Stage {
  int stage = 0;
  Index rank = 0;                      // lattice Z^{Q0}
  IntMatrix transition;                // stage m -> m+1
  IntMatrix shift;                     // degree shift on the stage lattice
  std::vector<Integer> order_unit;     // class of the stage algebra: block sizes per vertex
  std::optional<bool> blocks_match;    // against the matrix units of the stage algebra
  std::optional<bool> shift_model_match;  // against the semisimple singularity model
  bool shift_commutes = false;
};

struct K0Options {
  Index max_stage_dim = 64;  // stage algebras above this are not rebuilt for the cross-check
  bool check_shift_model = true;
};

namespace detail {

// Is there a permutation p with a(p(i), p(j)) = b(i, j)?
inline bool permutation_conjugate(const std::vector<std::vector<long>>& a, const IntMatrix& b) {
  const size_t n = a.size();
  if (static_cast<Index>(n) != b.rows() || n > 8) return false;
  std::vector<size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    bool ok = true;
    for (size_t i = 0; i < n && ok; ++i)
      for (size_t j = 0; j < n && ok; ++j)
        ok = b(static_cast<Index>(i), static_cast<Index>(j)) == Integer(a[p[i]][p[j]]);
    if (ok) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

}  // namespace detail

/// Stages 0..depth-1 of the graded K0 system; the stage lattice is indexed by vertices.
inline std::vector<GradedK0Stage> k0gr_stages(const Quiver& q, int depth, const K0Options& opt = {}) {
  if (q.has_sink()) throw Error(ErrorCode::HasSink, "graded K0 stages need a quiver without sinks");
  if (depth < 1) throw Error(ErrorCode::InvalidStage, "depth must be at least 1");
  const IntMatrix t = transition_matrix(q);
  const Index n = t.rows();
  const RewriteSystem rs(q);

  // the shift model is a single computation; it only exists when the stage is closed
  std::optional<bool> model;
  if (opt.check_shift_model && n <= 8) {
    try {
      const auto sm = singularity_model(stage_from_leavitt<Rational>(q, 0, StageSide::Minus, 1));
      model = detail::permutation_conjugate(sm.translation, t);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::StageNotStronglyGraded) throw;
    }
  }

  std::vector<GradedK0Stage> out;
  for (int m = 0; m < depth; ++m) {
    GradedK0Stage s;
    s.stage = m;
    s.rank = n;
    s.transition = t;
    s.shift = t;
    s.shift_commutes = int_mul(s.shift, s.transition) == int_mul(s.transition, s.shift);
    Index dim = 0;
    for (int v = 0; v < n; ++v) {
      const auto c = static_cast<long>(paths_ending_at(q, m, v).size());
      s.order_unit.emplace_back(c);
      dim += c * c;
    }
    if (dim <= opt.max_stage_dim) {
      const auto st = stage_algebra<Rational>(rs, m);
      bool ok = st.matrix_units_certified && st.algebra.dim() == dim;
      for (const auto& f : st.families)
        ok = ok && f.length == m &&
             Integer(static_cast<long>(f.paths.size())) == s.order_unit[static_cast<size_t>(f.vertex)];
      s.blocks_match = ok;
    }
    s.shift_model_match = model;
    out.push_back(std::move(s));
  }
  return out;
}

/// Invariants of one quiver at one stage k. Everything except the transition
/// cokernel is an invariant of the dimension group with its shift.
struct StageInvariants {
  int stage = 0;
  Index lattice_rank = 0;
  Index eventual_rank = 0;
  CokernelInfo transition_cokernel;  // coker T^k, reported only
  CokernelInfo bowen_franks;         // coker (I - T^k)
  Integer trace;                     // tr T^k
  std::optional<long> shift_order;
  std::vector<long> orbits;          // cycle type of T when it permutes vertices
};

inline std::vector<StageInvariants> stage_invariants(const Quiver& q, int depth) {
  if (q.has_sink()) throw Error(ErrorCode::HasSink, "graded K0 stages need a quiver without sinks");
  if (depth < 1) throw Error(ErrorCode::InvalidStage, "depth must be at least 1");
  const IntMatrix t = transition_matrix(q);
  const Index er = eventual_rank(t);
  const auto order = shift_order(t);
  const auto orbits = permutation_orbits(t);
  std::vector<StageInvariants> out;
  IntMatrix p = int_identity(t.rows());
  for (int k = 1; k <= depth; ++k) {
    p = int_mul(p, t);
    StageInvariants s;
    s.stage = k;
    s.lattice_rank = t.rows();
    s.eventual_rank = er;
    s.transition_cokernel = cokernel(p);
    IntMatrix d = int_identity(t.rows());
    for (Index i = 0; i < d.rows(); ++i)
      for (Index j = 0; j < d.cols(); ++j) d(i, j) -= p(i, j);
    s.bowen_franks = cokernel(d);
    s.trace = int_trace(p);
    s.shift_order = order;
    s.orbits = orbits;
    out.push_back(std::move(s));
  }
  return out;
}

/// Names of the invariants that differ at this stage.
inline std::vector<std::string> mismatches(const StageInvariants& a, const StageInvariants& b) {
  std::vector<std::string> out;
  if (a.eventual_rank != b.eventual_rank) out.push_back("rank");
  if (a.trace != b.trace) out.push_back("trace");
  if (a.bowen_franks.to_string() != b.bowen_franks.to_string()) out.push_back("bowen-franks");
  if (a.shift_order != b.shift_order) out.push_back("shift-order");
  return out;
}

enum class Verdict { Distinguished, NotDistinguished };

struct ComparisonVerdict {
  int depth = 0;
  std::vector<StageInvariants> first, second;
  std::optional<int> distinguished_at;   // first stage with a mismatch
  std::vector<std::string> reasons;      // mismatches at that stage
  Verdict verdict = Verdict::NotDistinguished;
  /// Verdict using only stages 1..m; never reverts once distinguished.
  Verdict at_stage(int m) const {
    return distinguished_at && *distinguished_at <= m ? Verdict::Distinguished : Verdict::NotDistinguished;
  }
  std::string label() const {
    return verdict == Verdict::Distinguished ? "distinguished"
                                             : "not-distinguished-up-to-stage-" + std::to_string(depth);
  }
};

inline ComparisonVerdict compare_quivers(const Quiver& q1, const Quiver& q2, int depth) {
  ComparisonVerdict v;
  v.depth = depth;
  v.first = stage_invariants(q1, depth);
  v.second = stage_invariants(q2, depth);
  for (int k = 0; k < depth; ++k) {
    auto diff = mismatches(v.first[static_cast<size_t>(k)], v.second[static_cast<size_t>(k)]);
    if (!diff.empty()) {
      v.distinguished_at = k + 1;
      v.reasons = std::move(diff);
      v.verdict = Verdict::Distinguished;
      break;
    }
  }
  return v;
}

}  // namespace qhw
