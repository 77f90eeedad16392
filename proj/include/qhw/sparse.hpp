#pragma once

// Sparse vectors and an incremental echelon basis, for ranks of matrices
// too large to reduce densely (Koszul End complexes reach ~10^4 columns).

#include "qhw/linalg.hpp"

#include <map>
#include <utility>
#include <vector>

namespace qhw {

/// Sorted (index, nonzero value) pairs.
template <class S>
using SparseVec = std::vector<std::pair<Index, S>>;

template <class S>
SparseVec<S> axpy(const SparseVec<S>& x, const S& c, const SparseVec<S>& y) {
  // returns x + c*y
  SparseVec<S> out;
  out.reserve(x.size() + y.size());
  size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      out.push_back(x[i++]);
    } else if (i == x.size() || y[j].first < x[i].first) {
      out.emplace_back(y[j].first, c * y[j].second);
      ++j;
    } else {
      S v = x[i].second + c * y[j].second;
      if (!v.is_zero()) out.emplace_back(x[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

/// Builds a sorted sparse vector from unsorted entries, summing duplicates.
template <class S>
SparseVec<S> make_sparse(std::vector<std::pair<Index, S>> entries) {
  std::map<Index, S> acc;
  for (auto& [i, v] : entries) {
    auto [it, fresh] = acc.try_emplace(i, v);
    if (!fresh) it->second += v;
  }
  SparseVec<S> out;
  for (auto& [i, v] : acc)
    if (!v.is_zero()) out.emplace_back(i, v);
  return out;
}

/// Rows in echelon form keyed by leading index; leading coefficients are 1.
template <class S>
class EchelonBasis {
 public:
  /// Reduces v against the basis; the result has no entry at any pivot.
  SparseVec<S> reduce(SparseVec<S> v) const {
    size_t pos = 0;
    while (pos < v.size()) {
      auto it = rows_.find(v[pos].first);
      if (it == rows_.end()) {
        ++pos;
        continue;
      }
      v = axpy(v, S(-v[pos].second), it->second);
    }
    return v;
  }

  /// Adds v to the span; returns true if the rank grew.
  bool insert(SparseVec<S> v) {
    v = reduce(std::move(v));
    if (v.empty()) return false;
    const S inv = S(1) / v.front().second;
    for (auto& e : v) e.second *= inv;
    const Index lead = v.front().first;
    rows_.emplace(lead, std::move(v));
    return true;
  }

  bool contains(const SparseVec<S>& v) const { return reduce(v).empty(); }
  Index rank() const { return static_cast<Index>(rows_.size()); }

 private:
  std::map<Index, SparseVec<S>> rows_;
};

/// Rank of the span of the given vectors.
template <class S>
Index sparse_rank(const std::vector<SparseVec<S>>& vectors) {
  EchelonBasis<S> b;
  for (const auto& v : vectors) b.insert(v);
  return b.rank();
}

template <class S>
SparseVec<S> to_sparse(const Vector<S>& v) {
  SparseVec<S> out;
  for (Index i = 0; i < v.size(); ++i)
    if (!v(i).is_zero()) out.emplace_back(i, v(i));
  return out;
}

}  // namespace qhw
