#pragma once

// Bounded cochain complexes of finite-dimensional vector spaces.

#include "qhw/error.hpp"
#include "qhw/linalg.hpp"

#include <string>
#include <vector>

namespace qhw {

template <class S>
struct Cohomology {
  Index dim = 0;
  Matrix<S> representatives;  // columns: cocycles spanning a complement of the coboundaries
  bool truncated = false;     // degree sits on the window edge
};

/// Terms C^lo .. C^hi with d^n : C^n -> C^{n+1} for lo <= n < hi.
template <class S>
class BoundedComplex {
 public:
  BoundedComplex(int lo, std::vector<Index> dims, std::vector<Matrix<S>> diffs)
      : lo_(lo), dims_(std::move(dims)), diffs_(std::move(diffs)) {
    if (dims_.empty()) throw Error(ErrorCode::DimensionMismatch, "complex needs at least one term");
    if (diffs_.size() + 1 != dims_.size())
      throw Error(ErrorCode::DimensionMismatch, "need one differential between consecutive terms");
    for (size_t k = 0; k < diffs_.size(); ++k) {
      if (diffs_[k].rows() != dims_[k + 1] || diffs_[k].cols() != dims_[k])
        throw Error(ErrorCode::DimensionMismatch,
                    "differential at degree " + std::to_string(lo_ + static_cast<int>(k)) + " has wrong shape");
    }
    for (size_t k = 0; k + 1 < diffs_.size(); ++k) {
      if (!is_zero(mul(diffs_[k + 1], diffs_[k])))
        throw Error(ErrorCode::InvariantViolated,
                    "d o d != 0 at degree " + std::to_string(lo_ + static_cast<int>(k)));
    }
  }

  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(dims_.size()) - 1; }
  bool in_window(int n) const { return n >= lo() && n <= hi(); }

  Index dim(int n) const { return in_window(n) ? dims_[static_cast<size_t>(n - lo_)] : 0; }

  /// d^n; a zero map when n or n+1 falls outside the window.
  Matrix<S> d(int n) const {
    if (n >= lo() && n < hi()) return diffs_[static_cast<size_t>(n - lo_)];
    return zeros<S>(dim(n + 1), dim(n));
  }

  Cohomology<S> cohomology(int n) const {
    if (!in_window(n))
      throw Error(ErrorCode::DegreeOutsideWindow,
                  "degree " + std::to_string(n) + " outside [" + std::to_string(lo()) + ", " +
                      std::to_string(hi()) + "]");
    Cohomology<S> h;
    h.truncated = (n == lo() || n == hi());
    const Matrix<S> z = kernel_basis(d(n));
    const Matrix<S> b = image_basis(d(n - 1));
    h.representatives = complement_columns<S>(b, z);
    h.dim = h.representatives.cols();
    return h;
  }

  std::vector<Index> betti() const {
    std::vector<Index> out;
    for (int n = lo(); n <= hi(); ++n) out.push_back(cohomology(n).dim);
    return out;
  }

  /// Vector-space dual: (DC)^n = (C^{-n})^*, d_{DC}^n = (-1)^{n+1} (d^{-n-1})^T.
  BoundedComplex dual() const {
    const int new_lo = -hi();
    std::vector<Index> dims;
    std::vector<Matrix<S>> diffs;
    for (int n = new_lo; n <= -lo(); ++n) dims.push_back(dim(-n));
    for (int n = new_lo; n < -lo(); ++n) {
      Matrix<S> t = d(-n - 1).transpose();
      if ((n + 1) % 2 != 0) t = -t;
      diffs.push_back(std::move(t));
    }
    return BoundedComplex(new_lo, std::move(dims), std::move(diffs));
  }

  /// Conjugates every term by an invertible change of basis g^n : C^n -> C^n.
  BoundedComplex conjugate(const std::vector<Matrix<S>>& g) const {
    std::vector<Matrix<S>> diffs;
    for (int n = lo(); n < hi(); ++n) {
      auto inv = inverse(g[static_cast<size_t>(n - lo_)]);
      if (!inv) throw Error(ErrorCode::InvariantViolated, "change of basis is singular");
      diffs.push_back(mul<S>(g[static_cast<size_t>(n + 1 - lo_)], mul<S>(d(n), *inv)));
    }
    return BoundedComplex(lo_, dims_, std::move(diffs));
  }

 private:
  int lo_;
  std::vector<Index> dims_;
  std::vector<Matrix<S>> diffs_;
};

}  // namespace qhw
