#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qhw/complex.hpp"
#include "qhw/linalg.hpp"
#include "qhw/smith.hpp"
#include "qhw/sparse.hpp"

#include <random>

using namespace qhw;
using Q = Rational;

namespace {

template <class S>
Matrix<S> mat(std::initializer_list<std::initializer_list<long>> rows) {
  Matrix<S> m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (auto& r : rows) {
    Index j = 0;
    for (long v : r) m(i, j++) = S(v);
    ++i;
  }
  return m;
}

IntMatrix imat(std::initializer_list<std::initializer_list<long>> rows) { return mat<Integer>(rows); }

template <class S>
Matrix<S> random_matrix(std::mt19937& rng, Index r, Index c, int lo = -3, int hi = 3) {
  std::uniform_int_distribution<int> dist(lo, hi);
  Matrix<S> m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = S(dist(rng));
  return m;
}

// random matrix of rank at most k
template <class S>
Matrix<S> random_low_rank(std::mt19937& rng, Index r, Index c, Index k) {
  return mul<S>(random_matrix<S>(rng, r, k), random_matrix<S>(rng, k, c));
}

}  // namespace

TEST_CASE("rational arithmetic stays in lowest terms") {
  Q a(Integer(6), Integer(-4));
  CHECK(a.to_string() == "-3/2");
  CHECK(a.denominator() == Integer(2));
  CHECK((a + Q(Integer(3), Integer(2))).is_zero());
  CHECK(Q::parse("10/4") == Q(Integer(5), Integer(2)));
  CHECK_THROWS(Q::parse("1/0"));
}

TEST_CASE("prime field values live in [0, p)") {
  Fp::set_modulus(5);
  CHECK(Fp(-1).value() == 4);
  CHECK((Fp(2) * Fp(3)).value() == 1);
  CHECK((Fp(1) / Fp(2)).value() == 3);
  CHECK(Fp::parse("3/4").value() == 2);
  CHECK_THROWS(Fp::set_modulus(6));
  Fp::set_modulus(32003);
}

TEST_CASE("rank examples") {
  CHECK(rank(identity<Q>(2)) == 2);
  CHECK(rank(zeros<Q>(3, 4)) == 0);
  CHECK(rank(mat<Q>({{1, 2}, {2, 4}})) == 1);
  Fp::set_modulus(5);
  CHECK(rank(mat<Fp>({{1, 2}, {3, 1}})) == 1);  // det = -5
  Fp::set_modulus(32003);
}

TEST_CASE("kernel examples") {
  CHECK(kernel_basis(identity<Q>(3)).cols() == 0);
  auto k = kernel_basis(zeros<Q>(2, 2));
  CHECK(k == identity<Q>(2));
  auto k1 = kernel_basis(mat<Q>({{1, 1}}));
  REQUIRE(k1.cols() == 1);
  CHECK(k1(0, 0) == -k1(1, 0));
  CHECK(!k1(0, 0).is_zero());
}

TEST_CASE("solve and inverse") {
  auto a = mat<Q>({{2, 1}, {1, 1}});
  auto inv = inverse(a);
  REQUIRE(inv);
  CHECK(mul<Q>(a, *inv) == identity<Q>(2));
  CHECK(!inverse(mat<Q>({{1, 2}, {2, 4}})));
  auto x = solve<Q>(mat<Q>({{1, 2}, {2, 4}}), mat<Q>({{3}, {6}}));
  REQUIRE(x);
  CHECK(mul<Q>(mat<Q>({{1, 2}, {2, 4}}), *x) == mat<Q>({{3}, {6}}));
  CHECK(!solve<Q>(mat<Q>({{1, 2}, {2, 4}}), mat<Q>({{3}, {7}})));
}

TEST_CASE("rank-nullity on random matrices") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    Index r = 1 + trial % 6, c = 1 + (trial * 7) % 8, k = trial % 5;
    auto m = random_low_rank<Q>(rng, r, c, k);
    auto ker = kernel_basis(m);
    CHECK(rank(m) + ker.cols() == c);
    CHECK(is_zero(mul<Q>(m, ker)));
    CHECK(image_basis(m).cols() == rank(m));
  }
  Fp::set_modulus(7);
  for (int trial = 0; trial < 40; ++trial) {
    auto m = random_low_rank<Fp>(rng, 5, 6, trial % 5);
    CHECK(rank(m) + kernel_basis(m).cols() == 6);
  }
  Fp::set_modulus(32003);
}

TEST_CASE("sparse echelon rank agrees with dense rank") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    auto m = random_low_rank<Q>(rng, 7, 9, trial % 6);
    std::vector<SparseVec<Q>> cols;
    for (Index j = 0; j < m.cols(); ++j) cols.push_back(to_sparse<Q>(m.col(j)));
    CHECK(sparse_rank(cols) == rank(m));
  }
}

TEST_CASE("bounded complex cohomology") {
  // 0 -> k -> 0
  BoundedComplex<Q> c0(0, {1}, {});
  auto h = c0.cohomology(0);
  CHECK(h.dim == 1);
  CHECK(h.truncated);
  // k --id--> k
  BoundedComplex<Q> c1(0, {1, 1}, {identity<Q>(1)});
  CHECK(c1.cohomology(0).dim == 0);
  CHECK(c1.cohomology(1).dim == 0);
  CHECK_THROWS_AS(c1.cohomology(2), Error);
  try {
    c1.cohomology(5);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegreeOutsideWindow);
  }
  // d o d != 0 is rejected
  CHECK_THROWS(BoundedComplex<Q>(0, {1, 1, 1}, {identity<Q>(1), identity<Q>(1)}));
}

TEST_CASE("cohomology is invariant under change of basis") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 15; ++trial) {
    // k^4 -> k^5 -> k^3 with d1 d0 = 0
    auto d0 = random_low_rank<Q>(rng, 5, 4, 2);
    auto left = kernel_basis<Q>(Matrix<Q>(d0.transpose()));  // vectors orthogonal to image
    auto d1 = mul<Q>(random_matrix<Q>(rng, 3, left.cols()), Matrix<Q>(left.transpose()));
    BoundedComplex<Q> c(-1, {4, 5, 3}, {d0, d1});
    std::vector<Matrix<Q>> g;
    for (Index n : {4, 5, 3}) {
      Matrix<Q> x;
      do x = random_matrix<Q>(rng, n, n); while (rank(x) < n);
      g.push_back(x);
    }
    const auto betti = c.betti();
    CHECK(c.conjugate(g).betti() == betti);
    CHECK(c.dual().betti() == std::vector<Index>(betti.rbegin(), betti.rend()));
  }
}

TEST_CASE("double dual recovers the complex up to the sign (-1)^n") {
  std::mt19937 rng(5);
  auto d0 = random_low_rank<Q>(rng, 3, 2, 1);
  BoundedComplex<Q> c(0, {2, 3}, {d0});
  auto dd = c.dual().dual();
  CHECK(dd.lo() == c.lo());
  CHECK(dd.d(0) == Matrix<Q>(-c.d(0)));
}

TEST_CASE("smith normal form examples") {
  auto s1 = smith_normal_form(imat({{2}}));
  CHECK(s1.factors == std::vector<Integer>{Integer(2)});
  auto s2 = smith_normal_form(imat({{1, 0}, {0, 1}}));
  CHECK(s2.factors == std::vector<Integer>{Integer(1), Integer(1)});
  auto s3 = smith_normal_form(imat({{2, 4}, {6, 8}}));
  CHECK(s3.factors == std::vector<Integer>{Integer(2), Integer(4)});
  CHECK(cokernel(imat({{2}})).to_string() == "Z/2");
  CHECK(cokernel(imat({{1, 1}, {1, 1}})).to_string() == "Z");
}

TEST_CASE("smith transforms are unimodular and reconstruct the input") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    Index r = 1 + trial % 4, c = 1 + (trial / 4) % 4;
    auto m = random_matrix<Integer>(rng, r, c, -6, 6);
    auto s = smith_normal_form(m);
    CHECK(int_mul(int_mul(s.u, m), s.v) == s.diagonal());
    CHECK(int_mul(int_mul(s.u_inv, s.diagonal()), s.v_inv) == m);
    CHECK(abs(determinant(s.u)) == Integer(1));
    CHECK(abs(determinant(s.v)) == Integer(1));
    for (size_t i = 0; i + 1 < s.factors.size(); ++i)
      CHECK(divmod(s.factors[i + 1], s.factors[i]).second.is_zero());
  }
}
