#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qhw/koszul.hpp"

using namespace qhw;
using Q = Rational;

namespace {

Quiver load(const std::string& name) {
  return Quiver::from_file(std::string(QHW_CORPUS_DIR) + "/" + name + ".quiver");
}

const std::vector<std::string> kCorpus{"loop", "rose2", "c2", "c3", "c4", "k22", "path12"};

std::vector<Index> term_dims(const KoszulWindow<Q>& kw) {
  std::vector<Index> out;
  for (int n = 0; n <= kw.depth; ++n) out.push_back(kw.complex.dim(-n));
  return out;
}

std::vector<Path> paths_upto(const Quiver& q, int len) {
  std::vector<Path> out;
  for (int l = 0; l <= len; ++l)
    for (const auto& p : enumerate_paths(q, l)) out.push_back(p);
  return out;
}

// Dense oracle: End-complex cohomology from Hom_A(K^{-m}, K^{-m+n}) and matrix composition.
std::vector<Index> brute_end_cohomology(const KoszulWindow<Q>& kw, int max_degree) {
  const int big = kw.depth;
  struct Piece {
    int m;
    std::vector<Matrix<Q>> basis;
  };
  auto pieces = [&](int n) {
    std::vector<Piece> out;
    for (int m = std::max(n, 0); m <= std::min(big - 1, big + n); ++m)
      out.push_back({m, hom_space(koszul_term_module(kw, m), koszul_term_module(kw, m - n))});
    return out;
  };
  auto dim_of = [](const std::vector<Piece>& ps) {
    Index d = 0;
    for (const auto& p : ps) d += static_cast<Index>(p.basis.size());
    return d;
  };
  // Kd(m) : K^{-m} -> K^{-m+1}
  auto kd = [&](int m) { return kw.complex.d(-m); };
  auto diff = [&](int n) {
    const auto src = pieces(n), tgt = pieces(n + 1);
    Matrix<Q> out = zeros<Q>(dim_of(tgt), dim_of(src));
    Index col = 0;
    for (const auto& sp : src)
      for (const auto& f : sp.basis) {
        // d(f) restricted to the source K^{-m'} is d_K f_{m'} - (-1)^n f_{m'-1} d_K
        Index row = 0;
        for (const auto& tp : tgt) {
          const int mp = tp.m;
          Matrix<Q> g = zeros<Q>(kw.dim(mp - n - 1), kw.dim(mp));
          if (sp.m == mp && mp - n - 1 >= 0) g += mul<Q>(kd(mp - n), f);
          if (sp.m == mp - 1) {
            Matrix<Q> t = mul<Q>(f, kd(mp));
            g += (n % 2 == 0 ? Q(-1) : Q(1)) * t;
          }
          auto coords = solve<Q>(flatten_all(tp.basis, g.rows(), g.cols()), Matrix<Q>(flatten(g)));
          REQUIRE(coords);
          out.block(row, col, coords->rows(), 1) = *coords;
          row += static_cast<Index>(tp.basis.size());
        }
        ++col;
      }
    return out;
  };
  std::vector<Index> out;
  Matrix<Q> prev = diff(-1);
  for (int n = 0; n <= max_degree; ++n) {
    Matrix<Q> cur = diff(n);
    CHECK(is_zero(mul<Q>(cur, prev)));
    out.push_back(cur.cols() - rank(cur) - rank(prev));
    prev = cur;
  }
  return out;
}

}  // namespace

TEST_CASE("Koszul term dimensions") {
  CHECK(term_dims(build_koszul<Q>(load("loop"), 4)) == std::vector<Index>{2, 2, 2, 2, 2});
  CHECK(term_dims(build_koszul<Q>(load("rose2"), 3)) == std::vector<Index>{3, 6, 12, 24});
  CHECK(term_dims(build_koszul<Q>(load("c2"), 3)) == std::vector<Index>{4, 4, 4, 4});
  CHECK_THROWS_AS(build_koszul<Q>(load("loop"), 0), Error);
}

TEST_CASE("Koszul complex resolves kQ_0") {
  auto r1 = verify_resolution(build_koszul<Q>(load("loop"), 4));
  CHECK(r1.pass);
  CHECK(r1.h0_dim == 1);
  CHECK(r1.higher[0].second == 0);
  CHECK(r1.higher[2].second == 0);
  CHECK(r1.truncated_degree == -4);
  auto r2 = verify_resolution(build_koszul<Q>(load("rose2"), 3));
  CHECK(r2.pass);
  CHECK(r2.h0_dim == 1);
  auto c2 = verify_resolution(build_koszul<Q>(load("c2"), 3));
  CHECK(c2.h0_dim == 2);
  for (const auto& name : kCorpus) {
    CAPTURE(name);
    CHECK(verify_resolution(build_koszul<Q>(load(name), 6)).pass);
  }
}

TEST_CASE("terms are right A-modules and d is A-linear") {
  for (const auto& name : kCorpus) {
    const auto q = load(name);
    const auto a = build_rs0<Q>(q);
    const auto kw = build_koszul<Q>(q, 4);
    CAPTURE(name);
    for (int n = 0; n <= 4; ++n) {
      koszul_term_module(kw, n).verify(a.algebra);
      if (n == 0) continue;
      for (Index b = 0; b < a.algebra.dim(); ++b)
        CHECK(mul<Q>(kw.complex.d(-n), kw.right_action[static_cast<size_t>(n)][static_cast<size_t>(b)]) ==
              mul<Q>(kw.right_action[static_cast<size_t>(n - 1)][static_cast<size_t>(b)], kw.complex.d(-n)));
    }
  }
}

TEST_CASE("B-action examples") {
  const auto r1 = load("loop");
  const auto kw = build_koszul<Q>(r1, 3);
  const Path alpha = Path::arrow(r1, 0);
  auto t = b_action(kw, alpha, 1, kw.left_index(1, alpha));
  REQUIRE(t);
  CHECK(t->sign == -1);
  CHECK(t->index == kw.left_index(0, Path::trivial(0)));

  const auto r2 = load("rose2");
  const auto kw2 = build_koszul<Q>(r2, 3);
  const Path a = parse_path(r2, "a");
  CHECK(!b_action(kw2, a, 2, kw2.left_index(2, parse_path(r2, "b.a"))));
  auto ok = b_action(kw2, a, 2, kw2.left_index(2, parse_path(r2, "a.b")));
  REQUIRE(ok);
  CHECK(ok->sign == 1);
  CHECK(ok->index == kw2.left_index(1, parse_path(r2, "b")));

  // trivial paths act as projections onto pairs anchored at their vertex
  const auto c2 = load("c2");
  const auto kc = build_koszul<Q>(c2, 3);
  for (int n = 0; n <= 3; ++n) {
    Matrix<Q> sum = b_action_matrix(kc, Path::trivial(0), n) + b_action_matrix(kc, Path::trivial(1), n);
    CHECK(sum == identity<Q>(kc.dim(n)));
  }
}

TEST_CASE("B-action is associative, commutes with A and is a dg action") {
  for (const auto& name : kCorpus) {
    const auto q = load(name);
    const int big = 4;
    const auto kw = build_koszul<Q>(q, big);
    const auto ps = paths_upto(q, 2);
    CAPTURE(name);
    for (int n = 0; n <= big; ++n) {
      for (const auto& p : ps)
        for (const auto& r : ps) {
          const int l = p.length() + r.length();
          if (l > n) continue;
          // (p * r). = p.(r.)
          Matrix<Q> lhs = zeros<Q>(kw.dim(n - l), kw.dim(n));
          if (auto pr = b_product(q, p, r)) lhs = Q(pr->first) * b_action_matrix(kw, pr->second, n);
          Matrix<Q> rhs = mul<Q>(b_action_matrix(kw, p, n - r.length()), b_action_matrix(kw, r, n));
          CHECK(lhs == rhs);
        }
      for (const auto& p : ps) {
        if (p.length() > n) continue;
        const auto bp = b_action_matrix(kw, p, n);
        for (size_t b = 0; b < kw.right_action[0].size(); ++b)
          CHECK(mul<Q>(bp, kw.right_action[static_cast<size_t>(n)][b]) ==
                mul<Q>(kw.right_action[static_cast<size_t>(n - p.length())][b], bp));
        // d(p.k) = (-1)^l p.(dk)
        if (n >= 1 && p.length() <= n - 1) {
          Matrix<Q> lhs = mul<Q>(kw.complex.d(-(n - p.length())), bp);
          Matrix<Q> rhs = mul<Q>(b_action_matrix(kw, p, n - 1), kw.complex.d(-n));
          CHECK(lhs == Q(p.length() % 2 == 0 ? 1 : -1) * rhs);
        }
      }
    }
  }
}

TEST_CASE("sign twist") {
  const auto r2 = load("rose2");
  CHECK(sign_twist(parse_path(r2, "a")) == -1);
  CHECK(sign_twist(parse_path(r2, "a.b")) == -1);
  CHECK(sign_twist(Path::trivial(0)) == 1);
  for (const auto& name : kCorpus) {
    const auto q = load(name);
    const auto ps = paths_upto(q, 3);
    for (const auto& p : ps)
      for (const auto& r : ps) {
        // in kQ^op, p * r = rp; the twist must send it to twist(p) *_B twist(r)
        auto pr = b_product(q, p, r);
        if (!pr) continue;
        CHECK(sign_twist(pr->second) == sign_twist(p) * sign_twist(r) * pr->first);
      }
  }
}

TEST_CASE("End complex squares to zero") {
  for (const auto& name : kCorpus) {
    const auto kw = build_koszul<Q>(load(name), 4);
    EndComplex<Q> ec(kw);
    for (int n = ec.lo(); n + 1 <= ec.hi(); ++n) {
      const auto d0 = ec.differential_columns(n);
      const auto d1 = ec.differential_columns(n + 1);
      for (const auto& c : d0) {
        SparseVec<Q> out;
        for (const auto& [i, v] : c) out = axpy(out, v, d1[static_cast<size_t>(i)]);
        CHECK(out.empty());
      }
    }
  }
}

TEST_CASE("End cohomology matches |Q_n|") {
  auto dims = [](const std::string& name, int big) {
    std::vector<Index> out;
    for (const auto& r : end_cohomology_dims(build_koszul<Q>(load(name), big)))
      if (r.reliable) out.push_back(r.dim);
    return out;
  };
  CHECK(dims("loop", 5) == std::vector<Index>{1, 1, 1, 1});
  CHECK(dims("rose2", 5) == std::vector<Index>{1, 2, 4, 8});
  CHECK(dims("c2", 5) == std::vector<Index>{2, 2, 2, 2});
  for (const auto& name : kCorpus) {
    CAPTURE(name);
    for (const auto& r : end_cohomology_dims(build_koszul<Q>(load(name), 5))) {
      CAPTURE(r.degree);
      CHECK(r.pass());
      if (r.reliable) {
        CHECK(r.rho_cocycles);
        CHECK(r.rho_injective);
        CHECK(r.witness);
      }
    }
  }
}

TEST_CASE("End cohomology agrees with a dense Hom-space oracle") {
  for (const auto& name : {"loop", "c2", "path12", "rose2"}) {
    CAPTURE(name);
    const auto kw = build_koszul<Q>(load(name), 3);
    const auto fast = end_cohomology_dims(kw);
    const auto slow = brute_end_cohomology(kw, 2);
    for (int n = 0; n <= 2; ++n) CHECK(fast[static_cast<size_t>(n)].dim == slow[static_cast<size_t>(n)]);
  }
}

TEST_CASE("dual Koszul complex") {
  for (const auto& name : kCorpus) {
    const auto q = load(name);
    const auto kw = build_koszul<Q>(q, 4);
    const auto dk = dualize(kw);
    const auto a = build_rs0<Q>(q);
    CAPTURE(name);
    CHECK(dk.complex.lo() == 0);
    CHECK(dk.complex.hi() == 4);
    for (int n = 0; n <= 4; ++n) {
      CHECK(dk.complex.dim(n) == kw.complex.dim(-n));
      FinDimModule<Q>{Side::Left, dk.complex.dim(n), dk.left_action[static_cast<size_t>(n)]}.verify(a.algebra);
    }
    CHECK(dk.complex.cohomology(0).dim == q.num_vertices());
    for (int n = 1; n <= 3; ++n) CHECK(dk.complex.cohomology(n).dim == 0);
    const auto dd = dk.complex.dual();
    for (int n = -4; n < 0; ++n) CHECK(dd.d(n) == Matrix<Q>(-kw.complex.d(n)));
  }
}
