#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qhw/leavitt.hpp"

#include <random>

using namespace qhw;
using Q = Rational;

namespace {

Quiver load(const std::string& name) {
  return Quiver::from_file(std::string(QHW_CORPUS_DIR) + "/" + name + ".quiver");
}

const std::vector<std::string> kCorpus{"loop", "rose2", "c2", "c3", "c4", "k22", "path12"};
const std::vector<std::string> kSinkFree{"loop", "rose2", "c2", "c3", "c4", "k22"};

LElement<Q> elt(const RewriteSystem& rs, const char* text) { return {{rs.parse_word(text), Q(1)}}; }

LElement<Q> nf(const RewriteSystem& rs, const char* text) { return normalize_word<Q>(rs, rs.parse_word(text)); }

LElement<Q> random_element(const RewriteSystem& rs, std::mt19937_64& rng) {
  LElement<Q> x;
  for (int k = 0; k < 3; ++k)
    add_term(x, random_word(rs, rng, 1 + static_cast<int>(rng() % 4)), Q(static_cast<long>(rng() % 5) - 2));
  return normalize<Q>(rs, x);
}

}  // namespace

TEST_CASE("normalization examples") {
  RewriteSystem r2(load("rose2"));
  CHECK(nf(r2, "a.b*").empty());
  CHECK(nf(r2, "a.a*") == elt(r2, "e_v"));
  LElement<Q> expect = elt(r2, "e_v");
  add_term(expect, r2.parse_word("b*.b"), Q(-1));
  CHECK(nf(r2, "a*.a") == expect);
  CHECK(r2.special(0) == 0);
  // non-composable products vanish
  RewriteSystem p(load("path12"));
  CHECK(multiply<Q>(p, elt(p, "a"), elt(p, "a")).empty());
  CHECK_THROWS_AS(p.parse_word("a.a"), Error);
  CHECK_THROWS_AS(p.parse_word("z"), SyntaxError);
}

TEST_CASE("normalization is idempotent and preserves degree") {
  std::mt19937_64 rng(1);
  for (const auto& name : kCorpus) {
    RewriteSystem rs(load(name));
    for (int trial = 0; trial < 200; ++trial) {
      const LWord w = random_word(rs, rng, 1 + static_cast<int>(rng() % 7));
      const auto x = normalize_word<Q>(rs, w);
      CHECK(normalize<Q>(rs, x) == x);
      for (const auto& [m, c] : x) {
        CHECK(rs.is_normal(m));
        CHECK(m.degree == w.degree);
      }
    }
  }
}

TEST_CASE("local confluence up to length 6") {
  for (const auto& name : kCorpus) {
    RewriteSystem rs(load(name));
    auto rep = check_local_confluence<Q>(rs, 6);
    CAPTURE(name);
    CHECK(rep.confluent());
    CHECK(rep.resolved == rep.words_checked);
  }
  RewriteSystem r2(load("rose2"));
  CHECK(check_local_confluence<Q>(r2, 3).critical_overlaps > 0);
}

TEST_CASE("random redex order gives the same normal form") {
  for (const auto& name : kCorpus) {
    RewriteSystem rs(load(name));
    std::mt19937_64 rng(42);
    int agree = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const LWord w = random_word(rs, rng, 1 + static_cast<int>(rng() % 8));
      if (normalize_random<Q>(rs, {{w, Q(1)}}, rng) == normalize_word<Q>(rs, w)) ++agree;
    }
    CAPTURE(name);
    CHECK(agree == 1000);
  }
}

TEST_CASE("graded bases") {
  RewriteSystem r1(load("loop"));
  auto b1 = r1.graded_basis(0, 4);
  REQUIRE(b1.size() == 1);
  CHECK(b1[0].is_trivial());
  RewriteSystem r2(load("rose2"));
  CHECK(r2.graded_basis(0, 2).size() == 4);
  RewriteSystem c2(load("c2"));
  CHECK(c2.graded_basis(1, 3).size() == 2);
  // oracle: normal forms of every composable word of that degree span exactly the basis
  for (const auto& name : kCorpus) {
    RewriteSystem rs(load(name));
    for (int deg = -2; deg <= 2; ++deg) {
      const int bound = 4;
      const auto basis = rs.graded_basis(deg, bound);
      std::map<LWord, Index> idx;
      for (size_t i = 0; i < basis.size(); ++i) idx.emplace(basis[i], static_cast<Index>(i));
      EchelonBasis<Q> span;
      for (int len = 0; len <= bound; ++len)
        for (const auto& w : rs.all_words(len)) {
          if (w.degree != deg) continue;
          auto c = coordinates<Q>(normalize_word<Q>(rs, w), idx, static_cast<Index>(basis.size()));
          REQUIRE(c);
          span.insert(to_sparse<Q>(*c));
        }
      CAPTURE(name);
      CAPTURE(deg);
      CHECK(span.rank() == static_cast<Index>(basis.size()));
    }
  }
}

TEST_CASE("involution") {
  RewriteSystem c2(load("c2"));
  CHECK(involution<Q>(c2, elt(c2, "e_1")) == elt(c2, "e_1"));
  CHECK(involution<Q>(c2, elt(c2, "a")) == elt(c2, "a*"));
  std::mt19937_64 rng(9);
  for (const auto& name : kCorpus) {
    RewriteSystem rs(load(name));
    for (int trial = 0; trial < 60; ++trial) {
      const auto x = random_element(rs, rng), y = random_element(rs, rng);
      CHECK(involution<Q>(rs, involution<Q>(rs, x)) == x);
      CHECK(involution<Q>(rs, multiply<Q>(rs, x, y)) ==
            multiply<Q>(rs, involution<Q>(rs, y), involution<Q>(rs, x)));
      std::set<int> neg;
      for (int d : degrees(x)) neg.insert(-d);
      CHECK(degrees(involution<Q>(rs, x)) == neg);
    }
  }
}

TEST_CASE("multiplication is associative and graded") {
  std::mt19937_64 rng(5);
  for (const auto& name : kCorpus) {
    RewriteSystem rs(load(name));
    for (int trial = 0; trial < 60; ++trial) {
      const LWord a = random_word(rs, rng, 1 + static_cast<int>(rng() % 3));
      const LWord b = random_word(rs, rng, 1 + static_cast<int>(rng() % 3));
      const LWord c = random_word(rs, rng, 1 + static_cast<int>(rng() % 3));
      LElement<Q> x{{a, Q(1)}}, y{{b, Q(1)}}, z{{c, Q(1)}};
      CHECK(multiply<Q>(rs, multiply<Q>(rs, x, y), z) == multiply<Q>(rs, x, multiply<Q>(rs, y, z)));
      for (const auto& [w, v] : multiply<Q>(rs, x, y)) CHECK(w.degree == a.degree + b.degree);
    }
  }
}

TEST_CASE("stage algebras") {
  RewriteSystem r1(load("loop"));
  for (int m = 0; m <= 3; ++m) CHECK(stage_algebra<Q>(r1, m).algebra.dim() == 1);
  for (int n = 2; n <= 4; ++n) {
    RewriteSystem cn(load("c" + std::to_string(n)));
    for (int m = 0; m <= 3; ++m) {
      auto st = stage_algebra<Q>(cn, m);
      CHECK(st.algebra.dim() == n);
      CHECK(st.matrix_units_certified);
      CHECK(st.block_sizes == std::vector<Index>(static_cast<size_t>(n), 1));
    }
  }
  RewriteSystem r2(load("rose2"));
  Index expect = 1;
  for (int m = 0; m <= 3; ++m) {
    auto st = stage_algebra<Q>(r2, m);
    CHECK(st.algebra.dim() == expect);
    CHECK(st.matrix_units_certified);
    CHECK(st.block_sizes == std::vector<Index>{static_cast<Index>(1) << m});
    expect *= 4;
  }
}

TEST_CASE("stage algebras are associative, unital and nest") {
  for (const auto& name : kCorpus) {
    RewriteSystem rs(load(name));
    CAPTURE(name);
    auto prev = stage_algebra<Q>(rs, 0);
    prev.algebra.verify();
    for (int m = 1; m <= 2; ++m) {
      auto st = stage_algebra<Q>(rs, m);
      st.algebra.verify();
      CHECK(st.matrix_units_certified);
      Index sq = 0;
      for (Index b : st.block_sizes) sq += b * b;
      CHECK(sq == st.algebra.dim());
      CHECK(is_algebra_map(prev.algebra, st.algebra, stage_embedding(prev, st)));
      prev = std::move(st);
    }
  }
}

TEST_CASE("central idempotents agree with matrix-unit blocks") {
  for (const auto& name : {"rose2", "c3", "path12", "k22"}) {
    RewriteSystem rs(load(name));
    auto st = stage_algebra<Q>(rs, 1);
    auto sizes = block_sizes(st.algebra, central_idempotents(st.algebra));
    auto mu = st.block_sizes;
    std::sort(sizes.begin(), sizes.end());
    std::sort(mu.begin(), mu.end());
    CAPTURE(name);
    CHECK(sizes == mu);
  }
}

TEST_CASE("strong gradedness at stage level") {
  for (const auto& name : kSinkFree) {
    RewriteSystem rs(load(name));
    for (int m = 0; m <= 3; ++m) {
      auto r = verify_strongly_graded<Q>(rs, m);
      CAPTURE(name);
      CAPTURE(m);
      CHECK(r.pass());
    }
  }
  RewriteSystem c2(load("c2"));
  auto r = verify_strongly_graded<Q>(c2, 2);
  CHECK(r.stage_dim == 2);
  CHECK(r.pass());
  RewriteSystem p(load("path12"));
  try {
    verify_strongly_graded<Q>(p, 1);
    FAIL("expected HasSink");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HasSink);
  }
}

TEST_CASE("stage bimodules are invertible") {
  RewriteSystem c2(load("c2"));
  auto st = stage_algebra<Q>(c2, 1);
  auto plus = bimodule_stage<Q>(c2, st, 1);
  auto minus = bimodule_stage<Q>(c2, st, -1);
  CHECK(plus.basis.size() == 2);
  plus.left.verify(st.algebra);
  plus.right.verify(st.algebra);
  minus.left.verify(st.algebra);
  minus.right.verify(st.algebra);
  // L^1 (x)_S L^-1 has the dimension of S and maps onto it
  auto t = tensor_over(plus.right, minus.left);
  CHECK(t.dim == 2);
  auto pm = pairing_matrix<Q>(c2, st, plus, minus);
  CHECK(rank(mul<Q>(pm, t.section)) == 2);

  RewriteSystem r1(load("loop"));
  auto s1 = stage_algebra<Q>(r1, 1);
  auto p1 = bimodule_stage<Q>(r1, s1, 1);
  auto m1 = bimodule_stage<Q>(r1, s1, -1);
  CHECK(p1.basis.size() == 1);
  CHECK(pairing_matrix<Q>(r1, s1, p1, m1) == Matrix<Q>::Constant(1, 1, Q(1)));

  RewriteSystem r2(load("rose2"));
  auto s2 = stage_algebra<Q>(r2, 1);
  CHECK(rank(pairing_matrix<Q>(r2, s2, bimodule_stage<Q>(r2, s2, 1), bimodule_stage<Q>(r2, s2, -1))) == 4);
}

TEST_CASE("explicit inverses for the localizing maps") {
  auto r2 = verify_inverting<Q>(load("rose2"));
  REQUIRE(r2.iota.size() == 1);
  CHECK(r2.iota[0].pass());
  CHECK(verify_inverting<Q>(load("loop")).pass());
  auto c2 = verify_inverting<Q>(load("c2"));
  CHECK(c2.iota.size() == 2);
  CHECK(c2.kappa.size() == 2);
  for (const auto& name : kCorpus) {
    CAPTURE(name);
    CHECK(verify_inverting<Q>(load(name)).pass());
  }
  auto p = verify_inverting<Q>(load("path12"));
  CHECK(p.iota.size() == 1);   // vertex 1 only
  CHECK(p.kappa.size() == 1);  // vertex 2 only
}

TEST_CASE("iota is injective") {
  RewriteSystem r2(load("rose2"));
  auto a = verify_iota_injective<Q>(r2, 3);
  CHECK(a.paths == 15);
  CHECK(a.pass());
  RewriteSystem r1(load("loop"));
  CHECK(verify_iota_injective<Q>(r1, 4).independent == 5);
  RewriteSystem c2(load("c2"));
  CHECK(verify_iota_injective<Q>(c2, 3).independent == 8);
}
