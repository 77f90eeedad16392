#pragma once

// Verification suites run by the command-line tool. Each suite is a pure
// function of the quiver and the configuration.

#include "qhw/invariants.hpp"
#include "qhw/koszul.hpp"
#include "qhw/leavitt.hpp"
#include "qhw/pathalg.hpp"
#include "qhw/report.hpp"
#include "qhw/trivext.hpp"

#include <chrono>
#include <memory>
#include <optional>
#include <random>
#include <string>

namespace qhw {

struct RunConfig {
  std::optional<long> prime;  // empty: rationals
  int window = 6;
  int stage = 3;
  int depth = 6;
  Format format = Format::Json;
  std::uint64_t seed = 1;
  bool strict = false;
  bool timing = false;
  int random_modules = 50;
  int random_words = 1000;
  int confluence_length = 6;

  /// Applies one key=value setting; throws SyntaxError on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  json to_json() const;
};

/// Reads key=value lines; '#' starts a comment.
RunConfig read_config(const std::string& path, RunConfig base = {});

std::string field_name(const RunConfig& c);

namespace detail {

inline long path_count(const Quiver& q, int len, int end) {
  return len < 0 ? 0 : static_cast<long>(paths_ending_at(q, len, end).size());
}

// dim of the stage algebra: full matrix blocks at length m, plus shorter blocks at sinks
inline long stage_dim_oracle(const Quiver& q, int m) {
  long dim = 0;
  for (int v = 0; v < q.num_vertices(); ++v) {
    const bool sink = q.arrows_from(v).empty();
    for (int l = sink ? 0 : m; l <= m; ++l) {
      const long c = path_count(q, l, v);
      dim += c * c;
    }
  }
  return dim;
}

template <class F>
void timed(SuiteReport& r, const RunConfig& cfg, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  body();
  if (cfg.timing)
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

template <class S>
SuiteReport koszul_suite(const Quiver& q, const std::string& name, const RunConfig& cfg) {
  SuiteReport r{"koszul", {name}, {}, {}, {}};
  detail::timed(r, cfg, [&] {
    const auto kw = build_koszul<S>(q, cfg.window);
    for (int n = 0; n <= cfg.window; ++n)
      r.expect("dim K^-" + std::to_string(n), kw.first_count(n) + kw.first_count(n + 1), kw.complex.dim(-n),
               Provenance::Derived);
    const auto res = verify_resolution(kw);
    r.expect("dim H^0(K)", q.num_vertices(), res.h0_dim, Provenance::Paper);
    r.require("radical acts by zero on H^0(K)", res.radical_kills_h0, Provenance::Paper);
    for (const auto& [deg, dim] : res.higher)
      if (-deg < cfg.window) r.expect("dim H^" + std::to_string(deg) + "(K)", 0, dim, Provenance::Paper);
    for (const auto& e : end_cohomology_dims(kw)) {
      if (!e.reliable) continue;
      const std::string n = std::to_string(e.degree);
      r.expect("dim H^" + n + "(End K) = |Q_" + n + "|", e.expected, e.dim, Provenance::Paper);
      r.require("paths of length " + n + " give independent cocycles", e.rho_cocycles && e.rho_injective && e.witness,
                Provenance::Derived);
    }
  });
  return r;
}

template <class S>
SuiteReport sequences_suite(const Quiver& q, const std::string& name, const RunConfig& cfg) {
  SuiteReport r{"sequences", {name}, {}, {}, {}};
  detail::timed(r, cfg, [&] {
    auto qp = std::make_shared<const Quiver>(q);
    const int hi = cfg.window - 1;
    for (int i = 0; i < q.num_vertices(); ++i) {
      const std::string v = q.vertex_name(i);
      const auto g = verify_exact_window<S>({xi_map<S>(qp, i)}, 0, hi);
      r.require("G sequence exact at " + v + " in degrees 0.." + std::to_string(hi), g.all_exact(), Provenance::Derived);
      for (const auto& d : g.degrees) {
        long expect = detail::path_count(q, d.degree, i);
        for (int a : q.arrows_to(i)) expect -= detail::path_count(q, d.degree - 1, q.arrow(a).source);
        r.expect("dim G_" + v + "^" + std::to_string(d.degree), expect, d.cokernel_dim, Provenance::Derived);
      }
      if (q.arrows_from(i).empty()) {
        r.skip("T sequence at " + v, "vertex is a sink");
        continue;
      }
      const auto t = verify_exact_window<S>({eta_map<S>(qp, i)}, 0, hi);
      r.require("T sequence exact at " + v + " in degrees 0.." + std::to_string(hi), t.all_exact(), Provenance::Derived);
      for (const auto& d : t.degrees) {
        long expect = -detail::path_count(q, d.degree - 1, i);
        for (int a : q.arrows_from(i)) expect += detail::path_count(q, d.degree, q.arrow(a).target);
        r.expect("dim T_" + v + "^" + std::to_string(d.degree), expect, d.cokernel_dim, Provenance::Derived);
      }
    }
  });
  return r;
}

template <class S>
SuiteReport leavitt_suite(const Quiver& q, const std::string& name, const RunConfig& cfg) {
  SuiteReport r{"leavitt", {name}, {}, {}, {}};
  detail::timed(r, cfg, [&] {
    const RewriteSystem rs(q);
    const auto conf = check_local_confluence<S>(rs, cfg.confluence_length);
    r.expect("critical pairs resolved up to length " + std::to_string(cfg.confluence_length), conf.words_checked,
             conf.resolved, Provenance::Derived);
    r.require("rewriting measure decreases", conf.measure_decreases, Provenance::Derived);

    std::mt19937_64 rng(cfg.seed);
    long agree = 0;
    for (int k = 0; k < cfg.random_words; ++k) {
      const LWord w = random_word(rs, rng, 1 + static_cast<int>(rng() % 8));
      if (normalize_random<S>(rs, {{w, S(1)}}, rng) == normalize_word<S>(rs, w)) ++agree;
    }
    r.expect("random redex order agrees on seeded words", cfg.random_words, agree, Provenance::Derived);

    for (int m = 0; m <= cfg.stage; ++m) {
      const auto st = stage_algebra<S>(rs, m);
      r.expect("dim S_" + std::to_string(m), detail::stage_dim_oracle(q, m), st.algebra.dim(), Provenance::Derived);
      r.require("S_" + std::to_string(m) + " certified by matrix units", st.matrix_units_certified,
                Provenance::Derived);
    }

    if (q.has_sink()) {
      r.skip("strongly graded at stages 0.." + std::to_string(cfg.stage), "has sink");
    } else {
      for (int m = 0; m <= cfg.stage; ++m) {
        const auto g = verify_strongly_graded<S>(rs, m);
        r.require("L^1 L^-1 covers S_" + std::to_string(m), g.plus_minus_covers, Provenance::Derived);
        r.require("L^-1 L^1 covers S_" + std::to_string(m), g.minus_plus_covers, Provenance::Derived);
      }
    }

    const auto inv = verify_inverting<S>(q);
    for (const auto& c : inv.iota)
      r.require("iota inverse at " + q.vertex_name(c.vertex), c.pass(), Provenance::Paper);
    for (const auto& c : inv.kappa)
      r.require("kappa inverse at " + q.vertex_name(c.vertex), c.pass(), Provenance::Paper);
    const auto io = verify_iota_injective<S>(rs, 3);
    r.expect("independent images of paths of length <= 3", io.paths, io.independent, Provenance::Derived);
  });
  return r;
}

namespace detail {

template <class S>
Index modules_checked(SuiteReport& r, const TrivialExtension<S>& t, const RunConfig& cfg) {
  std::vector<std::pair<std::string, FinDimModule<S>>> mods{{"A^0", a0_module(t)}, {"Lambda", lambda_regular(t)}};
  int k = 0;
  for (auto& m : simple_modules(t)) mods.emplace_back("simple " + std::to_string(k++), m);
  k = 0;
  for (auto& m : projective_modules(t)) mods.emplace_back("projective " + std::to_string(k++), m);
  k = 0;
  for (auto& m : random_modules(t, cfg.random_modules, 6, cfg.seed)) mods.emplace_back("random " + std::to_string(k++), m);
  for (const auto& [label, m] : mods) {
    const auto h = stable_hom(t, m);
    r.expect("stable Hom(A^0, " + label + ") formula = oracle", h.oracle_dim, h.formula_dim, Provenance::Derived);
    r.require("stable Hom(A^0, " + label + ") approximation and evaluation", h.approximation && h.matched,
              Provenance::Derived);
    const auto g = gproj_decompose(t, m);
    r.require("Gorenstein projective splitting of " + label + " reassembles", g.reconstructs, Provenance::Derived);
  }
  return static_cast<Index>(mods.size());
}

}  // namespace detail

template <class S>
SuiteReport trivext_suite(const Quiver& q, const std::string& name, const RunConfig& cfg) {
  SuiteReport r{"trivext", {name}, {}, {}, {}};
  detail::timed(r, cfg, [&] {
    if (q.has_sink()) {
      r.skip("trivial extension of the stage", "has sink");
      return;
    }
    const int w = cfg.window;
    std::optional<GradedStage<S>> stage;
    try {
      stage = stage_from_leavitt<S>(q, 1, StageSide::Plus, w + 3);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::StageNotStronglyGraded) throw;
      r.skip("trivial extension of the stage", "the stage at m = 1 is not closed under products");
      return;
    }
    const auto t = build_trivext(*stage);
    const auto rs0 = build_rs0<S>(q);
    bool same = t.algebra.dim() == rs0.algebra.dim() && t.algebra.names() == rs0.algebra.names();
    for (Index i = 0; same && i < t.algebra.dim(); ++i)
      for (Index j = 0; same && j < t.algebra.dim(); ++j) same = t.algebra.product(i, j) == rs0.algebra.product(i, j);
    r.require("Lambda has the structure constants of kQ/J^2", same, Provenance::Derived);

    const auto p = complete_resolution(t, -w, w);
    r.require("complete resolution on [-" + std::to_string(w) + ", " + std::to_string(w) + "] certified",
              p.certified(), Provenance::Derived);
    const auto acyc = verify_totally_acyclic(t, p);
    r.require("P and Hom(P, Lambda) acyclic in the interior", acyc.pass(), Provenance::Derived);
    const auto broken = verify_totally_acyclic(t, corrupt_differential(p, 1));
    r.require("corrupted differential is detected", !broken.pass(), Provenance::Trivial);

    const Index checked = detail::modules_checked(r, t, cfg);
    r.expect("modules checked", 2 + static_cast<Index>(simple_modules(t).size() + projective_modules(t).size()) +
                                    cfg.random_modules,
             checked, Provenance::Trivial);

    const auto endo = stable_endo_ring(t);
    r.expect("dim of stable End(A^0)", t.d0, endo.stable_dim, Provenance::Derived);
    r.require("stable End(A^0) = (A^0)^op via right multiplication", endo.pass(), Provenance::Paper);

    const auto phi = verify_phi_quasi_iso(t, p);
    r.require("End(P) differential matches the closed formula", phi.identification && phi.differential_matches,
              Provenance::Paper);
    for (const auto& d : phi.degrees)
      r.expect("dim H^" + std::to_string(d.degree) + "(End P) = dim A^" + std::to_string(d.degree), d.expected,
               d.h_dim, Provenance::Paper);
    r.require("Phi induces isomorphisms in the reliable degrees", phi.pass(), Provenance::Paper);
    if constexpr (std::is_same_v<S, Fp>) {
      if (Fp::modulus() == 2) r.skip("sign-flipped Phi is rejected", "sign flip is the identity in characteristic 2");
      else r.require("sign-flipped Phi is rejected", !verify_phi_quasi_iso(t, p, true).pass(), Provenance::Trivial);
    } else {
      r.require("sign-flipped Phi is rejected", !verify_phi_quasi_iso(t, p, true).pass(), Provenance::Trivial);
    }

    const auto sm = singularity_model(*stage);
    std::vector<long> lengths;
    for (const auto& o : sm.orbits) lengths.push_back(static_cast<long>(o.size()));
    std::sort(lengths.begin(), lengths.end());
    r.expect("translation orbit lengths", permutation_orbits(transition_matrix(q)), lengths, Provenance::Derived);
  });
  return r;
}

template <class S>
std::vector<SuiteReport> run_suite(const std::string& suite, const Quiver& q, const std::string& name,
                                   const RunConfig& cfg) {
  if (suite == "koszul") return {koszul_suite<S>(q, name, cfg)};
  if (suite == "sequences") return {sequences_suite<S>(q, name, cfg)};
  if (suite == "leavitt") return {leavitt_suite<S>(q, name, cfg)};
  if (suite == "trivext") return {trivext_suite<S>(q, name, cfg)};
  throw Error(ErrorCode::SyntaxError, "unknown suite '" + suite + "'");
}

/// Human-readable and json comparison of two quivers by graded K0 invariants.
struct EquivalenceReport {
  ComparisonVerdict verdict;
  json document;
  std::string text;
};

EquivalenceReport equivalence_report(const Quiver& q1, const std::string& n1, const Quiver& q2,
                                     const std::string& n2, int depth);

}  // namespace qhw
