// qhw: verification suites, quiver comparison and small computations.

#include "qhw/suites.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

using namespace qhw;

namespace {

constexpr int kPass = 0, kFail = 1, kUsage = 2, kPrecondition = 3;

struct Loaded {
  Quiver quiver;
  std::string name;
};

Loaded load(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) throw Error(ErrorCode::SyntaxError, "cannot open quiver file " + path);
  return {Quiver::from_file(path), std::filesystem::path(path).stem().string()};
}

bool is_precondition(ErrorCode c) {
  return c == ErrorCode::HasSink || c == ErrorCode::VertexIsSink || c == ErrorCode::StageNotStronglyGraded ||
         c == ErrorCode::WindowTooSmall;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(ErrorCode::SyntaxError, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string json_or_text(const json& j, const std::string& text, Format f) {
  return f == Format::Json ? j.dump(2) + "\n" : text;
}

template <class S>
int verify(const std::string& suite, const Loaded& q, const RunConfig& cfg, std::ostream& out) {
  const std::vector<std::string> all{"koszul", "sequences", "leavitt", "trivext"};
  std::vector<std::string> names = suite == "all" ? all : std::vector<std::string>{suite};
  // suites are independent; results are assembled in a fixed order
  std::vector<std::future<std::vector<SuiteReport>>> jobs;
  for (const auto& s : names)
    jobs.push_back(std::async(std::launch::async, [&, s] { return run_suite<S>(s, q.quiver, q.name, cfg); }));
  std::vector<SuiteReport> reports;
  for (auto& j : jobs)
    for (auto& r : j.get()) reports.push_back(std::move(r));
  out << render(reports, cfg.format);
  bool pass = true, skipped = false;
  for (const auto& r : reports) {
    pass = pass && r.pass();
    skipped = skipped || !r.skipped.empty();
  }
  if (!pass) return kFail;
  return cfg.strict && skipped ? kPrecondition : kPass;
}

std::string blocks_text(const std::vector<Index>& sizes) {
  std::string s;
  for (Index n : sizes) s += (s.empty() ? "" : " x ") + (n == 1 ? std::string("k") : "M" + std::to_string(n) + "(k)");
  return s.empty() ? "0" : s;
}

json matrix_json(const IntMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(std::stol(m(i, j).to_string()));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class S>
int compute(const std::string& what, const Loaded& q, const std::vector<std::string>& args, int degree,
            const RunConfig& cfg, std::ostream& out) {
  const RewriteSystem rs(q.quiver);
  json doc{{"compute", what}, {"quiver", q.name}, {"field", field_name(cfg)}};
  std::string text;
  if (what == "normal-form") {
    if (args.empty()) throw Error(ErrorCode::SyntaxError, "normal-form needs a word, e.g. \"a.a*\"");
    std::string s = to_string(rs, normalize_word<S>(rs, rs.parse_word(args[0])));
    // a single vertex needs no name on its idempotent
    if (q.quiver.num_vertices() == 1) {
      const std::string e = "e_" + q.quiver.vertex_name(0);
      for (auto p = s.find(e); p != std::string::npos; p = s.find(e, p + 1)) s.replace(p, e.size(), "e");
    }
    doc["input"] = args[0];
    doc["result"] = s;
    text = s + "\n";
  } else if (what == "basis") {
    const auto words = rs.graded_basis(degree, 2 * cfg.stage + std::abs(degree));
    json list = json::array();
    for (const auto& w : words) {
      list.push_back(rs.to_string(w));
      text += rs.to_string(w) + "\n";
    }
    doc["degree"] = degree;
    doc["stage"] = cfg.stage;
    doc["result"] = std::move(list);
  } else if (what == "stage-algebra") {
    const auto st = stage_algebra<S>(rs, cfg.stage);
    const std::string s = blocks_text(st.block_sizes) + ", dim " + std::to_string(st.algebra.dim());
    doc["stage"] = cfg.stage;
    doc["blocks"] = st.block_sizes;
    doc["dim"] = st.algebra.dim();
    doc["certified"] = st.matrix_units_certified;
    doc["result"] = s;
    text = s + "\n";
  } else if (what == "k0") {
    const auto stages = k0gr_stages(q.quiver, cfg.depth);
    const auto order = shift_order(transition_matrix(q.quiver));
    json list = json::array();
    for (const auto& s : stages) {
      std::vector<std::string> unit;
      for (const auto& u : s.order_unit) unit.push_back(u.to_string());
      json j{{"stage", s.stage},
             {"rank", s.rank},
             {"transition", matrix_json(s.transition)},
             {"shift", matrix_json(s.shift)},
             {"shift_order", order ? json(*order) : json("infinite")},
             {"order_unit", unit},
             {"shift_commutes", s.shift_commutes}};
      if (s.blocks_match) j["blocks_match"] = *s.blocks_match;
      if (s.shift_model_match) j["shift_model_match"] = *s.shift_model_match;
      text += "stage " + std::to_string(s.stage) + ": Z^" + std::to_string(s.rank) + ", transition " +
              j["transition"].dump() + ", shift order " + j["shift_order"].dump() + ", order unit " +
              json(unit).dump() + "\n";
      list.push_back(std::move(j));
    }
    doc["depth"] = cfg.depth;
    doc["result"] = std::move(list);
  } else {
    throw Error(ErrorCode::SyntaxError, "unknown computation '" + what + "'");
  }
  out << json_or_text(doc, text, cfg.format);
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qhw: finite checks for radical square zero algebras and Leavitt path algebras"};
  app.require_subcommand(1);

  RunConfig cfg;
  cfg.format = Format::Text;
  std::string field, format, config, out_path;
  int window = 0, stage = 0, depth = 0, degree = 0;
  std::uint64_t seed = 0;
  bool strict = false, timing = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--field", field, "q (rationals) or p=N for the prime field F_N");
    sub->add_option("--window", window, "window depth");
    sub->add_option("--stage", stage, "stage index");
    sub->add_option("--depth", depth, "number of K0 stages (default 6)");
    sub->add_option("--format", format, "json, csv or text");
    sub->add_option("--seed", seed, "random seed");
    sub->add_flag("--strict", strict, "treat skipped checks as errors (exit 3)");
    sub->add_flag("--timing", timing, "record wall time per suite");
    sub->add_option("--out", out_path, "write the report to a file");
    sub->add_option("--config", config, "key=value configuration file; flags override it");
  };

  std::string suite, quiver1, quiver2, what;
  std::vector<std::string> extra;
  auto* v = app.add_subcommand("verify", "run verification suites");
  v->add_option("suite", suite, "koszul, leavitt, trivext, sequences or all")
      ->required()
      ->check(CLI::IsMember({"koszul", "leavitt", "trivext", "sequences", "all"}));
  v->add_option("quiver", quiver1, "quiver file")->required();
  common(v);
  auto* c = app.add_subcommand("compare", "compare two quivers by graded K0 invariants");
  c->add_option("quiver1", quiver1)->required();
  c->add_option("quiver2", quiver2)->required();
  common(c);
  auto* k = app.add_subcommand("compute", "print a basis, stage algebra, K0 stages or a normal form");
  k->add_option("what", what, "basis, stage-algebra, k0 or normal-form")
      ->required()
      ->check(CLI::IsMember({"basis", "stage-algebra", "k0", "normal-form"}));
  k->add_option("quiver", quiver1)->required();
  k->add_option("args", extra, "word for normal-form");
  k->add_option("--degree", degree, "degree for basis");
  common(k);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    if (sub->count("--format")) cfg.format = parse_format(format);
    if (!config.empty()) cfg = read_config(config, cfg);
    auto given = [&](const char* flag) { return sub->count(flag) > 0; };
    if (given("--field")) cfg.set("field", field);
    if (given("--window")) cfg.set("window", std::to_string(window));
    if (given("--stage")) cfg.set("stage", std::to_string(stage));
    if (given("--depth")) cfg.set("depth", std::to_string(depth));
    if (given("--format")) cfg.set("format", format);
    if (given("--seed")) cfg.set("seed", std::to_string(seed));
    if (given("--strict")) cfg.strict = strict;
    if (given("--timing")) cfg.timing = timing;
  } catch (const Error& e) {
    std::cerr << render_error(e, cfg.format);
    return kUsage;
  }

  try {
    Output out(out_path);
    auto run = [&](auto scalar) -> int {
      using S = decltype(scalar);
      if (sub == v) return verify<S>(suite, load(quiver1), cfg, out.stream());
      if (sub == k) return compute<S>(what, load(quiver1), extra, degree, cfg, out.stream());
      const auto a = load(quiver1), b = load(quiver2);
      const auto rep = equivalence_report(a.quiver, a.name, b.quiver, b.name, cfg.depth);
      out.stream() << json_or_text(rep.document, rep.text, cfg.format);
      return kPass;
    };
    if (cfg.prime) {
      Fp::set_modulus(static_cast<std::uint64_t>(*cfg.prime));
      return run(Fp{});
    }
    return run(Rational{});
  } catch (const Error& e) {
    std::cerr << render_error(e, cfg.format);
    if (e.code() == ErrorCode::SyntaxError || e.code() == ErrorCode::DuplicateName ||
        e.code() == ErrorCode::UnknownVertex || e.code() == ErrorCode::UnknownArrow ||
        e.code() == ErrorCode::NotComposable)
      return kUsage;
    return is_precondition(e.code()) ? kPrecondition : kFail;
  } catch (const std::exception& e) {
    std::cerr << render_error(Error(ErrorCode::InvariantViolated, e.what()), cfg.format);
    return kFail;
  }
}
