#include "qhw/suites.hpp"

#include <fstream>
#include <sstream>

namespace qhw {

namespace {

int positive_int(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const int x = std::stoi(v, &used);
    if (used == v.size() && x >= 1) return x;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::SyntaxError, key + " must be a positive integer, got '" + v + "'");
}

bool boolean(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorCode::SyntaxError, key + " must be true or false, got '" + v + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "field") {
    if (value == "q" || value == "Q") {
      prime.reset();
      return;
    }
    const std::string digits = value.rfind("p=", 0) == 0 ? value.substr(2) : value;
    const long p = positive_int("field", digits);
    if (!Fp::is_prime(static_cast<std::uint64_t>(p)) || p >= (1L << 31))
      throw Error(ErrorCode::SyntaxError, "field p=" + digits + " is not a prime below 2^31");
    prime = p;
  } else if (key == "window") {
    window = positive_int(key, value);
  } else if (key == "stage") {
    stage = positive_int(key, value);
  } else if (key == "depth") {
    depth = positive_int(key, value);
  } else if (key == "format") {
    format = parse_format(value);
  } else if (key == "seed") {
    try {
      size_t used = 0;
      seed = std::stoull(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw Error(ErrorCode::SyntaxError, "seed must be a nonnegative integer, got '" + value + "'");
    }
  } else if (key == "strict") {
    strict = boolean(key, value);
  } else if (key == "timing") {
    timing = boolean(key, value);
  } else if (key == "random_modules") {
    random_modules = positive_int(key, value);
  } else if (key == "random_words") {
    random_words = positive_int(key, value);
  } else if (key == "confluence_length") {
    confluence_length = positive_int(key, value);
  } else {
    throw Error(ErrorCode::SyntaxError, "unknown configuration key '" + key + "'");
  }
}

json RunConfig::to_json() const {
  static const char* formats[] = {"json", "csv", "text"};
  return {{"field", field_name(*this)},
          {"window", window},
          {"stage", stage},
          {"depth", depth},
          {"format", formats[static_cast<int>(format)]},
          {"seed", seed},
          {"strict", strict},
          {"random_modules", random_modules},
          {"random_words", random_words},
          {"confluence_length", confluence_length}};
}

RunConfig read_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::SyntaxError, "cannot read configuration file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw SyntaxError(lineno, 1, "expected key = value");
    // "field = p=5" splits at the first '='
    base.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

std::string field_name(const RunConfig& c) { return c.prime ? "F" + std::to_string(*c.prime) : "Q"; }

EquivalenceReport equivalence_report(const Quiver& q1, const std::string& n1, const Quiver& q2,
                                     const std::string& n2, int depth) {
  EquivalenceReport rep;
  rep.verdict = compare_quivers(q1, q2, depth);
  const auto& v = rep.verdict;
  auto order = [](const std::optional<long>& o) { return o ? json(*o) : json("infinite"); };

  json stages = json::array();
  for (size_t k = 0; k < v.first.size(); ++k) {
    const auto& a = v.first[k];
    const auto& b = v.second[k];
    stages.push_back({{"stage", a.stage},
                      {"rank", {a.lattice_rank, b.lattice_rank}},
                      {"eventual_rank", {a.eventual_rank, b.eventual_rank}},
                      {"smith", {a.transition_cokernel.to_string(), b.transition_cokernel.to_string()}},
                      {"bowen_franks", {a.bowen_franks.to_string(), b.bowen_franks.to_string()}},
                      {"trace", {a.trace.to_string(), b.trace.to_string()}},
                      {"shift_order", {order(a.shift_order), order(b.shift_order)}},
                      {"orbits", {a.orbits, b.orbits}},
                      {"mismatches", mismatches(a, b)}});
  }
  const bool dist = v.verdict == Verdict::Distinguished;
  const char* statements[] = {
      "the radical square zero algebras are singularly equivalent",
      "the Leavitt path algebras are graded Morita equivalent",
      "the Leavitt path algebras are derived equivalent",
      "the opposite Leavitt path algebras are derived equivalent",
      "the homotopy categories of acyclic complexes of injectives are triangle equivalent",
      "the homotopy categories of acyclic complexes of projectives over the opposite algebras are triangle "
      "equivalent"};
  json conditions = json::array();
  for (int i = 0; i < 6; ++i)
    conditions.push_back({{"condition", i + 1},
                          {"statement", statements[i]},
                          {"evidence", i == 1 ? "direct: graded K0 with shift is an invariant"
                                              : "through the equivalence with condition 2"},
                          {"status", dist ? "refuted" : "undecided"}});
  const std::string caveat =
      "'not distinguished' is not a proof of equivalence; the invariant is a computable coarsening of graded K0 "
      "as a group with shift automorphism, and the order structure is recorded but not compared";
  rep.document = {{"quivers", {n1, n2}},
                  {"depth", depth},
                  {"stages", std::move(stages)},
                  {"verdict", v.label()},
                  {"distinguished_at", v.distinguished_at ? json(*v.distinguished_at) : json(nullptr)},
                  {"reasons", v.reasons},
                  {"compared", {"eventual_rank", "trace", "bowen_franks", "shift_order"}},
                  {"reported_only", {"rank", "smith", "orbits"}},
                  {"conditions", std::move(conditions)},
                  {"caveat", caveat},
                  {"provenance", "[DERIVED]"}};

  auto plain = [&](const std::optional<long>& o) { return o ? std::to_string(*o) : std::string("infinite"); };
  std::ostringstream t;
  t << "compare " << n1 << " vs " << n2 << " up to stage " << depth << "\n";
  for (size_t k = 0; k < v.first.size(); ++k) {
    const auto& a = v.first[k];
    const auto& b = v.second[k];
    t << "  stage " << a.stage << ": rank " << a.lattice_rank << " vs " << b.lattice_rank << "; eventual rank "
      << a.eventual_rank << " vs " << b.eventual_rank << "; coker T^k " << a.transition_cokernel.to_string() << " vs "
      << b.transition_cokernel.to_string() << "; coker(I - T^k) " << a.bowen_franks.to_string() << " vs "
      << b.bowen_franks.to_string() << "; trace " << a.trace.to_string() << " vs " << b.trace.to_string()
      << "; shift order " << plain(a.shift_order) << " vs " << plain(b.shift_order) << "\n";
  }
  t << "verdict: " << v.label();
  if (v.distinguished_at) {
    t << " at stage " << *v.distinguished_at << " (";
    for (size_t i = 0; i < v.reasons.size(); ++i) t << (i ? ", " : "") << v.reasons[i];
    t << ")";
  }
  t << " [DERIVED]\n";
  t << (dist ? "all six equivalent conditions fail for this pair\n"
             : "none of the six equivalent conditions is decided by this evidence\n");
  t << "caveat: " << caveat << "\n";
  rep.text = t.str();
  return rep;
}

}  // namespace qhw
