#include "qhw/report.hpp"

#include <sstream>

namespace qhw {

std::string tag(Provenance p) {
  switch (p) {
    case Provenance::Paper: return "[PAPER]";
    case Provenance::Trivial: return "[TRIVIAL]";
    case Provenance::Derived: return "[DERIVED]";
  }
  return "";
}

bool SuiteReport::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

void SuiteReport::expect(std::string name, json expected, json got, Provenance p) {
  const bool ok = expected == got;
  checks.push_back({std::move(name), std::move(expected), std::move(got), ok, p});
}

void SuiteReport::require(std::string name, bool holds, Provenance p) {
  checks.push_back({std::move(name), true, holds, holds, p});
}

Format parse_format(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  if (s == "text") return Format::Text;
  throw Error(ErrorCode::SyntaxError, "unknown format '" + s + "' (json, csv or text)");
}

json to_json(const SuiteReport& r) {
  json j;
  j["suite"] = r.suite;
  j["quivers"] = r.quivers;
  j["pass"] = r.pass();
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"expected", c.expected},
                      {"got", c.got},
                      {"pass", c.pass},
                      {"provenance", tag(c.provenance)}});
  j["checks"] = std::move(checks);
  json skipped = json::array();
  for (const auto& s : r.skipped) skipped.push_back({{"name", s.name}, {"reason", s.reason}});
  j["skipped"] = std::move(skipped);
  if (r.wall_seconds) j["wall_seconds"] = *r.wall_seconds;
  return j;
}

json to_json(const std::vector<SuiteReport>& rs) {
  bool pass = true;
  json suites = json::array();
  for (const auto& r : rs) {
    pass = pass && r.pass();
    suites.push_back(to_json(r));
  }
  return {{"pass", pass}, {"suites", std::move(suites)}};
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string plain(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

}  // namespace

std::string render(const std::vector<SuiteReport>& rs, Format f) {
  std::ostringstream out;
  switch (f) {
    case Format::Json:
      out << to_json(rs).dump(2) << "\n";
      break;
    case Format::Csv:
      out << "suite,quivers,check,expected,got,pass,provenance\n";
      for (const auto& r : rs) {
        std::string qs;
        for (const auto& q : r.quivers) qs += (qs.empty() ? "" : " ") + q;
        for (const auto& c : r.checks)
          out << csv_field(r.suite) << ',' << csv_field(qs) << ',' << csv_field(c.name) << ','
              << csv_field(plain(c.expected)) << ',' << csv_field(plain(c.got)) << ',' << (c.pass ? "pass" : "FAIL")
              << ',' << tag(c.provenance) << "\n";
        for (const auto& s : r.skipped)
          out << csv_field(r.suite) << ',' << csv_field(qs) << ',' << csv_field(s.name) << ",,,skip,"
              << csv_field(s.reason) << "\n";
      }
      break;
    case Format::Text:
      for (const auto& r : rs) {
        out << "== " << r.suite;
        for (const auto& q : r.quivers) out << " " << q;
        out << ": " << (r.pass() ? "pass" : "FAIL");
        if (r.wall_seconds) out << " (" << *r.wall_seconds << " s)";
        out << "\n";
        for (const auto& c : r.checks) {
          out << "  " << (c.pass ? "ok   " : "FAIL ") << c.name << ": got " << plain(c.got);
          if (!c.pass) out << ", expected " << plain(c.expected);
          out << " " << tag(c.provenance) << "\n";
        }
        for (const auto& s : r.skipped) out << "  skip " << s.name << ": " << s.reason << "\n";
      }
      break;
  }
  return out.str();
}

std::string render_error(const Error& e, Format f) {
  switch (f) {
    case Format::Json:
      return json{{"error", {{"code", to_string(e.code())}, {"message", e.what()}}}}.dump(2) + "\n";
    case Format::Csv:
      return "error,message\n" + std::string(to_string(e.code())) + "," + csv_field(e.what()) + "\n";
    case Format::Text:
      break;
  }
  return std::string("error: ") + e.what() + "\n";
}

}  // namespace qhw
