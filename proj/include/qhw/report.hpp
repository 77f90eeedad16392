#pragma once

// Check records, suite reports and their json / csv / text renderings.

#include "qhw/error.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qhw {

using json = nlohmann::ordered_json;

/// Where an expected value comes from; printed with every check.
enum class Provenance { Paper, Trivial, Derived };

std::string tag(Provenance p);

struct Check {
  std::string name;
  json expected;
  json got;
  bool pass = false;
  Provenance provenance = Provenance::Derived;
};

struct Skip {
  std::string name;
  std::string reason;
};

struct SuiteReport {
  std::string suite;
  std::vector<std::string> quivers;
  std::vector<Check> checks;
  std::vector<Skip> skipped;
  std::optional<double> wall_seconds;  // only filled when timing is requested

  bool pass() const;
  /// Adds a check whose pass flag is expected == got.
  void expect(std::string name, json expected, json got, Provenance p);
  /// Adds a boolean property that should hold.
  void require(std::string name, bool holds, Provenance p);
  void skip(std::string name, std::string reason) { skipped.push_back({std::move(name), std::move(reason)}); }
};

enum class Format { Json, Csv, Text };

Format parse_format(const std::string& s);

json to_json(const SuiteReport& r);
json to_json(const std::vector<SuiteReport>& rs);
std::string render(const std::vector<SuiteReport>& rs, Format f);

/// Structured error output for a failed command.
std::string render_error(const Error& e, Format f);

}  // namespace qhw
