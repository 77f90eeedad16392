#include "qhw/quiver.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace qhw {

Quiver::Quiver(std::vector<std::string> vertices, std::vector<Arrow> arrows)
    : vertices_(std::move(vertices)), arrows_(std::move(arrows)) {
  std::set<std::string> seen;
  for (const auto& v : vertices_)
    if (!seen.insert(v).second) throw Error(ErrorCode::DuplicateName, "vertex '" + v + "' declared twice");
  std::set<std::string> arrow_names;
  for (const auto& a : arrows_) {
    if (!arrow_names.insert(a.name).second)
      throw Error(ErrorCode::DuplicateName, "arrow '" + a.name + "' declared twice");
    if (a.source < 0 || a.source >= num_vertices() || a.target < 0 || a.target >= num_vertices())
      throw Error(ErrorCode::UnknownVertex, "arrow '" + a.name + "' has an undeclared endpoint");
  }
}

int Quiver::vertex_index(std::string_view name) const {
  for (int i = 0; i < num_vertices(); ++i)
    if (vertices_[static_cast<size_t>(i)] == name) return i;
  throw Error(ErrorCode::UnknownVertex, "unknown vertex '" + std::string(name) + "'");
}

int Quiver::arrow_index(std::string_view name) const {
  for (int i = 0; i < num_arrows(); ++i)
    if (arrows_[static_cast<size_t>(i)].name == name) return i;
  throw Error(ErrorCode::UnknownArrow, "unknown arrow '" + std::string(name) + "'");
}

std::vector<int> Quiver::arrows_from(int v) const {
  std::vector<int> out;
  for (int a = 0; a < num_arrows(); ++a)
    if (arrows_[static_cast<size_t>(a)].source == v) out.push_back(a);
  return out;
}

std::vector<int> Quiver::arrows_to(int v) const {
  std::vector<int> out;
  for (int a = 0; a < num_arrows(); ++a)
    if (arrows_[static_cast<size_t>(a)].target == v) out.push_back(a);
  return out;
}

std::vector<int> Quiver::sinks() const {
  std::vector<int> out;
  for (int v = 0; v < num_vertices(); ++v)
    if (arrows_from(v).empty()) out.push_back(v);
  return out;
}

std::vector<int> Quiver::sources() const {
  std::vector<int> out;
  for (int v = 0; v < num_vertices(); ++v)
    if (arrows_to(v).empty()) out.push_back(v);
  return out;
}

namespace {

bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Cursor over one line with 1-based columns for error reporting.
struct LineCursor {
  std::string_view text;
  int line;
  size_t pos = 0;

  int column() const { return static_cast<int>(pos) + 1; }
  void skip_space() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r')) ++pos;
  }
  bool at_end() {
    skip_space();
    return pos >= text.size();
  }
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(line, column(), msg); }
  std::string name() {
    skip_space();
    size_t start = pos;
    while (pos < text.size() && is_name_char(text[pos])) ++pos;
    if (start == pos) fail(pos < text.size() ? "expected a name, found '" + std::string(1, text[pos]) + "'"
                                            : "expected a name");
    return std::string(text.substr(start, pos - start));
  }
  void expect(std::string_view token) {
    skip_space();
    if (text.substr(pos, token.size()) != token) fail("expected '" + std::string(token) + "'");
    pos += token.size();
  }
  bool accept(char c) {
    skip_space();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
};

struct PendingArrow {
  std::string name, source, target;
  int line, column;
};

}  // namespace

Quiver Quiver::parse(std::string_view text) {
  std::vector<std::string> vertices;
  std::vector<PendingArrow> pending;
  int line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    LineCursor cur{text.substr(start, end - start), line_no};
    start = end + 1;
    if (cur.at_end() || cur.text[cur.pos] == '#') {
      if (end == text.size()) break;
      continue;
    }
    const std::string keyword = cur.name();
    cur.expect(":");
    if (keyword == "vertices") {
      while (!cur.at_end()) vertices.push_back(cur.name());
    } else if (keyword == "arrows") {
      if (!cur.at_end()) {
        do {
          PendingArrow a;
          cur.skip_space();
          a.line = line_no;
          a.column = cur.column();
          a.name = cur.name();
          cur.expect(":");
          a.source = cur.name();
          cur.expect("->");
          a.target = cur.name();
          pending.push_back(std::move(a));
        } while (cur.accept(','));
        if (!cur.at_end()) cur.fail("unexpected trailing text");
      }
    } else {
      throw SyntaxError(line_no, 1, "unknown section '" + keyword + "'");
    }
    if (end == text.size()) break;
  }
  std::vector<Arrow> arrows;
  for (const auto& p : pending) {
    auto find = [&](const std::string& v) {
      auto it = std::find(vertices.begin(), vertices.end(), v);
      if (it == vertices.end())
        throw Error(ErrorCode::UnknownVertex, "line " + std::to_string(p.line) + ", column " +
                                                  std::to_string(p.column) + ": arrow '" + p.name +
                                                  "' uses undeclared vertex '" + v + "'");
      return static_cast<int>(it - vertices.begin());
    };
    arrows.push_back({p.name, find(p.source), find(p.target)});
  }
  return Quiver(std::move(vertices), std::move(arrows));
}

Quiver Quiver::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string Quiver::serialize() const {
  std::string out = "vertices:";
  for (const auto& v : vertices_) out += " " + v;
  out += "\n";
  if (!arrows_.empty()) {
    out += "arrows:";
    for (size_t i = 0; i < arrows_.size(); ++i) {
      const auto& a = arrows_[i];
      out += (i == 0 ? " " : ", ") + a.name + ": " + vertex_name(a.source) + " -> " + vertex_name(a.target);
    }
    out += "\n";
  }
  return out;
}

Quiver opposite(const Quiver& q) {
  std::vector<Arrow> arrows;
  for (const auto& a : q.arrows()) arrows.push_back({a.name, a.target, a.source});
  return Quiver(q.vertices(), std::move(arrows));
}

Quiver relabel_vertices(const Quiver& q, const std::vector<int>& perm) {
  std::vector<std::string> names(static_cast<size_t>(q.num_vertices()));
  for (int v = 0; v < q.num_vertices(); ++v) names[static_cast<size_t>(perm[static_cast<size_t>(v)])] = q.vertex_name(v);
  std::vector<Arrow> arrows;
  for (const auto& a : q.arrows())
    arrows.push_back({a.name, perm[static_cast<size_t>(a.source)], perm[static_cast<size_t>(a.target)]});
  return Quiver(std::move(names), std::move(arrows));
}

VertexClasses classify_vertices(const Quiver& q) { return {q.sinks(), q.sources()}; }

std::string Path::to_string(const Quiver& q) const {
  if (word.empty()) return "e_" + q.vertex_name(anchor);
  std::string out;
  for (size_t i = 0; i < word.size(); ++i) out += (i ? "." : "") + q.arrow(word[i]).name;
  return out;
}

bool composable(const Quiver& q, const Path& p, const Path& r) { return p.source(q) == r.target(q); }

Path concat(const Quiver& q, const Path& p, const Path& r) {
  if (!composable(q, p, r)) throw Error(ErrorCode::NotComposable, p.to_string(q) + " and " + r.to_string(q));
  Path out;
  out.word = p.word;
  out.word.insert(out.word.end(), r.word.begin(), r.word.end());
  out.anchor = p.target(q);
  return out;
}

bool strip_prefix(const Quiver& q, const Path& p, const Path& r, Path& rest) {
  if (p.length() > r.length()) return false;
  if (p.is_trivial()) {
    if (r.target(q) != p.anchor) return false;
    rest = r;
    return true;
  }
  if (!std::equal(p.word.begin(), p.word.end(), r.word.begin())) return false;
  rest.word.assign(r.word.begin() + p.length(), r.word.end());
  rest.anchor = p.source(q);
  return true;
}

namespace {

void sort_by_names(const Quiver& q, std::vector<Path>& paths) {
  std::stable_sort(paths.begin(), paths.end(), [&](const Path& a, const Path& b) {
    if (a.is_trivial() && b.is_trivial()) return a.anchor < b.anchor;
    return std::lexicographical_compare(
        a.word.begin(), a.word.end(), b.word.begin(), b.word.end(),
        [&](int x, int y) { return q.arrow(x).name < q.arrow(y).name; });
  });
}

}  // namespace

std::vector<Path> enumerate_paths(const Quiver& q, int n) {
  std::vector<Path> cur;
  for (int v = 0; v < q.num_vertices(); ++v) cur.push_back(Path::trivial(v));
  for (int len = 0; len < n; ++len) {
    std::vector<Path> next;
    for (const auto& p : cur)
      for (int a : q.arrows_from(p.target(q))) {
        Path x;
        x.word.push_back(a);
        x.word.insert(x.word.end(), p.word.begin(), p.word.end());
        x.anchor = q.arrow(a).target;
        next.push_back(std::move(x));
      }
    cur = std::move(next);
  }
  sort_by_names(q, cur);
  return cur;
}

std::vector<Path> paths_ending_at(const Quiver& q, int n, int v) {
  std::vector<Path> out;
  for (auto& p : enumerate_paths(q, n))
    if (p.target(q) == v) out.push_back(std::move(p));
  return out;
}

std::vector<Path> paths_starting_at(const Quiver& q, int n, int v) {
  std::vector<Path> out;
  for (auto& p : enumerate_paths(q, n))
    if (p.source(q) == v) out.push_back(std::move(p));
  return out;
}

IntMatrix adjacency_matrix(const Quiver& q) {
  IntMatrix m = IntMatrix::Constant(q.num_vertices(), q.num_vertices(), Integer(0));
  for (const auto& a : q.arrows()) m(a.target, a.source) += Integer(1);
  return m;
}

Path parse_path(const Quiver& q, std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.starts_with("e_")) return Path::trivial(q.vertex_index(text.substr(2)));
  Path p;
  size_t start = 0;
  while (start <= text.size()) {
    size_t dot = text.find('.', start);
    if (dot == std::string_view::npos) dot = text.size();
    p.word.push_back(q.arrow_index(trim(text.substr(start, dot - start))));
    start = dot + 1;
    if (dot == text.size()) break;
  }
  for (size_t i = 0; i + 1 < p.word.size(); ++i)
    if (q.arrow(p.word[i]).source != q.arrow(p.word[i + 1]).target)
      throw Error(ErrorCode::NotComposable, "path '" + std::string(text) + "' is not composable");
  p.anchor = q.arrow(p.word.front()).target;
  return p;
}

int DoubleQuiver::letter_index(std::string_view name) const {
  if (name.ends_with("*")) return ghost(base_.arrow_index(name.substr(0, name.size() - 1)));
  return base_.arrow_index(name);
}

}  // namespace qhw
