#pragma once

// Finite quivers, paths, the quiver text format, and the double quiver.
//
// Paths compose right to left: the word of a path lists its arrows in
// written order, so word[0] is applied last. A path p with word
// (a_n, ..., a_1) has s(p) = s(a_1) and t(p) = t(a_n); pq is defined when
// s(p) = t(q).

#include "qhw/error.hpp"
#include "qhw/linalg.hpp"

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace qhw {

struct Arrow {
  std::string name;
  int source = 0;
  int target = 0;
  friend bool operator==(const Arrow&, const Arrow&) = default;
};

class Quiver {
 public:
  Quiver() = default;
  /// Validates unique names and endpoints; throws DuplicateName / UnknownVertex.
  Quiver(std::vector<std::string> vertices, std::vector<Arrow> arrows);

  static Quiver parse(std::string_view text);
  static Quiver from_file(const std::string& path);
  std::string serialize() const;

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_arrows() const { return static_cast<int>(arrows_.size()); }
  const std::string& vertex_name(int v) const { return vertices_.at(static_cast<size_t>(v)); }
  const Arrow& arrow(int a) const { return arrows_.at(static_cast<size_t>(a)); }
  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Arrow>& arrows() const { return arrows_; }

  int vertex_index(std::string_view name) const;  // throws UnknownVertex
  int arrow_index(std::string_view name) const;   // throws UnknownArrow

  /// Arrows with the given source (resp. target), in declaration order.
  std::vector<int> arrows_from(int v) const;
  std::vector<int> arrows_to(int v) const;

  std::vector<int> sinks() const;
  std::vector<int> sources() const;
  bool has_sink() const { return !sinks().empty(); }
  bool has_source() const { return !sources().empty(); }

  friend bool operator==(const Quiver&, const Quiver&) = default;

 private:
  std::vector<std::string> vertices_;
  std::vector<Arrow> arrows_;
};

Quiver opposite(const Quiver& q);

/// Renames vertices through a permutation: vertex i of q becomes perm[i].
Quiver relabel_vertices(const Quiver& q, const std::vector<int>& perm);

struct VertexClasses {
  std::vector<int> sinks;
  std::vector<int> sources;
};
VertexClasses classify_vertices(const Quiver& q);

/// A path; the trivial path e_v has an empty word and anchor v.
struct Path {
  std::vector<int> word;
  int anchor = 0;

  static Path trivial(int v) { return {{}, v}; }
  static Path arrow(const Quiver& q, int a) { return {{a}, q.arrow(a).target}; }

  int length() const { return static_cast<int>(word.size()); }
  bool is_trivial() const { return word.empty(); }
  int source(const Quiver& q) const { return word.empty() ? anchor : q.arrow(word.back()).source; }
  int target(const Quiver& q) const { return word.empty() ? anchor : q.arrow(word.front()).target; }

  std::string to_string(const Quiver& q) const;

  friend bool operator==(const Path&, const Path&) = default;
  friend auto operator<=>(const Path& a, const Path& b) {
    if (auto c = a.word.size() <=> b.word.size(); c != 0) return c;
    if (auto c = a.word <=> b.word; c != 0) return c;
    return a.anchor <=> b.anchor;
  }
};

/// pq, or nullopt-like empty flag when s(p) != t(q).
bool composable(const Quiver& q, const Path& p, const Path& r);
Path concat(const Quiver& q, const Path& p, const Path& r);

/// If r = p r' returns r' (strip p from the left), else false.
bool strip_prefix(const Quiver& q, const Path& p, const Path& r, Path& rest);

/// All paths of length n, ordered lexicographically by arrow names (trivial
/// paths in vertex order).
std::vector<Path> enumerate_paths(const Quiver& q, int n);

/// Paths of length n with the given target (resp. source), same order.
std::vector<Path> paths_ending_at(const Quiver& q, int n, int v);
std::vector<Path> paths_starting_at(const Quiver& q, int n, int v);

/// Entry (i, j) = number of arrows j -> i.
IntMatrix adjacency_matrix(const Quiver& q);

/// Parses a path expression "a.b.c" (right-to-left composition) or "e_v".
Path parse_path(const Quiver& q, std::string_view text);

/// The double quiver: letters 0..A-1 are the arrows, A..2A-1 their ghosts.
class DoubleQuiver {
 public:
  explicit DoubleQuiver(Quiver base) : base_(std::move(base)) {}
  const Quiver& base() const { return base_; }
  int num_letters() const { return 2 * base_.num_arrows(); }
  bool is_ghost(int letter) const { return letter >= base_.num_arrows(); }
  int ghost(int a) const { return a + base_.num_arrows(); }
  int real(int letter) const { return is_ghost(letter) ? letter - base_.num_arrows() : letter; }
  int source(int letter) const {
    const auto& a = base_.arrow(real(letter));
    return is_ghost(letter) ? a.target : a.source;
  }
  int target(int letter) const {
    const auto& a = base_.arrow(real(letter));
    return is_ghost(letter) ? a.source : a.target;
  }
  std::string letter_name(int letter) const {
    return base_.arrow(real(letter)).name + (is_ghost(letter) ? "*" : "");
  }
  int letter_index(std::string_view name) const;  // accepts "a" and "a*"

 private:
  Quiver base_;
};

}  // namespace qhw
