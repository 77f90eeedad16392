#include "qhw/leavitt.hpp"

#include <algorithm>
#include <sstream>

namespace qhw {

RewriteSystem::RewriteSystem(Quiver q) : dq_(std::move(q)) {
  for (int v = 0; v < quiver().num_vertices(); ++v) {
    const auto from = quiver().arrows_from(v);
    special_.push_back(from.empty() ? -1 : from.front());
  }
}

LWord RewriteSystem::letter(int l) const { return {{l}, dq_.target(l), dq_.is_ghost(l) ? -1 : 1}; }

LWord RewriteSystem::real_path(const Path& p) const {
  return {p.word, p.target(quiver()), p.length()};
}

LWord RewriteSystem::ghost_path(const Path& p) const {
  LWord w{{}, p.source(quiver()), -p.length()};
  for (auto it = p.word.rbegin(); it != p.word.rend(); ++it) w.letters.push_back(dq_.ghost(*it));
  if (!w.letters.empty()) w.anchor = dq_.target(w.letters.front());
  return w;
}

std::optional<LWord> RewriteSystem::make(std::vector<int> letters, int anchor_if_empty) const {
  LWord w{std::move(letters), anchor_if_empty, 0};
  for (size_t i = 0; i < w.letters.size(); ++i) {
    w.degree += dq_.is_ghost(w.letters[i]) ? -1 : 1;
    if (i + 1 < w.letters.size() && dq_.source(w.letters[i]) != dq_.target(w.letters[i + 1])) return std::nullopt;
  }
  if (!w.letters.empty()) w.anchor = dq_.target(w.letters.front());
  return w;
}

std::optional<LWord> RewriteSystem::concat(const LWord& a, const LWord& b) const {
  if (source(a) != target(b)) return std::nullopt;
  if (a.is_trivial()) return b;
  if (b.is_trivial()) return a;
  LWord w{a.letters, a.anchor, a.degree + b.degree};
  w.letters.insert(w.letters.end(), b.letters.begin(), b.letters.end());
  return w;
}

std::vector<Redex> RewriteSystem::redexes(const LWord& w) const {
  std::vector<Redex> out;
  for (size_t i = 0; i + 1 < w.letters.size(); ++i) {
    const int x = w.letters[i], y = w.letters[i + 1];
    if (!dq_.is_ghost(x) && dq_.is_ghost(y)) {
      out.push_back({i, RedexKind::CK1});
    } else if (dq_.is_ghost(x) && !dq_.is_ghost(y) && dq_.real(x) == y && special(quiver().arrow(y).source) == y) {
      out.push_back({i, RedexKind::CK2});
    }
  }
  return out;
}

std::vector<std::pair<LWord, int>> RewriteSystem::rewrite(const LWord& w, const Redex& r) const {
  const int x = w.letters[r.pos], y = w.letters[r.pos + 1];
  auto splice = [&](const std::vector<int>& middle, int anchor) {
    std::vector<int> letters(w.letters.begin(), w.letters.begin() + static_cast<long>(r.pos));
    letters.insert(letters.end(), middle.begin(), middle.end());
    letters.insert(letters.end(), w.letters.begin() + static_cast<long>(r.pos) + 2, w.letters.end());
    return *make(std::move(letters), anchor);
  };
  std::vector<std::pair<LWord, int>> out;
  if (r.kind == RedexKind::CK1) {
    if (dq_.real(y) == x) out.emplace_back(splice({}, dq_.target(x)), 1);
    return out;
  }
  // g* g -> e_v - sum_{alpha != g, s(alpha) = v} alpha* alpha
  const int v = quiver().arrow(y).source;
  out.emplace_back(splice({}, v), 1);
  for (int a : quiver().arrows_from(v))
    if (a != y) out.emplace_back(splice({dq_.ghost(a), a}, v), -1);
  return out;
}

std::pair<int, int> RewriteSystem::measure(const LWord& w) const {
  int ck2 = 0;
  for (const auto& r : redexes(w))
    if (r.kind == RedexKind::CK2) ++ck2;
  return {w.length(), ck2};
}

std::string RewriteSystem::to_string(const LWord& w) const {
  if (w.is_trivial()) return "e_" + quiver().vertex_name(w.anchor);
  std::string out;
  for (size_t i = 0; i < w.letters.size(); ++i) {
    if (i) out += ".";
    out += dq_.letter_name(w.letters[i]);
  }
  return out;
}

LWord RewriteSystem::parse_word(std::string_view text) const {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.rfind("e_", 0) == 0 && s.find('.') == std::string::npos) return trivial(quiver().vertex_index(s.substr(2)));
  std::vector<int> letters;
  std::stringstream ss(s);
  std::string tok;
  int col = 1;
  while (std::getline(ss, tok, '.')) {
    try {
      letters.push_back(dq_.letter_index(tok));
    } catch (const Error&) {
      throw SyntaxError(1, col, "unknown letter '" + tok + "'");
    }
    col += static_cast<int>(tok.size()) + 1;
  }
  auto w = make(std::move(letters));
  if (!w) throw Error(ErrorCode::NotComposable, "letters of '" + s + "' do not compose");
  return *w;
}

LWord RewriteSystem::star(const LWord& w) const {
  std::vector<int> letters;
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    letters.push_back(dq_.is_ghost(*it) ? dq_.real(*it) : dq_.ghost(*it));
  return *make(std::move(letters), w.anchor);
}

std::vector<LWord> RewriteSystem::graded_basis(int n, int bound) const {
  std::vector<LWord> out;
  const Quiver& q = quiver();
  for (int lq = 0; lq <= bound; ++lq) {
    const int lp = lq + n;
    if (lp < 0 || lp + lq > bound) continue;
    const auto ps = enumerate_paths(q, lp);
    const auto qs = enumerate_paths(q, lq);
    for (const auto& qq : qs)
      for (const auto& p : ps) {
        auto w = concat(ghost_path(qq), real_path(p));
        if (w && is_normal(*w)) out.push_back(*w);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<LWord> RewriteSystem::all_words(int len) const {
  std::vector<LWord> out;
  if (len == 0) {
    for (int v = 0; v < quiver().num_vertices(); ++v) out.push_back(trivial(v));
    return out;
  }
  // extend on the right (earlier-applied letters) keeping composability
  std::vector<std::vector<int>> cur;
  for (int l = 0; l < dq_.num_letters(); ++l) cur.push_back({l});
  for (int k = 1; k < len; ++k) {
    std::vector<std::vector<int>> next;
    for (const auto& w : cur)
      for (int l = 0; l < dq_.num_letters(); ++l)
        if (dq_.source(w.back()) == dq_.target(l)) {
          auto x = w;
          x.push_back(l);
          next.push_back(std::move(x));
        }
    cur = std::move(next);
  }
  for (auto& w : cur) out.push_back(*make(std::move(w)));
  return out;
}

}  // namespace qhw
