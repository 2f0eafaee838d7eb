#include "modsep/kripke.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

#include "modsep/matching.hpp"

namespace modsep {

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

KripkeTree::KripkeTree() { nodes_.push_back(Node{}); }

KripkeTree KripkeTree::leaf(std::vector<std::string> valuation) {
  KripkeTree t;
  t.nodes_[0].valuation = sorted_unique(std::move(valuation));
  return t;
}

KripkeTree KripkeTree::make(std::vector<std::string> valuation, const std::vector<KripkeTree>& children) {
  KripkeTree t = leaf(std::move(valuation));
  for (const auto& c : children) c.copy_into(t, 0, 0);
  return t;
}

void KripkeTree::copy_into(KripkeTree& target, int target_parent, int v) const {
  int id = target.add_child(target_parent, nodes_[v].valuation);
  for (int c : nodes_[v].children) copy_into(target, id, c);
}

int KripkeTree::add_child(int parent, std::vector<std::string> valuation) {
  Node n;
  n.valuation = sorted_unique(std::move(valuation));
  n.parent = parent;
  n.depth = nodes_[parent].depth + 1;
  nodes_.push_back(std::move(n));
  int id = static_cast<int>(nodes_.size()) - 1;
  nodes_[parent].children.push_back(id);
  return id;
}

bool KripkeTree::holds(int v, const std::string& p) const {
  const auto& val = nodes_[v].valuation;
  return std::binary_search(val.begin(), val.end(), p);
}

int KripkeTree::height() const {
  int h = 0;
  for (const auto& n : nodes_) h = std::max(h, n.depth);
  return h;
}

int KripkeTree::outdegree() const {
  std::size_t d = 0;
  for (const auto& n : nodes_) d = std::max(d, n.children.size());
  return static_cast<int>(d);
}

KripkeTree KripkeTree::subtree(int v) const {
  KripkeTree t = leaf(nodes_[v].valuation);
  for (int c : nodes_[v].children) copy_into(t, 0, c);
  return t;
}

KripkeTree KripkeTree::prefix(int n) const {
  KripkeTree t = leaf(nodes_[0].valuation);
  std::function<void(int, int)> walk = [&](int v, int tv) {
    if (nodes_[v].depth >= n) return;
    for (int c : nodes_[v].children) walk(c, t.add_child(tv, nodes_[c].valuation));
  };
  walk(0, 0);
  return t;
}

KripkeTree KripkeTree::reduct(const Signature& sigma) const {
  KripkeTree t = *this;
  for (auto& n : t.nodes_) {
    std::vector<std::string> kept;
    for (const auto& p : n.valuation)
      if (sigma.contains(p)) kept.push_back(p);
    n.valuation = std::move(kept);
  }
  return t;
}

Signature KripkeTree::signature() const {
  std::vector<std::string> all;
  for (const auto& n : nodes_) all.insert(all.end(), n.valuation.begin(), n.valuation.end());
  return Signature(std::move(all));
}

bool KripkeTree::operator==(const KripkeTree& other) const {
  if (nodes_.size() != other.nodes_.size()) return false;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].valuation != other.nodes_[i].valuation || nodes_[i].children != other.nodes_[i].children)
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Text format: (node {a b} (node {}) ...)

namespace {

class TreeParser {
 public:
  explicit TreeParser(const std::string& s) : s_(s) {}

  KripkeTree run() {
    KripkeTree t;
    parse_node(t, -1);
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument("tree parse error: " + msg + " at position " + std::to_string(pos_));
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::string word() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return s_.substr(start, pos_ - start);
  }
  void parse_node(KripkeTree& t, int parent) {
    expect('(');
    if (word() != "node") fail("expected 'node'");
    expect('{');
    std::vector<std::string> val;
    for (;;) {
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '}') {
        ++pos_;
        break;
      }
      std::string p = word();
      if (p.empty() || !std::islower(static_cast<unsigned char>(p[0]))) fail("expected a proposition");
      val.push_back(p);
    }
    int id;
    if (parent < 0) {
      t = KripkeTree::leaf(val);
      id = 0;
    } else {
      id = t.add_child(parent, val);
    }
    for (;;) {
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == ')') {
        ++pos_;
        return;
      }
      parse_node(t, id);
    }
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

void print_tree(const KripkeTree& m, int v, std::string& out) {
  out += "(node {";
  const auto& val = m.valuation(v);
  for (std::size_t i = 0; i < val.size(); ++i) {
    if (i) out += ' ';
    out += val[i];
  }
  out += '}';
  for (int c : m.children(v)) {
    out += ' ';
    print_tree(m, c, out);
  }
  out += ')';
}

}  // namespace

KripkeTree parse_tree(const std::string& text) { return TreeParser(text).run(); }

std::string to_string(const KripkeTree& m) {
  std::string out;
  print_tree(m, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Bisimulation and isomorphism

bool LevelRelation::contains(int u, int v) const {
  for (const auto& level : levels)
    for (const auto& pr : level)
      if (pr.first == u && pr.second == v) return true;
  return false;
}

std::size_t LevelRelation::size() const {
  std::size_t s = 0;
  for (const auto& l : levels) s += l.size();
  return s;
}

namespace {

std::vector<std::vector<int>> nodes_by_depth(const KripkeTree& m, int n) {
  std::vector<std::vector<int>> out(n + 1);
  for (int v = 0; v < static_cast<int>(m.size()); ++v)
    if (m.depth(v) <= n) out[m.depth(v)].push_back(v);
  return out;
}

// related[u][v] for the largest relation satisfying the level conditions.
template <class ChildCondition>
std::vector<std::vector<char>> largest_level_relation(const KripkeTree& m, const KripkeTree& m2, const Signature& sigma,
                                                      int n, ChildCondition&& children_ok) {
  std::vector<std::vector<char>> rel(m.size(), std::vector<char>(m2.size(), 0));
  auto by1 = nodes_by_depth(m, n);
  auto by2 = nodes_by_depth(m2, n);
  std::vector<Letter> l1(m.size()), l2(m2.size());
  for (std::size_t v = 0; v < m.size(); ++v) l1[v] = letter_of(m.valuation(static_cast<int>(v)), sigma);
  for (std::size_t v = 0; v < m2.size(); ++v) l2[v] = letter_of(m2.valuation(static_cast<int>(v)), sigma);
  for (int j = n; j >= 0; --j) {
    for (int u : by1[j])
      for (int v : by2[j]) {
        if (l1[u] != l2[v]) continue;
        if (j < n && !children_ok(u, v, rel)) continue;
        rel[u][v] = 1;
      }
  }
  return rel;
}

}  // namespace

std::optional<LevelRelation> check_bisim(const KripkeTree& m, const KripkeTree& m2, const Signature& sigma, int n) {
  auto rel = largest_level_relation(m, m2, sigma, n, [&](int u, int v, const std::vector<std::vector<char>>& r) {
    for (int cu : m.children(u)) {
      bool found = false;
      for (int cv : m2.children(v)) found = found || r[cu][cv];
      if (!found) return false;
    }
    for (int cv : m2.children(v)) {
      bool found = false;
      for (int cu : m.children(u)) found = found || r[cu][cv];
      if (!found) return false;
    }
    return true;
  });
  if (!rel[0][0]) return std::nullopt;
  LevelRelation out;
  out.levels.resize(n + 1);
  for (int u = 0; u < static_cast<int>(m.size()); ++u)
    for (int v = 0; v < static_cast<int>(m2.size()); ++v)
      if (rel[u][v]) out.levels[m.depth(u)].emplace_back(u, v);
  return out;
}

namespace {

void iso_string(const KripkeTree& m, int v, const Signature& sigma, int h, std::string& out) {
  out += '(';
  out += std::to_string(letter_of(m.valuation(v), sigma));
  if (h > 0) {
    std::vector<std::string> kids;
    for (int c : m.children(v)) {
      std::string k;
      iso_string(m, c, sigma, h - 1, k);
      kids.push_back(std::move(k));
    }
    std::sort(kids.begin(), kids.end());
    for (auto& k : kids) out += k;
  }
  out += ')';
}

void bisim_string(const KripkeTree& m, int v, const Signature& sigma, int h, std::string& out) {
  out += '(';
  out += std::to_string(letter_of(m.valuation(v), sigma));
  if (h > 0) {
    std::vector<std::string> kids;
    for (int c : m.children(v)) {
      std::string k;
      bisim_string(m, c, sigma, h - 1, k);
      kids.push_back(std::move(k));
    }
    std::sort(kids.begin(), kids.end());
    kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
    for (auto& k : kids) out += k;
  }
  out += ')';
}

}  // namespace

std::string iso_key(const KripkeTree& m, const Signature& sigma, int n) {
  std::string out;
  iso_string(m, 0, sigma, n, out);
  return out;
}

std::string bisim_key(const KripkeTree& m, const Signature& sigma, int n) {
  std::string out;
  bisim_string(m, 0, sigma, n, out);
  return out;
}

bool check_iso(const KripkeTree& m, const KripkeTree& m2, const Signature& sigma, int n) {
  return iso_key(m, sigma, n) == iso_key(m2, sigma, n);
}

namespace {

// Every set of min(g, |from|) children of `from` can be matched injectively into related children of `to`.
bool graded_side_ok(const std::vector<int>& from, const std::vector<int>& to, int g,
                    const std::function<bool(int, int)>& related) {
  int c = static_cast<int>(from.size());
  int k = std::min(g, c);
  if (k == 0) return true;
  if (c > 20) throw std::invalid_argument("graded bisimulation check limited to 20 children");
  for (unsigned mask = 0; mask < (1u << c); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    std::vector<std::vector<int>> adj;
    for (int i = 0; i < c; ++i) {
      if (!(mask & (1u << i))) continue;
      std::vector<int> row;
      for (int j = 0; j < static_cast<int>(to.size()); ++j)
        if (related(from[i], to[j])) row.push_back(j);
      adj.push_back(std::move(row));
    }
    if (max_matching(adj, static_cast<int>(to.size())) < k) return false;
  }
  return true;
}

}  // namespace

bool check_graded_bisim(const KripkeTree& m, const KripkeTree& m2, const Signature& sigma, int n, int g) {
  auto rel = largest_level_relation(m, m2, sigma, n, [&](int u, int v, const std::vector<std::vector<char>>& r) {
    auto fwd = [&](int a, int b) { return r[a][b] != 0; };
    auto bwd = [&](int b, int a) { return r[a][b] != 0; };
    return graded_side_ok(m.children(u), m2.children(v), g, fwd) &&
           graded_side_ok(m2.children(v), m.children(u), g, bwd);
  });
  return rel[0][0] != 0;
}

// ---------------------------------------------------------------------------
// Quotients

namespace {

KripkeTree quotient_impl(const KripkeTree& m, const Signature* sigma, int n) {
  // class keys computed bottom-up; keys double as canonical order
  std::vector<std::string> key(m.size());
  auto val = [&](int v) {
    if (!sigma) return m.valuation(v);
    std::vector<std::string> out;
    for (const auto& p : m.valuation(v))
      if (sigma->contains(p)) out.push_back(p);
    return out;
  };
  for (int v = static_cast<int>(m.size()) - 1; v >= 0; --v) {
    std::string k = "(";
    for (const auto& p : val(v)) k += p + " ";
    std::vector<std::string> kids;
    if (m.depth(v) < n)
      for (int c : m.children(v)) kids.push_back(key[c]);
    std::sort(kids.begin(), kids.end());
    kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
    for (auto& c : kids) k += c;
    key[v] = k + ")";
  }
  KripkeTree out = KripkeTree::leaf(val(0));
  std::function<void(int, int)> build = [&](int v, int ov) {
    if (m.depth(v) >= n) return;
    std::map<std::string, int> reps;
    for (int c : m.children(v)) reps.emplace(key[c], c);
    for (auto& [k, c] : reps) build(c, out.add_child(ov, val(c)));
  };
  build(0, 0);
  return out;
}

}  // namespace

KripkeTree quotient(const KripkeTree& m) { return quotient_impl(m, nullptr, m.height()); }

KripkeTree quotient(const KripkeTree& m, const Signature& sigma, int n) { return quotient_impl(m, &sigma, n); }

bool has_functional_bisimulation(const KripkeTree& n, const KripkeTree& t) {
  // ok[u][v]: the subtree of u maps onto the subtree of v
  std::vector<std::vector<char>> ok(n.size(), std::vector<char>(t.size(), 0));
  for (int u = static_cast<int>(n.size()) - 1; u >= 0; --u) {
    for (int v = static_cast<int>(t.size()) - 1; v >= 0; --v) {
      if (n.depth(u) != t.depth(v) || n.valuation(u) != t.valuation(v)) continue;
      const auto& cu = n.children(u);
      const auto& cv = t.children(v);
      if (cu.empty() != cv.empty()) continue;
      bool every_u_has_image = true;
      for (int a : cu) {
        bool any = false;
        for (int b : cv) any = any || ok[a][b];
        every_u_has_image = every_u_has_image && any;
      }
      if (!every_u_has_image) continue;
      std::vector<std::vector<int>> adj(cv.size());
      for (std::size_t j = 0; j < cv.size(); ++j)
        for (std::size_t i = 0; i < cu.size(); ++i)
          if (ok[cu[i]][cv[j]]) adj[j].push_back(static_cast<int>(i));
      if (max_matching(adj, static_cast<int>(cu.size())) != static_cast<int>(cv.size())) continue;
      ok[u][v] = 1;
    }
  }
  return ok[0][0] != 0;
}

// ---------------------------------------------------------------------------
// Enumeration

void for_each_tree(const Signature& sigma, int d, int depth, const std::function<bool(const KripkeTree&)>& visit) {
  if (sigma.size() > 16) throw std::invalid_argument("signature too large to enumerate");
  const Letter letters = Letter{1} << sigma.size();
  std::vector<KripkeTree> prev;
  for (Letter c = 0; c < letters; ++c) prev.push_back(KripkeTree::leaf(valuation_of(c, sigma)));
  if (depth == 0 || d == 0) {
    for (const auto& t : prev)
      if (!visit(t)) return;
    return;
  }
  for (int h = 1; h <= depth; ++h) {
    bool last = h == depth;
    std::vector<KripkeTree> cur;
    bool stop = false;
    for (Letter c = 0; c < letters && !stop; ++c) {
      auto val = valuation_of(c, sigma);
      for (int k = 0; k <= d && !stop; ++k) {
        std::vector<int> idx(k, 0);
        for (;;) {
          std::vector<KripkeTree> kids;
          for (int i : idx) kids.push_back(prev[i]);
          KripkeTree t = KripkeTree::make(val, kids);
          if (last) {
            if (!visit(t)) {
              stop = true;
              break;
            }
          } else {
            cur.push_back(std::move(t));
          }
          // next non-decreasing sequence
          int pos = k - 1;
          while (pos >= 0 && idx[pos] == static_cast<int>(prev.size()) - 1) --pos;
          if (pos < 0) break;
          ++idx[pos];
          for (int q = pos + 1; q < k; ++q) idx[q] = idx[pos];
        }
      }
    }
    if (last) return;
    prev = std::move(cur);
  }
}

std::vector<KripkeTree> enumerate_trees(const Signature& sigma, int d, int depth, std::size_t limit) {
  std::vector<KripkeTree> out;
  if (limit == 0) return out;
  for_each_tree(sigma, d, depth, [&](const KripkeTree& t) {
    out.push_back(t);
    return out.size() < limit;
  });
  return out;
}

KripkeTree full_dary_completion(const KripkeTree& m, int d) {
  if (m.outdegree() > d) throw std::invalid_argument("tree exceeds the requested outdegree");
  std::function<KripkeTree(int)> build = [&](int v) {
    std::vector<KripkeTree> kids;
    for (int c : m.children(v)) kids.push_back(build(c));
    while (!kids.empty() && static_cast<int>(kids.size()) < d) kids.push_back(kids.back());
    return KripkeTree::make(m.valuation(v), kids);
  };
  return build(0);
}

}  // namespace modsep
