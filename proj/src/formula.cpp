#include "modsep/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "modsep/kripke.hpp"

namespace modsep {

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

}  // namespace

Formula::Formula() : Formula(make(Kind::True, "", false, 0, {})) {}

Formula Formula::make(Kind k, std::string name, bool negated, int grade, std::vector<Formula> args) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->name = std::move(name);
  n->negated = negated;
  n->grade = grade;
  n->args = std::move(args);
  std::size_t h = static_cast<std::size_t>(k) * 1315423911u;
  h = mix(h, std::hash<std::string>{}(n->name));
  h = mix(h, n->negated ? 7 : 3);
  h = mix(h, static_cast<std::size_t>(n->grade));
  for (const auto& a : n->args) h = mix(h, a.hash());
  n->hash = h;
  return Formula(std::move(n));
}

bool Formula::operator==(const Formula& o) const {
  if (node_ == o.node_) return true;
  if (hash() != o.hash() || kind() != o.kind() || negated() != o.negated() || grade() != o.grade() ||
      name() != o.name() || args().size() != o.args().size())
    return false;
  for (std::size_t i = 0; i < args().size(); ++i)
    if (args()[i] != o.args()[i]) return false;
  return true;
}

Formula Formula::top() {
  static const Formula t = make(Kind::True, "", false, 0, {});
  return t;
}
Formula Formula::bottom() {
  static const Formula f = make(Kind::False, "", false, 0, {});
  return f;
}
Formula Formula::prop(std::string name, bool negated) { return make(Kind::Prop, std::move(name), negated, 0, {}); }
Formula Formula::var(std::string name) { return make(Kind::Var, std::move(name), false, 0, {}); }
Formula Formula::neg(Formula f) { return make(Kind::Not, "", false, 0, {std::move(f)}); }

Formula Formula::conj(std::vector<Formula> fs) {
  std::vector<Formula> flat;
  for (auto& f : fs) {
    if (f.kind() == Kind::And)
      flat.insert(flat.end(), f.args().begin(), f.args().end());
    else
      flat.push_back(std::move(f));
  }
  if (flat.empty()) return top();
  if (flat.size() == 1) return flat.front();
  return make(Kind::And, "", false, 0, std::move(flat));
}

Formula Formula::disj(std::vector<Formula> fs) {
  std::vector<Formula> flat;
  for (auto& f : fs) {
    if (f.kind() == Kind::Or)
      flat.insert(flat.end(), f.args().begin(), f.args().end());
    else
      flat.push_back(std::move(f));
  }
  if (flat.empty()) return bottom();
  if (flat.size() == 1) return flat.front();
  return make(Kind::Or, "", false, 0, std::move(flat));
}

Formula Formula::dia(Formula f, int grade) {
  if (grade < 1) throw std::invalid_argument("diamond grade must be at least 1");
  return make(Kind::Dia, "", false, grade, {std::move(f)});
}
Formula Formula::box(Formula f, int grade) {
  if (grade < 0) throw std::invalid_argument("box grade must be non-negative");
  return make(Kind::Box, "", false, grade, {std::move(f)});
}
Formula Formula::mu(std::string v, Formula body) { return make(Kind::Mu, std::move(v), false, 0, {std::move(body)}); }
Formula Formula::nu(std::string v, Formula body) { return make(Kind::Nu, std::move(v), false, 0, {std::move(body)}); }

Formula Formula::nabla(const std::vector<Formula>& fs) {
  std::vector<Formula> parts;
  for (const auto& f : fs) parts.push_back(dia(f));
  parts.push_back(box(disj(fs)));
  return conj(std::move(parts));
}

Formula Formula::dia_power(Formula f, int k) {
  for (int i = 0; i < k; ++i) f = dia(std::move(f));
  return f;
}
Formula Formula::box_power(Formula f, int k) {
  for (int i = 0; i < k; ++i) f = box(std::move(f));
  return f;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  Formula run() {
    Formula f = binder_level(false);
    skip_ws();
    if (pos_ != s_.size()) throw ParseError("unexpected input '" + std::string(1, s_[pos_]) + "'", pos_);
    return f;
  }

 private:
  struct Binding {
    std::string name;
    bool parity;
  };

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(const std::string& tok) {
    skip_ws();
    return s_.compare(pos_, tok.size(), tok) == 0;
  }
  bool accept(const std::string& tok) {
    if (peek(tok)) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(const std::string& tok) {
    if (!accept(tok)) throw ParseError("expected '" + tok + "'", pos_);
  }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
  bool keyword_ahead(const std::string& kw) {
    skip_ws();
    if (s_.compare(pos_, kw.size(), kw) != 0) return false;
    std::size_t end = pos_ + kw.size();
    return end >= s_.size() || !ident_char(s_[end]);
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    return s_.substr(start, pos_ - start);
  }
  int number() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError("expected a number", pos_);
    if (pos_ - start > 6) throw ParseError("number too large", start);
    return std::stoi(s_.substr(start, pos_ - start));
  }

  Formula binder_level(bool parity) {
    if (keyword_ahead("mu") || keyword_ahead("nu")) {
      bool is_mu = s_[pos_] == 'm';
      pos_ += 2;
      skip_ws();
      std::size_t at = pos_;
      std::string v = ident();
      if (v.empty() || !std::isupper(static_cast<unsigned char>(v[0])))
        throw ParseError("expected an uppercase variable after binder", at);
      expect(".");
      bound_.push_back({v, parity});
      Formula body = binder_level(parity);
      bound_.pop_back();
      return is_mu ? Formula::mu(v, body) : Formula::nu(v, body);
    }
    return or_level(parity);
  }

  Formula or_level(bool parity) {
    std::vector<Formula> parts{and_level(parity)};
    while (accept("|")) parts.push_back(and_level(parity));
    return parts.size() == 1 ? parts.front() : Formula::disj(std::move(parts));
  }

  Formula and_level(bool parity) {
    std::vector<Formula> parts{unary(parity)};
    while (accept("&")) parts.push_back(unary(parity));
    return parts.size() == 1 ? parts.front() : Formula::conj(std::move(parts));
  }

  Formula unary(bool parity) {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    if (accept("~")) {
      Formula operand = unary(!parity);
      if (operand.kind() == Kind::Prop) return Formula::prop(operand.name(), !operand.negated());
      return Formula::neg(operand);
    }
    if (accept("<>")) return Formula::dia(unary(parity));
    if (accept("[]")) return Formula::box(unary(parity));
    if (peek("<")) {
      ++pos_;
      std::size_t at = pos_;
      int g = number();
      expect(">");
      if (g < 1) throw ParseError("diamond grade must be at least 1", at);
      return Formula::dia(unary(parity), g);
    }
    if (peek("[")) {
      ++pos_;
      int g = number();
      expect("]");
      return Formula::box(unary(parity), g);
    }
    if (accept("(")) {
      Formula f = binder_level(parity);
      expect(")");
      return f;
    }
    if (keyword_ahead("mu") || keyword_ahead("nu")) return binder_level(parity);
    std::size_t at = pos_;
    std::string id = ident();
    if (id.empty()) throw ParseError("unexpected character '" + std::string(1, s_[at]) + "'", at);
    if (id == "true") return Formula::top();
    if (id == "false") return Formula::bottom();
    if (id == "THETA_INF") return theta_inf();
    if (id == "THETA_D") {
      expect("(");
      int d = number();
      expect(")");
      return theta_d(d);
    }
    if (std::islower(static_cast<unsigned char>(id[0]))) return Formula::prop(id);
    if (std::isupper(static_cast<unsigned char>(id[0]))) {
      for (auto it = bound_.rbegin(); it != bound_.rend(); ++it) {
        if (it->name != id) continue;
        if (it->parity != parity) throw ParseError("variable " + id + " occurs negatively", at);
        return Formula::var(id);
      }
      throw ParseError("unbound variable " + id, at);
    }
    throw ParseError("bad identifier " + id, at);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  std::vector<Binding> bound_;
};

int precedence(const Formula& f) {
  switch (f.kind()) {
    case Kind::Mu:
    case Kind::Nu:
      return 0;
    case Kind::Or:
      return 1;
    case Kind::And:
      return 2;
    default:
      return 3;
  }
}

void print(const Formula& f, std::string& out);

void print_operand(const Formula& f, int min_prec, std::string& out) {
  if (precedence(f) < min_prec) {
    out += '(';
    print(f, out);
    out += ')';
  } else {
    print(f, out);
  }
}

void print(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Kind::True:
      out += "true";
      break;
    case Kind::False:
      out += "false";
      break;
    case Kind::Prop:
      if (f.negated()) out += '~';
      out += f.name();
      break;
    case Kind::Var:
      out += f.name();
      break;
    case Kind::Not:
      out += '~';
      print_operand(f.body(), 3, out);
      break;
    case Kind::And:
    case Kind::Or: {
      const char* sep = f.kind() == Kind::And ? " & " : " | ";
      int p = f.kind() == Kind::And ? 3 : 2;
      for (std::size_t i = 0; i < f.args().size(); ++i) {
        if (i) out += sep;
        print_operand(f.args()[i], p, out);
      }
      break;
    }
    case Kind::Dia:
      out += f.grade() == 1 ? "<>" : "<" + std::to_string(f.grade()) + ">";
      print_operand(f.body(), 3, out);
      break;
    case Kind::Box:
      out += f.grade() == 0 ? "[]" : "[" + std::to_string(f.grade()) + "]";
      print_operand(f.body(), 3, out);
      break;
    case Kind::Mu:
    case Kind::Nu:
      out += f.kind() == Kind::Mu ? "mu " : "nu ";
      out += f.name();
      out += ". ";
      print(f.body(), out);
      break;
  }
}

}  // namespace

Formula parse_formula(const std::string& text) { return Parser(text).run(); }

std::string to_string(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Normal form

namespace {

struct Renamer {
  std::set<std::string> used;
  std::vector<std::pair<std::string, std::string>> scope;

  std::string fresh(const std::string& base) {
    if (!used.count(base)) {
      used.insert(base);
      return base;
    }
    for (int k = 1;; ++k) {
      std::string cand = base + "_" + std::to_string(k);
      if (!used.count(cand)) {
        used.insert(cand);
        return cand;
      }
    }
  }
  const std::string& lookup(const std::string& v) const {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (it->first == v) return it->second;
    throw std::invalid_argument("unbound variable " + v);
  }
};

Formula nnf(const Formula& f, bool neg, Renamer& r) {
  switch (f.kind()) {
    case Kind::True:
      return neg ? Formula::bottom() : Formula::top();
    case Kind::False:
      return neg ? Formula::top() : Formula::bottom();
    case Kind::Prop:
      return Formula::prop(f.name(), f.negated() != neg);
    case Kind::Not:
      return nnf(f.body(), !neg, r);
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> parts;
      for (const auto& a : f.args()) parts.push_back(nnf(a, neg, r));
      bool as_and = (f.kind() == Kind::And) != neg;
      return as_and ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
    }
    case Kind::Dia:
      return neg ? Formula::box(nnf(f.body(), true, r), f.grade() - 1) : Formula::dia(nnf(f.body(), false, r), f.grade());
    case Kind::Box:
      return neg ? Formula::dia(nnf(f.body(), true, r), f.grade() + 1) : Formula::box(nnf(f.body(), false, r), f.grade());
    case Kind::Var:
      return Formula::var(r.lookup(f.name()));
    case Kind::Mu:
    case Kind::Nu: {
      std::string nv = r.fresh(f.name());
      r.scope.emplace_back(f.name(), nv);
      Formula body = nnf(f.body(), neg, r);
      r.scope.pop_back();
      bool as_mu = (f.kind() == Kind::Mu) != neg;
      return as_mu ? Formula::mu(nv, body) : Formula::nu(nv, body);
    }
  }
  return f;
}

}  // namespace

Formula normalize(const Formula& f) {
  Renamer r;
  return nnf(f, false, r);
}

bool is_normalized(const Formula& f) {
  std::set<std::string> names;
  bool ok = true;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g.kind() == Kind::Not) ok = false;
    if (g.is_binder() && !names.insert(g.name()).second) ok = false;
    for (const auto& a : g.args()) walk(a);
  };
  walk(f);
  return ok;
}

// ---------------------------------------------------------------------------
// Metrics

int modal_depth(const Formula& f) {
  int d = 0;
  for (const auto& a : f.args()) d = std::max(d, modal_depth(a));
  return f.is_modal() ? d + 1 : d;
}

Signature signature_of(const Formula& f) {
  std::vector<std::string> names;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g.kind() == Kind::Prop) names.push_back(g.name());
    for (const auto& a : g.args()) walk(a);
  };
  walk(f);
  return Signature(std::move(names));
}

std::size_t formula_size(const Formula& f) { return to_string(f).size(); }

Metrics metrics(const Formula& f) { return Metrics{modal_depth(f), signature_of(f), formula_size(f)}; }

bool is_modal_logic(const Formula& f) {
  if (f.is_binder() || f.kind() == Kind::Var) return false;
  for (const auto& a : f.args())
    if (!is_modal_logic(a)) return false;
  return true;
}

bool is_graded(const Formula& f) {
  if (f.kind() == Kind::Dia && f.grade() != 1) return true;
  if (f.kind() == Kind::Box && f.grade() != 0) return true;
  for (const auto& a : f.args())
    if (is_graded(a)) return true;
  return false;
}

int max_grade(const Formula& f) {
  int g = 1;
  if (f.kind() == Kind::Dia) g = f.grade();
  if (f.kind() == Kind::Box) g = f.grade() + 1;
  for (const auto& a : f.args()) g = std::max(g, max_grade(a));
  return g;
}

int witness_degree(const Formula& f) {
  std::unordered_set<Formula, FormulaHash> seen;
  int total = 0;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (!seen.insert(g).second) return;
    if (g.kind() == Kind::Dia) total += g.grade();
    for (const auto& a : g.args()) walk(a);
  };
  walk(normalize(f));
  return std::max(total, 1);
}

Formula flatten(const Formula& f) {
  switch (f.kind()) {
    case Kind::Dia:
      return Formula::dia(flatten(f.body()), 1);
    case Kind::Box:
      return Formula::box(flatten(f.body()), 0);
    case Kind::Not:
      return Formula::neg(flatten(f.body()));
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> parts;
      for (const auto& a : f.args()) parts.push_back(flatten(a));
      return f.kind() == Kind::And ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
    }
    case Kind::Mu:
      return Formula::mu(f.name(), flatten(f.body()));
    case Kind::Nu:
      return Formula::nu(f.name(), flatten(f.body()));
    default:
      return f;
  }
}

// ---------------------------------------------------------------------------
// Simplification

namespace {

bool occurs_free(const Formula& f, const std::string& v) {
  if (f.kind() == Kind::Var) return f.name() == v;
  if (f.is_binder() && f.name() == v) return false;
  for (const auto& a : f.args())
    if (occurs_free(a, v)) return true;
  return false;
}

bool is_literal_negation(const Formula& a, const Formula& b) {
  return a.kind() == Kind::Prop && b.kind() == Kind::Prop && a.name() == b.name() && a.negated() != b.negated();
}

bool contains_operand(const Formula& container, Kind k, const Formula& item) {
  if (container.kind() != k) return false;
  for (const auto& a : container.args())
    if (a == item) return true;
  return false;
}

// b is the negation of a up to negation normal form.
bool complementary(const Formula& a, const Formula& b) {
  if (a.kind() == Kind::Not) return a.body() == b;
  if (b.kind() == Kind::Not) return b.body() == a;
  switch (a.kind()) {
    case Kind::Prop:
      return is_literal_negation(a, b);
    case Kind::True:
      return b.kind() == Kind::False;
    case Kind::False:
      return b.kind() == Kind::True;
    case Kind::Dia:
      return b.kind() == Kind::Box && b.grade() == a.grade() - 1 && complementary(a.body(), b.body());
    case Kind::Box:
      return b.kind() == Kind::Dia && a.grade() == b.grade() - 1 && complementary(a.body(), b.body());
    case Kind::And:
    case Kind::Or: {
      if (b.kind() != (a.kind() == Kind::And ? Kind::Or : Kind::And) || a.args().size() != b.args().size()) return false;
      std::vector<char> used(b.args().size(), 0);
      for (const auto& x : a.args()) {
        bool found = false;
        for (std::size_t j = 0; j < b.args().size() && !found; ++j)
          if (!used[j] && complementary(x, b.args()[j])) used[j] = 1, found = true;
        if (!found) return false;
      }
      return true;
    }
    default:
      return false;
  }
}

using SimplifyCache = std::unordered_map<Formula, Formula, FormulaHash>;
Formula simplify_rec(const Formula& f, SimplifyCache& cache);

// Conjuncts of f as a list (f itself unless it is a conjunction).
std::vector<Formula> conjuncts(const Formula& f) {
  if (f.kind() == Kind::And) return f.args();
  if (f.kind() == Kind::True) return {};
  return {f};
}

// x & p | x & ~p = x. Returns the merged disjunct when a and b differ only in one complementary conjunct.
std::optional<Formula> resolve(const Formula& a, const Formula& b) {
  std::vector<Formula> left = conjuncts(a), right = conjuncts(b);
  if (left.size() != right.size()) return std::nullopt;
  std::vector<Formula> only_left, common;
  for (const auto& x : left) {
    if (std::find(right.begin(), right.end(), x) != right.end()) common.push_back(x);
    else only_left.push_back(x);
  }
  if (only_left.size() != 1 || common.size() + 1 != right.size()) return std::nullopt;
  const Formula& lit = only_left.front();
  if (std::none_of(right.begin(), right.end(), [&](const Formula& r) { return complementary(lit, r); }))
    return std::nullopt;
  return Formula::conj(std::move(common));
}

Formula simplify_junction(const Formula& f, SimplifyCache& cache) {
  bool is_and = f.kind() == Kind::And;
  Kind self = f.kind();
  Kind dual = is_and ? Kind::Or : Kind::And;
  std::vector<Formula> parts;
  for (const auto& a : f.args()) {
    Formula s = simplify_rec(a, cache);
    if (s.kind() == self) {
      parts.insert(parts.end(), s.args().begin(), s.args().end());
    } else {
      parts.push_back(s);
    }
  }
  const Formula unit = is_and ? Formula::top() : Formula::bottom();
  const Formula zero = is_and ? Formula::bottom() : Formula::top();
  std::vector<std::pair<std::string, Formula>> keyed;
  std::unordered_set<Formula, FormulaHash> seen;
  for (auto& p : parts) {
    if (p == unit) continue;
    if (p == zero) return zero;
    if (seen.insert(p).second) keyed.emplace_back(to_string(p), p);
  }
  for (std::size_t i = 0; i < keyed.size(); ++i)
    for (std::size_t j = i + 1; j < keyed.size(); ++j)
      if (is_literal_negation(keyed[i].second, keyed[j].second)) return zero;
  if (is_and) {
    // <k>true is implied by any other diamond of grade >= k.
    std::erase_if(keyed, [&](const auto& entry) {
      const Formula& x = entry.second;
      if (x.kind() != Kind::Dia || x.body().kind() != Kind::True) return false;
      return std::any_of(keyed.begin(), keyed.end(), [&](const auto& other) {
        const Formula& y = other.second;
        return y.kind() == Kind::Dia && y.grade() >= x.grade() && y.body().kind() != Kind::True;
      });
    });
  } else {
    for (std::size_t i = 0; i < keyed.size(); ++i)
      for (std::size_t j = i + 1; j < keyed.size(); ++j)
        if (auto merged = resolve(keyed[i].second, keyed[j].second)) {
          std::vector<Formula> rest;
          for (std::size_t k = 0; k < keyed.size(); ++k)
            if (k != i && k != j) rest.push_back(keyed[k].second);
          rest.push_back(*merged);
          return simplify_rec(Formula::disj(std::move(rest)), cache);
        }
  }
  // absorption: x & (x | y) = x, x | (x & y) = x
  std::vector<std::pair<std::string, Formula>> kept;
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    bool absorbed = false;
    for (std::size_t j = 0; j < keyed.size() && !absorbed; ++j)
      if (i != j && contains_operand(keyed[i].second, dual, keyed[j].second)) absorbed = true;
    if (!absorbed) kept.push_back(keyed[i]);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Formula> out;
  for (auto& k : kept) out.push_back(k.second);
  return is_and ? Formula::conj(std::move(out)) : Formula::disj(std::move(out));
}

Formula simplify_rec(const Formula& f, SimplifyCache& cache) {
  if (auto it = cache.find(f); it != cache.end()) return it->second;
  Formula out = [&]() -> Formula {
  switch (f.kind()) {
    case Kind::Not: {
      Formula b = simplify_rec(f.body(), cache);
      if (b.kind() == Kind::True) return Formula::bottom();
      if (b.kind() == Kind::False) return Formula::top();
      if (b.kind() == Kind::Prop) return Formula::prop(b.name(), !b.negated());
      if (b.kind() == Kind::Not) return b.body();
      return Formula::neg(b);
    }
    case Kind::And:
    case Kind::Or:
      return simplify_junction(f, cache);
    case Kind::Dia: {
      Formula b = simplify_rec(f.body(), cache);
      if (b.kind() == Kind::False) return Formula::bottom();
      return Formula::dia(b, f.grade());
    }
    case Kind::Box: {
      Formula b = simplify_rec(f.body(), cache);
      if (b.kind() == Kind::True) return Formula::top();
      return Formula::box(b, f.grade());
    }
    case Kind::Mu:
    case Kind::Nu: {
      Formula b = simplify_rec(f.body(), cache);
      if (!occurs_free(b, f.name())) return b;
      return f.kind() == Kind::Mu ? Formula::mu(f.name(), b) : Formula::nu(f.name(), b);
    }
    default:
      return f;
  }
  }();
  cache.emplace(f, out);
  return out;
}

}  // namespace

Formula simplify(const Formula& f) {
  SimplifyCache cache;
  return simplify_rec(f, cache);
}

// ---------------------------------------------------------------------------
// Characteristic formulas, named formulas, gadgets

Formula letter_formula(Letter c, const Signature& sigma) {
  std::vector<Formula> lits;
  for (std::size_t i = 0; i < sigma.size(); ++i) lits.push_back(Formula::prop(sigma[i], !(c & (Letter{1} << i))));
  return Formula::conj(std::move(lits));
}

namespace {

Formula hintikka(const KripkeTree& m, int v, const Signature& sigma, int h) {
  std::vector<Formula> parts;
  for (const auto& p : sigma) parts.push_back(Formula::prop(p, !m.holds(v, p)));
  if (h > 0) {
    std::vector<Formula> kids;
    std::unordered_set<Formula, FormulaHash> seen;
    for (int c : m.children(v)) {
      Formula k = hintikka(m, c, sigma, h - 1);
      if (seen.insert(k).second) kids.push_back(k);
    }
    std::sort(kids.begin(), kids.end(), [](const Formula& a, const Formula& b) { return to_string(a) < to_string(b); });
    for (const auto& k : kids) parts.push_back(Formula::dia(k));
    parts.push_back(Formula::box(Formula::disj(kids)));
  }
  return Formula::conj(std::move(parts));
}

}  // namespace

Formula characteristic_formula(const KripkeTree& m, const Signature& sigma, int n) {
  return simplify(hintikka(m, m.root(), sigma, n));
}

Formula theta_inf() { return Formula::nu("X", Formula::dia(Formula::var("X"))); }

Formula theta_d(int d) {
  return Formula::nu("X", Formula::conj(Formula::box(Formula::var("X")), Formula::box(Formula::bottom(), d)));
}

GadgetPair gadget(int i) {
  if (i < 0) throw std::invalid_argument("gadget index must be non-negative");
  const Formula a = Formula::prop("a");
  const Formula not_a = Formula::prop("a", true);
  Formula left = a;
  Formula right = a;
  for (int k = 0; k < i; ++k) {
    // step k builds index k+1 from index k
    std::string bname = "b" + std::to_string(k);
    Formula b = Formula::prop(bname);
    Formula not_b = Formula::prop(bname, true);
    std::vector<Formula> keep_b, keep_not_b, keep_not_a;
    for (int j = 0; j < k; ++j) {
      keep_b.push_back(Formula::box_power(b, j));
      keep_not_b.push_back(Formula::box_power(not_b, j));
      keep_not_a.push_back(Formula::box_power(not_a, j));
    }
    Formula inner = Formula::conj({left, Formula::disj(not_b, Formula::conj(keep_b)),
                                   Formula::disj(b, Formula::conj(keep_not_b))});
    Formula next_left = Formula::conj({Formula::dia(Formula::conj(a, b)), Formula::dia(Formula::conj(a, not_b)),
                                       Formula::box(Formula::disj(not_a, inner))});
    const Formula c = Formula::prop("c");
    const Formula not_c = Formula::prop("c", true);
    Formula next_right = Formula::conj({Formula::dia(Formula::conj({not_a, Formula::conj(keep_not_a), c})),
                                        Formula::dia(Formula::conj({not_a, Formula::conj(keep_not_a), not_c})),
                                        Formula::dia(Formula::conj(a, right))});
    left = next_left;
    right = next_right;
  }
  return {left, right};
}

}  // namespace modsep
