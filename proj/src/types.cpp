#include "modsep/types.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace modsep {

namespace {

struct Item {
  int key = 0;                // interned type string
  std::vector<char> truth;    // per subformula
  Letter letter = 0;          // over the full signature
  std::vector<int> kids;      // items one level down
};

// What a parent needs to know about a bag of children.
struct Bag {
  std::vector<int> keys;    // sorted, unique
  std::vector<int> counts;  // per modal subformula, capped
  int size = 0;
  bool operator==(const Bag&) const = default;
};

struct BagHash {
  std::size_t operator()(const Bag& b) const {
    std::size_t h = static_cast<std::size_t>(b.size);
    for (int k : b.keys) h = h * 1000003u + static_cast<std::size_t>(k);
    for (int c : b.counts) h = h * 31u + static_cast<std::size_t>(c);
    return h;
  }
};

class TypeTable {
 public:
  TypeTable(const Formula& phi, const Signature& sigma, int d, Budget& budget)
      : sigma_(sigma), full_(signature_of(phi).unite(sigma)), d_(d), budget_(budget) {
    collect(phi);
    for (std::size_t i = 0; i < subs_.size(); ++i)
      if (subs_[i].is_modal()) {
        modal_index_[i] = static_cast<int>(modal_.size());
        modal_.push_back(static_cast<int>(i));
      }
    if (full_.size() > 16) throw std::invalid_argument("signature too large for type enumeration");
  }

  int root_index() const { return static_cast<int>(subs_.size()) - 1; }

  // All items of height <= h, given those of height <= h-1 (empty for h == 0).
  std::vector<Item> level(const std::vector<Item>& below) {
    std::vector<Bag> bags{Bag{{}, std::vector<int>(modal_.size(), 0), 0}};
    std::vector<std::pair<int, int>> origin{{-1, -1}};  // (previous bag, added item)
    std::unordered_map<Bag, int, BagHash> seen{{bags[0], 0}};
    for (std::size_t b = 0; b < bags.size(); ++b) {
      if (d_ >= 0 && bags[b].size >= d_) continue;
      for (std::size_t i = 0; i < below.size(); ++i) {
        budget_.charge();
        Bag next = bags[b];
        auto it = std::lower_bound(next.keys.begin(), next.keys.end(), below[i].key);
        if (it == next.keys.end() || *it != below[i].key) next.keys.insert(it, below[i].key);
        for (std::size_t m = 0; m < modal_.size(); ++m) {
          const Formula& f = subs_[modal_[m]];
          bool hit = below[i].truth[index_.at(f.body())] != 0;
          if (f.kind() == Kind::Box) hit = !hit;
          int cap = f.kind() == Kind::Dia ? f.grade() : f.grade() + 1;
          if (hit) next.counts[m] = std::min(cap, next.counts[m] + 1);
        }
        if (d_ >= 0) next.size += 1;
        if (seen.emplace(next, static_cast<int>(bags.size())).second) {
          bags.push_back(std::move(next));
          origin.emplace_back(static_cast<int>(b), static_cast<int>(i));
        }
      }
    }

    std::vector<Item> out;
    std::map<std::pair<int, std::vector<char>>, int> dedup;
    const Letter letters = Letter{1} << full_.size();
    for (std::size_t b = 0; b < bags.size(); ++b) {
      std::vector<int> kids;
      for (int at = static_cast<int>(b); origin[at].first >= 0; at = origin[at].first) kids.push_back(origin[at].second);
      std::string tail;
      for (int k : bags[b].keys) tail += ' ' + keys_[k];
      for (Letter c = 0; c < letters; ++c) {
        budget_.charge();
        Item item;
        item.letter = c;
        item.kids = kids;
        item.truth = evaluate(c, bags[b]);
        Letter visible = project_letter(c, full_, sigma_);
        item.key = intern("(" + std::to_string(visible) + tail + ")");
        if (dedup.emplace(std::make_pair(item.key, item.truth), static_cast<int>(out.size())).second)
          out.push_back(std::move(item));
      }
    }
    return out;
  }

  const std::string& key_string(int k) const { return keys_[k]; }
  const Signature& full() const { return full_; }

 private:
  void collect(const Formula& f) {
    if (index_.count(f)) return;
    switch (f.kind()) {
      case Kind::Mu:
      case Kind::Nu:
      case Kind::Var:
        throw std::invalid_argument("type enumeration needs a modal formula");
      case Kind::Not:
        throw std::invalid_argument("type enumeration needs a normalized formula");
      default:
        break;
    }
    for (const auto& a : f.args()) collect(a);
    index_[f] = static_cast<int>(subs_.size());
    subs_.push_back(f);
  }

  std::vector<char> evaluate(Letter c, const Bag& bag) const {
    std::vector<char> v(subs_.size(), 0);
    for (std::size_t i = 0; i < subs_.size(); ++i) {
      const Formula& f = subs_[i];
      switch (f.kind()) {
        case Kind::True:
          v[i] = 1;
          break;
        case Kind::False:
          break;
        case Kind::Prop:
          v[i] = (((c >> full_.index_of(f.name())) & 1u) != 0) != f.negated();
          break;
        case Kind::And:
          v[i] = std::all_of(f.args().begin(), f.args().end(), [&](const Formula& a) { return v[index_.at(a)] != 0; });
          break;
        case Kind::Or:
          v[i] = std::any_of(f.args().begin(), f.args().end(), [&](const Formula& a) { return v[index_.at(a)] != 0; });
          break;
        case Kind::Dia:
          v[i] = bag.counts[modal_index_.at(i)] >= f.grade();
          break;
        case Kind::Box:
          v[i] = bag.counts[modal_index_.at(i)] <= f.grade();
          break;
        default:
          break;
      }
    }
    return v;
  }

  int intern(const std::string& s) {
    auto [it, fresh] = key_ids_.emplace(s, static_cast<int>(keys_.size()));
    if (fresh) keys_.push_back(s);
    return it->second;
  }

  Signature sigma_;
  Signature full_;
  int d_;
  Budget& budget_;
  std::vector<Formula> subs_;  // children before parents, root last
  std::unordered_map<Formula, int, FormulaHash> index_;
  std::vector<int> modal_;
  std::unordered_map<std::size_t, int> modal_index_;
  std::unordered_map<std::string, int> key_ids_;
  std::vector<std::string> keys_;
};

}  // namespace

std::map<std::string, KripkeTree> realized_types(const Formula& phi, const Signature& sigma, int n, int d,
                                                 Budget& budget) {
  Formula f = is_normalized(phi) ? phi : normalize(phi);
  if (modal_depth(f) > n) throw std::invalid_argument("modal depth exceeds the type depth");
  TypeTable table(f, sigma, d, budget);
  std::vector<std::vector<Item>> levels;
  levels.push_back(table.level({}));
  for (int h = 1; h <= n; ++h) levels.push_back(table.level(levels.back()));

  std::function<KripkeTree(int, int)> build = [&](int h, int i) {
    const Item& item = levels[h][i];
    std::vector<KripkeTree> kids;
    for (int k : item.kids) kids.push_back(build(h - 1, k));
    return KripkeTree::make(valuation_of(item.letter, table.full()), kids);
  };
  std::map<std::string, KripkeTree> out;
  const int root = table.root_index();
  for (std::size_t i = 0; i < levels[n].size(); ++i) {
    const Item& item = levels[n][i];
    if (!item.truth[root]) continue;
    const std::string& key = table.key_string(item.key);
    if (!out.count(key)) out.emplace(key, build(n, static_cast<int>(i)));
  }
  return out;
}

}  // namespace modsep
