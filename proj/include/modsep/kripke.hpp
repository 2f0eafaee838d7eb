#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modsep/signature.hpp"

namespace modsep {

// Finite pointed tree model. Node 0 is the root; every other node has a parent with a smaller id.
class KripkeTree {
 public:
  struct Node {
    std::vector<std::string> valuation;  // sorted, duplicate-free
    std::vector<int> children;
    int parent = -1;
    int depth = 0;
  };

  KripkeTree();  // a single node with empty valuation
  static KripkeTree leaf(std::vector<std::string> valuation);
  static KripkeTree make(std::vector<std::string> valuation, const std::vector<KripkeTree>& children);

  int add_child(int parent, std::vector<std::string> valuation);

  int root() const { return 0; }
  std::size_t size() const { return nodes_.size(); }
  const Node& node(int v) const { return nodes_[v]; }
  const std::vector<int>& children(int v) const { return nodes_[v].children; }
  const std::vector<std::string>& valuation(int v) const { return nodes_[v].valuation; }
  bool holds(int v, const std::string& p) const;
  int depth(int v) const { return nodes_[v].depth; }
  int height() const;     // largest node depth
  int outdegree() const;  // largest number of children

  KripkeTree subtree(int v) const;
  KripkeTree prefix(int n) const;
  KripkeTree reduct(const Signature& sigma) const;
  Signature signature() const;

  // Ordered, exact structural equality.
  bool operator==(const KripkeTree& other) const;

 private:
  void copy_into(KripkeTree& target, int target_parent, int v) const;
  std::vector<Node> nodes_;
};

KripkeTree parse_tree(const std::string& text);
std::string to_string(const KripkeTree& m);

// Pairs of equal-depth nodes, grouped by depth.
struct LevelRelation {
  std::vector<std::vector<std::pair<int, int>>> levels;
  bool contains(int u, int v) const;
  std::size_t size() const;
};

// Largest (sigma,n)-bisimulation between m and m2, if it links the roots.
std::optional<LevelRelation> check_bisim(const KripkeTree& m, const KripkeTree& m2, const Signature& sigma, int n);
bool check_iso(const KripkeTree& m, const KripkeTree& m2, const Signature& sigma, int n);
bool check_graded_bisim(const KripkeTree& m, const KripkeTree& m2, const Signature& sigma, int n, int g);

// Bisimilarity quotient over all propositions and all depths.
KripkeTree quotient(const KripkeTree& m);
// Quotient of the sigma-reduct of the n-prefix.
KripkeTree quotient(const KripkeTree& m, const Signature& sigma, int n);

// Canonical string of the n-prefix of the sigma-reduct; equal iff (sigma,n)-isomorphic.
std::string iso_key(const KripkeTree& m, const Signature& sigma, int n);
// Canonical string of the quotient of the n-prefix of the sigma-reduct; equal iff (sigma,n)-bisimilar.
std::string bisim_key(const KripkeTree& m, const Signature& sigma, int n);

// Is there a functional bisimulation from n onto t (full depth, all propositions)?
bool has_functional_bisimulation(const KripkeTree& n, const KripkeTree& t);

// All trees with outdegree <= d, height <= depth, valuations within sigma, in canonical order,
// one per isomorphism class. The callback returns false to stop early.
void for_each_tree(const Signature& sigma, int d, int depth, const std::function<bool(const KripkeTree&)>& visit);
std::vector<KripkeTree> enumerate_trees(const Signature& sigma, int d, int depth, std::size_t limit);

// Duplicate child subtrees until every inner node has exactly d children.
KripkeTree full_dary_completion(const KripkeTree& m, int d);

}  // namespace modsep
