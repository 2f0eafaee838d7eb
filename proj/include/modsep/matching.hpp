#pragma once

#include <functional>
#include <vector>

namespace modsep {

// Maximum bipartite matching (augmenting paths). adj[l] lists right vertices for left vertex l.
// Returns the matching size; match_right[r] is the matched left vertex or -1.
inline int max_matching(const std::vector<std::vector<int>>& adj, int right_count, std::vector<int>* match_right = nullptr) {
  std::vector<int> mr(right_count, -1);
  std::vector<char> seen;
  std::function<bool(int)> augment = [&](int l) {
    for (int r : adj[l]) {
      if (seen[r]) continue;
      seen[r] = 1;
      if (mr[r] < 0 || augment(mr[r])) {
        mr[r] = l;
        return true;
      }
    }
    return false;
  };
  int size = 0;
  for (int l = 0; l < static_cast<int>(adj.size()); ++l) {
    seen.assign(right_count, 0);
    if (augment(l)) ++size;
  }
  if (match_right) *match_right = std::move(mr);
  return size;
}

// Perfect matching between two equally sized sides given a compatibility predicate.
template <class Compatible>
bool has_perfect_matching(int n, Compatible&& ok) {
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (ok(i, j)) adj[i].push_back(j);
  for (const auto& a : adj)
    if (a.empty()) return false;
  return max_matching(adj, n) == n;
}

}  // namespace modsep
