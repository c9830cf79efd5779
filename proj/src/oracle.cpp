#include "fomlab/oracle.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace fomlab {

namespace {

OracleResult from_mate(const std::vector<int>& mate) {
  OracleResult r;
  for (int v = 0; v < static_cast<int>(mate.size()); ++v) {
    if (mate[v] > v) r.witness.emplace_back(v, mate[v]);
  }
  r.size = static_cast<int>(r.witness.size());
  return r;
}

// Edmonds' algorithm with explicit blossom bases. For each free root a BFS
// grows an alternating forest; odd cycles are contracted by relabelling
// their vertices' base to the cycle's lowest common ancestor.
class Blossom {
 public:
  explicit Blossom(const Instance& g)
      : g_(g), n_(g.size()), mate_(n_, -1), parent_(n_), base_(n_), used_(n_), in_blossom_(n_) {}

  std::vector<int> solve() {
    // Greedy warm start shortens the augmenting phase.
    for (int v = 0; v < n_; ++v) {
      if (mate_[v] != -1) continue;
      for (int u : g_.neighbors(v)) {
        if (mate_[u] == -1) {
          mate_[u] = v;
          mate_[v] = u;
          break;
        }
      }
    }
    for (int v = 0; v < n_; ++v) {
      if (mate_[v] != -1) continue;
      const int end = find_path(v);
      for (int x = end; x != -1;) {
        const int px = parent_[x];
        const int next = mate_[px];
        mate_[x] = px;
        mate_[px] = x;
        x = next;
      }
    }
    return mate_;
  }

 private:
  int lca(int a, int b) {
    std::vector<bool> seen(n_, false);
    for (;;) {
      a = base_[a];
      seen[a] = true;
      if (mate_[a] == -1) break;
      a = parent_[mate_[a]];
    }
    for (;;) {
      b = base_[b];
      if (seen[b]) return b;
      b = parent_[mate_[b]];
    }
  }

  void mark_path(int v, int b, int child) {
    while (base_[v] != b) {
      in_blossom_[base_[v]] = in_blossom_[base_[mate_[v]]] = true;
      parent_[v] = child;
      child = mate_[v];
      v = parent_[mate_[v]];
    }
  }

  int find_path(int root) {
    std::fill(used_.begin(), used_.end(), false);
    std::fill(parent_.begin(), parent_.end(), -1);
    for (int i = 0; i < n_; ++i) base_[i] = i;
    used_[root] = true;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int to : g_.neighbors(v)) {
        if (base_[v] == base_[to] || mate_[v] == to) continue;
        if (to == root || (mate_[to] != -1 && parent_[mate_[to]] != -1)) {
          const int cur = lca(v, to);
          std::fill(in_blossom_.begin(), in_blossom_.end(), false);
          mark_path(v, cur, to);
          mark_path(to, cur, v);
          for (int i = 0; i < n_; ++i) {
            if (in_blossom_[base_[i]]) {
              base_[i] = cur;
              if (!used_[i]) {
                used_[i] = true;
                q.push(i);
              }
            }
          }
        } else if (parent_[to] == -1) {
          parent_[to] = v;
          if (mate_[to] == -1) return to;
          used_[mate_[to]] = true;
          q.push(mate_[to]);
        }
      }
    }
    return -1;
  }

  const Instance& g_;
  int n_;
  std::vector<int> mate_, parent_, base_;
  std::vector<bool> used_, in_blossom_;
};

class BruteForce {
 public:
  explicit BruteForce(const Instance& g) : g_(g), used_(g.size(), false) {
    edges_.assign(g.edges().begin(), g.edges().end());
  }

  std::vector<Edge> solve() {
    branch(0);
    return best_;
  }

 private:
  void branch(std::size_t i) {
    if (current_.size() > best_.size()) best_ = current_;
    if (i == edges_.size()) return;
    // Even taking every remaining edge cannot beat the incumbent.
    const std::size_t cap = std::min(edges_.size() - i, (g_.size() - 2 * current_.size()) / 2);
    if (current_.size() + cap <= best_.size()) return;
    const auto [a, b] = edges_[i];
    if (!used_[a] && !used_[b]) {
      used_[a] = used_[b] = true;
      current_.emplace_back(std::min(a, b), std::max(a, b));
      branch(i + 1);
      current_.pop_back();
      used_[a] = used_[b] = false;
    }
    branch(i + 1);
  }

  const Instance& g_;
  std::vector<Edge> edges_;
  std::vector<bool> used_;
  std::vector<Edge> current_, best_;
};

}  // namespace

OracleResult max_matching_bipartite(const Instance& instance) {
  if (!instance.bipartition()) throw Error(ErrorCode::NotBipartite, "instance carries no bipartition witness");
  const auto& side = *instance.bipartition();
  const int n = instance.size();
  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> mate(n, -1), dist(n, kInf);

  const auto bfs = [&] {
    std::queue<int> q;
    bool found = false;
    for (int v = 0; v < n; ++v) {
      if (side[v] != 0) continue;
      if (mate[v] == -1) {
        dist[v] = 0;
        q.push(v);
      } else {
        dist[v] = kInf;
      }
    }
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int u : instance.neighbors(v)) {
        const int w = mate[u];
        if (w == -1) {
          found = true;
        } else if (dist[w] == kInf) {
          dist[w] = dist[v] + 1;
          q.push(w);
        }
      }
    }
    return found;
  };

  // Iterative DFS over the layered graph.
  std::vector<int> it(n, 0);
  const auto dfs = [&](int root) {
    std::vector<int> stack{root};
    while (!stack.empty()) {
      const int v = stack.back();
      const auto nb = instance.neighbors(v);
      bool advanced = false;
      while (it[v] < static_cast<int>(nb.size())) {
        const int u = nb[it[v]];
        const int w = mate[u];
        if (w == -1) {
          // Augment along the stack.
          int free_u = u;
          for (auto s = stack.rbegin(); s != stack.rend(); ++s) {
            const int x = *s;
            const int prev = mate[x];
            mate[x] = free_u;
            mate[free_u] = x;
            free_u = prev;
          }
          return true;
        }
        if (dist[w] == dist[v] + 1) {
          stack.push_back(w);
          advanced = true;
          break;
        }
        ++it[v];
      }
      if (!advanced) {
        dist[v] = kInf;
        stack.pop_back();
        if (!stack.empty()) ++it[stack.back()];
      }
    }
    return false;
  };

  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    for (int v = 0; v < n; ++v) {
      if (side[v] == 0 && mate[v] == -1) dfs(v);
    }
  }
  return from_mate(mate);
}

OracleResult max_matching_general(const Instance& instance) { return from_mate(Blossom(instance).solve()); }

OracleResult max_matching_bruteforce(const Instance& instance) {
  if (instance.edges().size() > static_cast<std::size_t>(kBruteforceEdgeLimit)) {
    throw Error(ErrorCode::TooLarge, std::to_string(instance.edges().size()) + " edges exceeds the brute-force limit of " +
                                         std::to_string(kBruteforceEdgeLimit));
  }
  OracleResult r;
  r.witness = BruteForce(instance).solve();
  std::sort(r.witness.begin(), r.witness.end());
  r.size = static_cast<int>(r.witness.size());
  return r;
}

OracleResult max_matching(const Instance& instance) {
  return instance.bipartition() ? max_matching_bipartite(instance) : max_matching_general(instance);
}

bool is_valid_matching(const Instance& instance, const std::vector<Edge>& pairs) {
  std::vector<bool> used(instance.size(), false);
  for (const auto& [a, b] : pairs) {
    if (!instance.has_edge(a, b)) return false;
    if (used[a] || used[b]) return false;
    used[a] = used[b] = true;
  }
  return true;
}

}  // namespace fomlab
