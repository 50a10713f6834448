#pragma once

#include <cstdint>
#include <vector>

namespace wlg {

// Dinic max-flow on int64 capacities. Arc order is insertion order and the
// algorithm is deterministic, so identical inputs give identical flows and
// identical residual reachability.
class MaxFlow {
 public:
  explicit MaxFlow(int num_nodes);

  // adds arc a->b with capacity cap and the reverse arc with rev_cap
  void add_edge(int a, int b, std::int64_t cap, std::int64_t rev_cap = 0);

  std::int64_t run(int source, int sink);

  // cells reachable from the source in the residual graph (minimal cut side)
  std::vector<std::uint8_t> source_side() const;
  // cells that can still reach the sink; the complement is the maximal cut side
  std::vector<std::uint8_t> sink_reaching_side() const;

  int num_nodes() const { return static_cast<int>(head_.size()); }

 private:
  struct Arc {
    int to;
    int next;
    std::int64_t cap;
  };
  std::vector<Arc> arcs_;
  std::vector<int> head_;
  std::vector<int> level_;
  std::vector<int> iter_;
  int source_ = -1, sink_ = -1;

  bool bfs();
  std::int64_t dfs(int v, std::int64_t limit);
};

}  // namespace wlg
