#include "wlg/maxflow.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace wlg {

MaxFlow::MaxFlow(int num_nodes) : head_(num_nodes, -1) {}

void MaxFlow::add_edge(int a, int b, std::int64_t cap, std::int64_t rev_cap) {
  arcs_.push_back({b, head_[a], cap});
  head_[a] = static_cast<int>(arcs_.size()) - 1;
  arcs_.push_back({a, head_[b], rev_cap});
  head_[b] = static_cast<int>(arcs_.size()) - 1;
}

bool MaxFlow::bfs() {
  level_.assign(head_.size(), -1);
  std::deque<int> q;
  level_[source_] = 0;
  q.push_back(source_);
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int e = head_[v]; e >= 0; e = arcs_[e].next) {
      if (arcs_[e].cap > 0 && level_[arcs_[e].to] < 0) {
        level_[arcs_[e].to] = level_[v] + 1;
        q.push_back(arcs_[e].to);
      }
    }
  }
  return level_[sink_] >= 0;
}

std::int64_t MaxFlow::dfs(int v, std::int64_t limit) {
  if (v == sink_) return limit;
  std::int64_t pushed = 0;
  for (int& e = iter_[v]; e >= 0; e = arcs_[e].next) {
    int to = arcs_[e].to;
    if (arcs_[e].cap <= 0 || level_[to] != level_[v] + 1) continue;
    std::int64_t got = dfs(to, std::min(limit - pushed, arcs_[e].cap));
    if (got > 0) {
      arcs_[e].cap -= got;
      arcs_[e ^ 1].cap += got;
      pushed += got;
      if (pushed == limit) return pushed;
    }
  }
  level_[v] = -1;
  return pushed;
}

std::int64_t MaxFlow::run(int source, int sink) {
  source_ = source;
  sink_ = sink;
  std::int64_t flow = 0;
  while (bfs()) {
    iter_ = head_;
    flow += dfs(source_, std::numeric_limits<std::int64_t>::max());
  }
  return flow;
}

std::vector<std::uint8_t> MaxFlow::source_side() const {
  std::vector<std::uint8_t> mark(head_.size(), 0);
  std::deque<int> q;
  mark[source_] = 1;
  q.push_back(source_);
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int e = head_[v]; e >= 0; e = arcs_[e].next)
      if (arcs_[e].cap > 0 && !mark[arcs_[e].to]) {
        mark[arcs_[e].to] = 1;
        q.push_back(arcs_[e].to);
      }
  }
  return mark;
}

std::vector<std::uint8_t> MaxFlow::sink_reaching_side() const {
  // v reaches the sink iff some residual arc v->x leads to a reaching x;
  // walk backwards from the sink along residual arcs.
  std::vector<std::uint8_t> mark(head_.size(), 0);
  std::deque<int> q;
  mark[sink_] = 1;
  q.push_back(sink_);
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int e = head_[v]; e >= 0; e = arcs_[e].next) {
      // arc e is v->to; the paired arc (e^1) is to->v with residual cap
      int from = arcs_[e].to;
      if (arcs_[e ^ 1].cap > 0 && !mark[from]) {
        mark[from] = 1;
        q.push_back(from);
      }
    }
  }
  return mark;
}

}  // namespace wlg
