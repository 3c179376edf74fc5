#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace msbench::mol::graph {

struct Edge {
  int u;
  int v;
};

struct Incidence {
  int neighbor;
  int edge;
};

inline std::vector<std::vector<Incidence>> incidence_lists(int vertex_count,
                                                           std::span<const Edge> edges) {
  std::vector<std::vector<Incidence>> adj(static_cast<std::size_t>(vertex_count));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    adj[edges[e].u].push_back({edges[e].v, static_cast<int>(e)});
    adj[edges[e].v].push_back({edges[e].u, static_cast<int>(e)});
  }
  return adj;
}

// Marks every edge that lies on a cycle, i.e. every edge that is not a bridge.
// Iterative Tarjan low-link; assumes a simple graph.
inline std::vector<bool> cycle_edges(int vertex_count, std::span<const Edge> edges) {
  const auto adj = incidence_lists(vertex_count, edges);
  std::vector<int> disc(static_cast<std::size_t>(vertex_count), -1);
  std::vector<int> low(static_cast<std::size_t>(vertex_count), 0);
  std::vector<bool> on_cycle(edges.size(), true);
  int timer = 0;

  struct Frame {
    int vertex;
    int parent_edge;
    std::size_t next;
  };
  std::vector<Frame> stack;
  for (int root = 0; root < vertex_count; ++root) {
    if (disc[root] != -1) continue;
    disc[root] = low[root] = timer++;
    stack.push_back({root, -1, 0});
    while (!stack.empty()) {
      Frame& top = stack.back();
      const int u = top.vertex;
      if (top.next < adj[u].size()) {
        const Incidence inc = adj[u][top.next++];
        if (inc.edge == top.parent_edge) continue;
        if (disc[inc.neighbor] == -1) {
          disc[inc.neighbor] = low[inc.neighbor] = timer++;
          stack.push_back({inc.neighbor, inc.edge, 0});
        } else {
          low[u] = std::min(low[u], disc[inc.neighbor]);
        }
      } else {
        const int parent_edge = top.parent_edge;
        stack.pop_back();
        if (!stack.empty()) {
          const int p = stack.back().vertex;
          low[p] = std::min(low[p], low[u]);
          if (low[u] > disc[p]) on_cycle[parent_edge] = false;
        }
      }
    }
  }
  return on_cycle;
}

// Component label per vertex, labels numbered in order of their lowest vertex.
inline std::vector<int> connected_components(int vertex_count, std::span<const Edge> edges,
                                             int* component_count = nullptr) {
  const auto adj = incidence_lists(vertex_count, edges);
  std::vector<int> label(static_cast<std::size_t>(vertex_count), -1);
  int next = 0;
  std::vector<int> stack;
  for (int s = 0; s < vertex_count; ++s) {
    if (label[s] != -1) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (const Incidence& inc : adj[u]) {
        if (label[inc.neighbor] == -1) {
          label[inc.neighbor] = next;
          stack.push_back(inc.neighbor);
        }
      }
    }
    ++next;
  }
  if (component_count != nullptr) *component_count = next;
  return label;
}

}  // namespace msbench::mol::graph
