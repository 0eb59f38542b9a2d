// Copyright 2026 The evcoop Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EVCOOP_TRANSPORT_HPP
#define EVCOOP_TRANSPORT_HPP

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace evcoop {

enum class NodeKind { kCustomer, kDepot, kChargerSite };
enum class Zone { kCommercial, kIndustrial, kResidential };

struct TransportNode {
  int id = 0;
  NodeKind kind = NodeKind::kCustomer;
  std::optional<double> lat;
  std::optional<double> lon;
  std::optional<Zone> zone;

  friend bool operator==(const TransportNode&, const TransportNode&) = default;
};

struct TransportEdge {
  int from = 0;
  int to = 0;
  double distance_km = 0.0;
  int travel_steps = 1;
  bool directed = false;

  friend bool operator==(const TransportEdge&, const TransportEdge&) = default;
};

struct TransportNetwork {
  std::vector<TransportNode> nodes;
  std::vector<TransportEdge> edges;

  int node_index(int id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].id == id) return static_cast<int>(i);
    }
    return -1;
  }

  friend bool operator==(const TransportNetwork&, const TransportNetwork&) = default;
};

// All-pairs shortest paths ordered by (distance, steps). Vehicles always move
// along these paths; both quantities are path sums, so they are consistent.
struct ShortestPaths {
  int n = 0;
  std::vector<double> km;
  std::vector<int> steps;
  std::vector<int> next_edge;  // first edge on the path, -1 if none

  static constexpr double kUnreachable = std::numeric_limits<double>::infinity();

  double distance(int a, int b) const { return km[idx(a, b)]; }
  int travel_steps(int a, int b) const { return steps[idx(a, b)]; }
  bool reachable(int a, int b) const { return km[idx(a, b)] < kUnreachable; }

  // Edge indices along the path from a to b (node indices).
  std::vector<int> path_edges(const TransportNetwork& net, int a, int b) const {
    std::vector<int> out;
    while (a != b) {
      const int e = next_edge[idx(a, b)];
      if (e < 0) return {};
      out.push_back(e);
      const TransportEdge& edge = net.edges[e];
      const int from = net.node_index(edge.from);
      const int to = net.node_index(edge.to);
      a = (from == a) ? to : from;
    }
    return out;
  }

  std::size_t idx(int a, int b) const {
    return static_cast<std::size_t>(a) * n + b;
  }
};

inline ShortestPaths shortest_paths(const TransportNetwork& net) {
  ShortestPaths sp;
  sp.n = static_cast<int>(net.nodes.size());
  const std::size_t nn = static_cast<std::size_t>(sp.n) * sp.n;
  sp.km.assign(nn, ShortestPaths::kUnreachable);
  sp.steps.assign(nn, std::numeric_limits<int>::max() / 4);
  sp.next_edge.assign(nn, -1);
  for (int i = 0; i < sp.n; ++i) {
    sp.km[sp.idx(i, i)] = 0.0;
    sp.steps[sp.idx(i, i)] = 0;
  }
  auto better = [](double k1, int s1, double k2, int s2) {
    return k1 < k2 || (k1 == k2 && s1 < s2);
  };
  auto relax_edge = [&](int a, int b, int e) {
    const TransportEdge& edge = net.edges[e];
    if (a < 0 || b < 0 || a == b) return;
    const std::size_t k = sp.idx(a, b);
    if (better(edge.distance_km, edge.travel_steps, sp.km[k], sp.steps[k])) {
      sp.km[k] = edge.distance_km;
      sp.steps[k] = edge.travel_steps;
      sp.next_edge[k] = e;
    }
  };
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    const int a = net.node_index(net.edges[e].from);
    const int b = net.node_index(net.edges[e].to);
    relax_edge(a, b, static_cast<int>(e));
    if (!net.edges[e].directed) relax_edge(b, a, static_cast<int>(e));
  }
  for (int m = 0; m < sp.n; ++m) {
    for (int i = 0; i < sp.n; ++i) {
      const std::size_t im = sp.idx(i, m);
      if (sp.km[im] == ShortestPaths::kUnreachable) continue;
      for (int j = 0; j < sp.n; ++j) {
        const std::size_t mj = sp.idx(m, j);
        if (sp.km[mj] == ShortestPaths::kUnreachable) continue;
        const std::size_t ij = sp.idx(i, j);
        const double k = sp.km[im] + sp.km[mj];
        const int s = sp.steps[im] + sp.steps[mj];
        if (better(k, s, sp.km[ij], sp.steps[ij])) {
          sp.km[ij] = k;
          sp.steps[ij] = s;
          sp.next_edge[ij] = sp.next_edge[im];
        }
      }
    }
  }
  return sp;
}

}  // namespace evcoop

#endif  // EVCOOP_TRANSPORT_HPP
