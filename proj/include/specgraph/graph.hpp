#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "specgraph/error.hpp"
#include "specgraph/vertex_set.hpp"

namespace specgraph {

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double w = 0.0;
};

struct Neighbor {
  std::size_t to = 0;
  double w = 0.0;
};

/// Real function on the vertices; its length must equal the vertex count.
using VertexFunction = std::vector<double>;

/// Finite weighted graph without loops, multi-edges, or isolated vertices.
///
/// The vertex measure m(v) is the sum of incident edge weights and is
/// computed once at construction. Instances are immutable.
class WeightedGraph {
 public:
  /// Validates and builds a graph. The vertex count is the larger of the
  /// label count and one past the largest index, unless given explicitly.
  static WeightedGraph build(std::span<const Edge> edges, std::vector<std::string> labels = {},
                             std::optional<std::size_t> vertex_count = std::nullopt) {
    std::size_t n = labels.size();
    for (const Edge& e : edges) n = std::max(n, std::max(e.u, e.v) + 1);
    if (vertex_count) {
      if (*vertex_count < n) {
        throw Error(Errc::vertex_out_of_range, "edge endpoint or label beyond the declared vertex count");
      }
      n = *vertex_count;
    }
    if (n == 0) throw Error(Errc::bad_parameter, "graph has no vertices");
    if (!labels.empty() && labels.size() != n) {
      throw Error(Errc::size_mismatch, "label count differs from vertex count");
    }

    WeightedGraph g;
    g.n_ = n;
    g.labels_ = std::move(labels);
    g.edges_.assign(edges.begin(), edges.end());
    g.adjacency_.resize(n);
    g.measure_.assign(n, 0.0);
    for (const Edge& e : g.edges_) {
      if (e.u == e.v) throw Error(Errc::self_loop, "self-loop at vertex " + std::to_string(e.u));
      if (!(e.w > 0.0) || !std::isfinite(e.w)) {
        throw Error(Errc::nonpositive_weight, "edge weights must be positive and finite");
      }
      g.adjacency_[e.u].push_back({e.v, e.w});
      g.adjacency_[e.v].push_back({e.u, e.w});
      g.measure_[e.u] += e.w;
      g.measure_[e.v] += e.w;
      g.total_edge_weight_ += e.w;
    }
    for (std::size_t v = 0; v < n; ++v) {
      auto& adj = g.adjacency_[v];
      std::sort(adj.begin(), adj.end(), [](const Neighbor& a, const Neighbor& b) { return a.to < b.to; });
      for (std::size_t k = 1; k < adj.size(); ++k) {
        if (adj[k].to == adj[k - 1].to) {
          throw Error(Errc::duplicate_edge,
                      "duplicate edge " + std::to_string(v) + "-" + std::to_string(adj[k].to));
        }
      }
      if (adj.empty()) throw Error(Errc::isolated_vertex, "vertex " + std::to_string(v) + " has no edges");
      g.total_measure_ += g.measure_[v];
    }
    if (n <= 64) {
      g.neighbor_masks_.assign(n, 0);
      for (std::size_t v = 0; v < n; ++v) {
        for (const Neighbor& nb : g.adjacency_[v]) g.neighbor_masks_[v] |= std::uint64_t{1} << nb.to;
      }
    }
    return g;
  }

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const Neighbor> neighbors(std::size_t v) const { return adjacency_.at(v); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::string label(std::size_t v) const { return labels_.empty() ? std::to_string(v) : labels_.at(v); }

  double measure(std::size_t v) const { return measure_.at(v); }
  std::span<const double> measures() const noexcept { return measure_; }
  /// M = Σ_v m(v), equal to twice the total edge weight.
  double total_measure() const noexcept { return total_measure_; }
  double total_edge_weight() const noexcept { return total_edge_weight_; }

  /// Weight of edge uv, or 0 when u and v are not adjacent.
  double weight(std::size_t u, std::size_t v) const {
    const auto& adj = adjacency_.at(u);
    auto it = std::lower_bound(adj.begin(), adj.end(), v,
                               [](const Neighbor& nb, std::size_t target) { return nb.to < target; });
    return (it != adj.end() && it->to == v) ? it->w : 0.0;
  }

  /// Adjacency bitmask of v; only available when the graph has at most 64 vertices.
  std::uint64_t neighbor_mask(std::size_t v) const {
    if (neighbor_masks_.empty()) throw Error(Errc::too_large, "neighbor masks need at most 64 vertices");
    return neighbor_masks_.at(v);
  }

  bool is_complete() const noexcept { return edges_.size() == n_ * (n_ - 1) / 2; }

 private:
  WeightedGraph() = default;

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::string> labels_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<double> measure_;
  std::vector<std::uint64_t> neighbor_masks_;
  double total_measure_ = 0.0;
  double total_edge_weight_ = 0.0;
};

inline WeightedGraph build_graph(std::span<const Edge> edges, std::vector<std::string> labels = {}) {
  return WeightedGraph::build(edges, std::move(labels));
}

inline WeightedGraph build_graph(std::initializer_list<Edge> edges, std::vector<std::string> labels = {}) {
  return WeightedGraph::build(std::span<const Edge>(edges.begin(), edges.size()), std::move(labels));
}

namespace detail {

inline void require_size(const WeightedGraph& g, std::span<const double> f) {
  if (f.size() != g.vertex_count()) throw Error(Errc::size_mismatch, "vertex function length differs from vertex count");
}

inline void require_universe(const WeightedGraph& g, const VertexSet& s) {
  if (s.universe() != g.vertex_count()) throw Error(Errc::size_mismatch, "vertex set universe differs from vertex count");
}

}  // namespace detail

/// m(S), m(∂S) and m(I(S)) for a vertex set S.
struct SetMeasures {
  double volume = 0.0;
  double boundary = 0.0;
  double interior = 0.0;
};

inline SetMeasures set_measures(const WeightedGraph& g, const VertexSet& s) {
  detail::require_universe(g, s);
  if (s.empty()) throw Error(Errc::empty_set, "set measures need a nonempty set");
  SetMeasures out;
  for (std::size_t v : s.indices()) out.volume += g.measure(v);
  for (const Edge& e : g.edges()) {
    const bool in_u = s.contains(e.u);
    const bool in_v = s.contains(e.v);
    if (in_u && in_v) {
      out.interior += e.w;
    } else if (in_u != in_v) {
      out.boundary += e.w;
    }
  }
  return out;
}

/// Total weight of edges with one endpoint in a and the other in b.
inline double cut_weight(const WeightedGraph& g, const VertexSet& a, const VertexSet& b) {
  detail::require_universe(g, a);
  detail::require_universe(g, b);
  double total = 0.0;
  for (const Edge& e : g.edges()) {
    if ((a.contains(e.u) && b.contains(e.v)) || (a.contains(e.v) && b.contains(e.u))) total += e.w;
  }
  return total;
}

inline double volume(const WeightedGraph& g, const VertexSet& s) {
  detail::require_universe(g, s);
  double total = 0.0;
  for (std::size_t v : s.indices()) total += g.measure(v);
  return total;
}

/// (Pf)(v) = Σ_{w~v} m(vw)/m(v) · f(w).
inline VertexFunction apply_random_walk(const WeightedGraph& g, std::span<const double> f) {
  detail::require_size(g, f);
  VertexFunction out(g.vertex_count(), 0.0);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    double acc = 0.0;
    for (const Neighbor& nb : g.neighbors(v)) acc += nb.w * f[nb.to];
    out[v] = acc / g.measure(v);
  }
  return out;
}

/// (Δf)(v) = f(v) - Σ_{w~v} m(vw)/m(v) · f(w).
inline VertexFunction apply_laplacian(const WeightedGraph& g, std::span<const double> f) {
  VertexFunction pf = apply_random_walk(g, f);
  for (std::size_t v = 0; v < pf.size(); ++v) pf[v] = f[v] - pf[v];
  return pf;
}

/// Inner product of L²(G, m).
inline double inner(const WeightedGraph& g, std::span<const double> f, std::span<const double> h) {
  detail::require_size(g, f);
  detail::require_size(g, h);
  double acc = 0.0;
  for (std::size_t v = 0; v < f.size(); ++v) acc += g.measure(v) * f[v] * h[v];
  return acc;
}

inline double norm_squared(const WeightedGraph& g, std::span<const double> f) { return inner(g, f, f); }

/// Σ_{vw∈E} m(vw)(f(v) - f(w))², which equals <Δf, f>.
inline double dirichlet_form(const WeightedGraph& g, std::span<const double> f) {
  detail::require_size(g, f);
  double acc = 0.0;
  for (const Edge& e : g.edges()) {
    const double d = f[e.u] - f[e.v];
    acc += e.w * d * d;
  }
  return acc;
}

/// Σ_{vw∈E} m(vw)(f(v) + f(w))², which equals <(2I - Δ)f, f>.
inline double q_form(const WeightedGraph& g, std::span<const double> f) {
  detail::require_size(g, f);
  double acc = 0.0;
  for (const Edge& e : g.edges()) {
    const double s = f[e.u] + f[e.v];
    acc += e.w * s * s;
  }
  return acc;
}

/// m_S(v) = Σ_{w∈S} m(vw).
inline double weight_into(const WeightedGraph& g, std::size_t v, const VertexSet& s) {
  detail::require_universe(g, s);
  double acc = 0.0;
  for (const Neighbor& nb : g.neighbors(v)) {
    if (s.contains(nb.to)) acc += nb.w;
  }
  return acc;
}

/// p_S(v) = m_S(v)/m(v): probability that one random-walk step from v lands in S.
inline double transition_probability(const WeightedGraph& g, std::size_t v, const VertexSet& s) {
  if (v >= g.vertex_count()) throw Error(Errc::vertex_out_of_range, "vertex index out of range");
  return weight_into(g, v, s) / g.measure(v);
}

/// Component index of every vertex, numbered in order of first appearance.
inline std::vector<std::size_t> component_labels(const WeightedGraph& g) {
  constexpr std::size_t unseen = static_cast<std::size_t>(-1);
  std::vector<std::size_t> comp(g.vertex_count(), unseen);
  std::size_t next = 0;
  for (std::size_t s = 0; s < g.vertex_count(); ++s) {
    if (comp[s] != unseen) continue;
    std::queue<std::size_t> q;
    q.push(s);
    comp[s] = next;
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop();
      for (const Neighbor& nb : g.neighbors(v)) {
        if (comp[nb.to] == unseen) {
          comp[nb.to] = next;
          q.push(nb.to);
        }
      }
    }
    ++next;
  }
  return comp;
}

inline std::size_t component_count(const WeightedGraph& g) {
  const auto comp = component_labels(g);
  return comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
}

inline bool is_connected(const WeightedGraph& g) { return component_count(g) == 1; }

inline void require_connected(const WeightedGraph& g) {
  if (!is_connected(g)) throw Error(Errc::disconnected_graph, "operation needs a connected graph");
}

/// FNV-1a over the vertex count and the edge list, weights by bit pattern.
inline std::uint64_t graph_fingerprint(const WeightedGraph& g) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
      h ^= (x >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(g.vertex_count());
  for (const Edge& e : g.edges()) {
    mix(e.u);
    mix(e.v);
    mix(std::bit_cast<std::uint64_t>(e.w));
  }
  return h;
}

}  // namespace specgraph
