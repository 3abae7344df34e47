#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include <json.hpp>

#include "specgraph/error.hpp"
#include "specgraph/graph.hpp"
#include "specgraph/mask_search.hpp"
#include "specgraph/vertex_set.hpp"

namespace specgraph {

/// Largest vertex count any exhaustive search accepts; 2^n must fit the
/// 64-bit mask counter with room to spare.
inline constexpr std::size_t kMaskWidthLimit = 62;

/// Enumeration caps, in vertices. Exceeding a cap raises TooLarge.
struct EnumerationLimits {
  std::size_t cheeger = 22;
  std::size_t dual_cheeger = 22;
  std::size_t kappa = 20;

  /// Defaults, with SPECGRAPH_MAX_N (if set) overriding every cap.
  static EnumerationLimits from_env() {
    EnumerationLimits limits;
    if (const char* raw = std::getenv("SPECGRAPH_MAX_N")) {
      char* end = nullptr;
      const unsigned long v = std::strtoul(raw, &end, 10);
      if (end == raw || *end != '\0') throw Error(Errc::bad_parameter, "SPECGRAPH_MAX_N must be a positive integer");
      limits.cheeger = limits.dual_cheeger = limits.kappa = static_cast<std::size_t>(v);
    }
    return limits;
  }
};

struct EnumerationOptions {
  EnumerationLimits limits{};
  unsigned threads = 1;
  /// Restrict the Cheeger search to sets with connected induced subgraph.
  bool connected_only = false;
};

enum class Invariant { cheeger, dual_cheeger, kappa };

inline const char* invariant_name(Invariant k) {
  switch (k) {
    case Invariant::cheeger: return "h";
    case Invariant::dual_cheeger: return "hbar";
    case Invariant::kappa: return "kappa";
  }
  return "?";
}

/// Value of an invariant together with the set or pair attaining it.
struct InvariantReport {
  Invariant kind = Invariant::cheeger;
  double value = 0.0;
  VertexSet first;
  std::optional<VertexSet> second;
  std::uint64_t candidates_examined = 0;
};

namespace detail {

inline void require_within_cap(const WeightedGraph& g, std::size_t cap, const char* what) {
  const std::size_t limit = std::min(cap, kMaskWidthLimit);
  if (g.vertex_count() > limit) {
    throw Error(Errc::too_large, std::string(what) + " enumeration is capped at " + std::to_string(limit) +
                                     " vertices, graph has " + std::to_string(g.vertex_count()));
  }
}

/// Flat copy of the adjacency lists for the tight enumeration loops.
struct FlatGraph {
  std::size_t n = 0;
  std::vector<std::size_t> offset;
  std::vector<std::size_t> to;
  std::vector<double> w;
  std::vector<double> m;
  std::vector<std::uint64_t> nbr_mask;
  double total = 0.0;

  explicit FlatGraph(const WeightedGraph& g) : n(g.vertex_count()) {
    offset.push_back(0);
    for (std::size_t v = 0; v < n; ++v) {
      for (const Neighbor& nb : g.neighbors(v)) {
        to.push_back(nb.to);
        w.push_back(nb.w);
      }
      offset.push_back(to.size());
      m.push_back(g.measure(v));
      nbr_mask.push_back(g.neighbor_mask(v));
    }
    total = g.total_measure();
  }
};

inline bool induced_connected(const FlatGraph& fg, std::uint64_t set) {
  if (set == 0) return false;
  std::uint64_t seen = set & (~set + 1);
  std::uint64_t frontier = seen;
  while (frontier != 0) {
    std::uint64_t next = 0;
    for (std::uint64_t f = frontier; f != 0; f &= f - 1) next |= fg.nbr_mask[std::countr_zero(f)];
    next &= set & ~seen;
    seen |= next;
    frontier = next;
  }
  return seen == set;
}

inline VertexSet mask_set(std::size_t n, std::uint64_t mask) { return VertexSet::from_mask(n, mask); }

}  // namespace detail

/// h(S) = m(∂S)/m(S).
inline double cheeger_ratio(const WeightedGraph& g, const VertexSet& s) {
  const SetMeasures sm = set_measures(g, s);
  return sm.boundary / sm.volume;
}

/// Exact Cheeger constant: minimum of h(S) over nonempty S with
/// m(S) <= m(Sᶜ) (ties admitted up to 1e-12·M), by full subset enumeration.
inline InvariantReport cheeger_constant_exact(const WeightedGraph& g, const EnumerationOptions& opts = {}) {
  require_connected(g);
  detail::require_within_cap(g, opts.limits.cheeger, "Cheeger");
  const detail::FlatGraph fg(g);
  const std::size_t n = fg.n;
  const double half_slack = 1e-12 * fg.total;

  auto eval = [&](std::uint64_t s) -> std::optional<MaskScore> {
    if (opts.connected_only && !detail::induced_connected(fg, s)) return std::nullopt;
    double vol = 0.0;
    for (std::uint64_t b = s; b != 0; b &= b - 1) vol += fg.m[std::countr_zero(b)];
    if (vol > (fg.total - vol) + half_slack) return std::nullopt;
    double boundary = 0.0;
    for (std::uint64_t b = s; b != 0; b &= b - 1) {
      const std::size_t v = std::countr_zero(b);
      for (std::size_t k = fg.offset[v]; k < fg.offset[v + 1]; ++k) {
        if (!((s >> fg.to[k]) & 1u)) boundary += fg.w[k];
      }
    }
    return MaskScore{boundary / vol, 0};
  };
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  auto best = mask_extremum(1, full, Sense::minimize, eval, opts.threads);
  if (!best) throw Error(Errc::numerical_failure, "no set satisfies the half-measure condition");
  return {Invariant::cheeger, best->value, detail::mask_set(n, best->mask), std::nullopt, best->examined};
}

/// h̄(A,B) = 2·m(A,B)/(m(A) + m(B)) for disjoint nonempty A, B.
inline double dual_cheeger_ratio(const WeightedGraph& g, const VertexSet& a, const VertexSet& b) {
  detail::require_universe(g, a);
  detail::require_universe(g, b);
  if (a.empty() || b.empty()) throw Error(Errc::empty_set, "dual Cheeger ratio needs nonempty sets");
  if (a.intersects(b)) throw Error(Errc::not_disjoint, "dual Cheeger ratio needs disjoint sets");
  return 2.0 * cut_weight(g, a, b) / (volume(g, a) + volume(g, b));
}

/// Exact dual Cheeger constant: supremum of h̄(A,B) over disjoint nonempty pairs.
///
/// For each A the best partner B is found exactly: with a_v = 2·m_A(v) and
/// b_v = m(v), the ratio Σ_B a / (m(A) + Σ_B b) is maximised by a prefix of
/// the vertices outside A ordered by a_v/b_v, so only n prefixes need to
/// be scanned per A. Cost is O(2ⁿ n log n) instead of 3ⁿ.
inline InvariantReport dual_cheeger_exact(const WeightedGraph& g, const EnumerationOptions& opts = {}) {
  detail::require_within_cap(g, opts.limits.dual_cheeger, "dual Cheeger");
  const detail::FlatGraph fg(g);
  const std::size_t n = fg.n;

  auto eval = [&](std::uint64_t a_mask) -> std::optional<MaskScore> {
    std::array<double, 64> gain{};
    std::array<std::size_t, 64> order{};
    double vol_a = 0.0;
    std::size_t outside = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if ((a_mask >> v) & 1u) {
        vol_a += fg.m[v];
        continue;
      }
      double into_a = 0.0;
      for (std::size_t k = fg.offset[v]; k < fg.offset[v + 1]; ++k) {
        if ((a_mask >> fg.to[k]) & 1u) into_a += fg.w[k];
      }
      gain[v] = 2.0 * into_a;
      order[outside++] = v;
    }
    std::sort(order.begin(), order.begin() + outside, [&](std::size_t x, std::size_t y) {
      const double rx = gain[x] / fg.m[x];
      const double ry = gain[y] / fg.m[y];
      return rx != ry ? rx > ry : x < y;
    });
    double num = 0.0;
    double den = vol_a;
    double best = -1.0;
    std::uint64_t b_mask = 0;
    std::uint64_t best_b = 0;
    for (std::size_t k = 0; k < outside; ++k) {
      const std::size_t v = order[k];
      num += gain[v];
      den += fg.m[v];
      b_mask |= std::uint64_t{1} << v;
      const double ratio = num / den;
      if (ratio > best) {
        best = ratio;
        best_b = b_mask;
      }
    }
    return MaskScore{best, best_b};
  };
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  auto best = mask_extremum(1, full, Sense::maximize, eval, opts.threads);
  if (!best) throw Error(Errc::numerical_failure, "no disjoint pair found");
  return {Invariant::dual_cheeger, best->value, detail::mask_set(n, best->mask), detail::mask_set(n, best->aux),
          best->examined};
}

/// κ(A,B) = max{ sup_{v∈A} p_A(v), sup_{w∈B} p_B(w) }.
inline double kappa_partition(const WeightedGraph& g, const Partition& p) {
  if (p.universe() != g.vertex_count()) throw Error(Errc::size_mismatch, "partition universe differs from vertex count");
  double worst = 0.0;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const VertexSet& own = p.a().contains(v) ? p.a() : p.b();
    worst = std::max(worst, transition_probability(g, v, own));
  }
  return worst;
}

/// Exact κ(G,m): infimum of κ(A,B) over the 2^(n-1) - 1 partitions with vertex 0 in A.
inline InvariantReport kappa_exact(const WeightedGraph& g, const EnumerationOptions& opts = {}) {
  detail::require_within_cap(g, opts.limits.kappa, "kappa");
  const detail::FlatGraph fg(g);
  const std::size_t n = fg.n;

  auto eval = [&](std::uint64_t x) -> std::optional<MaskScore> {
    const std::uint64_t a_mask = (x << 1) | 1u;
    double worst = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      const bool side = (a_mask >> v) & 1u;
      double same = 0.0;
      for (std::size_t k = fg.offset[v]; k < fg.offset[v + 1]; ++k) {
        if ((((a_mask >> fg.to[k]) & 1u) != 0) == side) same += fg.w[k];
      }
      worst = std::max(worst, same / fg.m[v]);
    }
    return MaskScore{worst, a_mask};
  };
  const std::uint64_t partitions = (std::uint64_t{1} << (n - 1)) - 1;
  auto best = mask_extremum(0, partitions, Sense::minimize, eval, opts.threads);
  if (!best) throw Error(Errc::numerical_failure, "no partition found");
  const VertexSet a = detail::mask_set(n, best->aux);
  return {Invariant::kappa, best->value, a, a.complement(), best->examined};
}

struct Bipartition {
  bool bipartite = false;
  /// Colour class containing vertex 0 (and the lowest vertex of each other component).
  VertexSet side_a;
};

/// Breadth-first two-colouring.
inline Bipartition is_bipartite(const WeightedGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<int> colour(n, -1);
  for (std::size_t s = 0; s < n; ++s) {
    if (colour[s] != -1) continue;
    colour[s] = 0;
    std::queue<std::size_t> q;
    q.push(s);
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop();
      for (const Neighbor& nb : g.neighbors(v)) {
        if (colour[nb.to] == -1) {
          colour[nb.to] = 1 - colour[v];
          q.push(nb.to);
        } else if (colour[nb.to] == colour[v]) {
          return {false, VertexSet(n)};
        }
      }
    }
  }
  VertexSet a(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (colour[v] == 0) a.insert(v);
  }
  return {true, a};
}

/// R_A = 2·m(I(A))/m(A), which equals 1 - h(A).
inline double r_quantity(const WeightedGraph& g, const VertexSet& a) {
  const SetMeasures sm = set_measures(g, a);
  return 2.0 * sm.interior / sm.volume;
}

/// h(G,m) recomputed as 1 - sup over partitions of min{R_A, R_B}.
/// Independent of cheeger_constant_exact: no half-measure filter, interior
/// weights instead of boundary weights.
inline InvariantReport cheeger_via_partitions(const WeightedGraph& g, const EnumerationOptions& opts = {}) {
  require_connected(g);
  detail::require_within_cap(g, opts.limits.cheeger, "Cheeger");
  const detail::FlatGraph fg(g);
  const std::size_t n = fg.n;

  auto eval = [&](std::uint64_t x) -> std::optional<MaskScore> {
    const std::uint64_t a_mask = (x << 1) | 1u;
    double vol[2] = {0.0, 0.0};
    double interior2[2] = {0.0, 0.0};
    for (std::size_t v = 0; v < n; ++v) {
      const int side = ((a_mask >> v) & 1u) ? 0 : 1;
      vol[side] += fg.m[v];
      for (std::size_t k = fg.offset[v]; k < fg.offset[v + 1]; ++k) {
        const int other = ((a_mask >> fg.to[k]) & 1u) ? 0 : 1;
        if (other == side) interior2[side] += fg.w[k];
      }
    }
    // interior2 counts every internal edge from both endpoints, i.e. 2·m(I).
    const double r_min = std::min(interior2[0] / vol[0], interior2[1] / vol[1]);
    return MaskScore{r_min, a_mask};
  };
  const std::uint64_t partitions = (std::uint64_t{1} << (n - 1)) - 1;
  auto best = mask_extremum(0, partitions, Sense::maximize, eval, opts.threads);
  if (!best) throw Error(Errc::numerical_failure, "no partition found");
  const VertexSet a = detail::mask_set(n, best->aux);
  return {Invariant::cheeger, 1.0 - best->value, a, a.complement(), best->examined};
}

struct KappaDualBound {
  double hbar = 0.0;
  double kappa = 0.0;
  bool holds = false;
};

/// h̄(G,m) + κ(G,m) >= 1, checked with both sides from exact enumeration.
inline KappaDualBound kappa_dual_bound(const WeightedGraph& g, const EnumerationOptions& opts = {}) {
  KappaDualBound r;
  r.hbar = dual_cheeger_exact(g, opts).value;
  r.kappa = kappa_exact(g, opts).value;
  r.holds = r.hbar + r.kappa >= 1.0 - 1e-12;
  return r;
}

inline nlohmann::json witness_json(const WeightedGraph& g, const VertexSet& s) {
  auto out = nlohmann::json::array();
  for (std::size_t v : s.indices()) {
    if (g.labels().empty()) {
      out.push_back(v);
    } else {
      out.push_back(g.label(v));
    }
  }
  return out;
}

/// h carries one witness set; hbar and kappa carry the pair [A, B].
inline nlohmann::json to_json(const InvariantReport& r, const WeightedGraph& g) {
  nlohmann::json j;
  j["invariant"] = invariant_name(r.kind);
  j["value"] = r.value;
  if (r.second) {
    j["witness"] = nlohmann::json::array({witness_json(g, r.first), witness_json(g, *r.second)});
  } else {
    j["witness"] = witness_json(g, r.first);
  }
  j["candidates_examined"] = r.candidates_examined;
  return j;
}

}  // namespace specgraph
