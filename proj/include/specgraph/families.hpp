#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "specgraph/complete_graph.hpp"
#include "specgraph/error.hpp"
#include "specgraph/graph.hpp"

namespace specgraph {

enum class Family { complete_unit, cycle, path, halfline_m3, halfline_m4, ladder_L, K_m1, K_m2 };

inline constexpr Family kAllFamilies[] = {Family::complete_unit, Family::cycle,    Family::path,
                                          Family::halfline_m3,   Family::halfline_m4, Family::ladder_L,
                                          Family::K_m1,          Family::K_m2};

inline std::string_view family_name(Family f) {
  switch (f) {
    case Family::complete_unit: return "complete_unit";
    case Family::cycle: return "cycle";
    case Family::path: return "path";
    case Family::halfline_m3: return "halfline_m3";
    case Family::halfline_m4: return "halfline_m4";
    case Family::ladder_L: return "ladder_L";
    case Family::K_m1: return "K_m1";
    case Family::K_m2: return "K_m2";
  }
  return "?";
}

inline Family parse_family(std::string_view name) {
  for (Family f : kAllFamilies) {
    if (family_name(f) == name) return f;
  }
  throw Error(Errc::bad_parameter, "unknown family '" + std::string(name) + "'");
}

/// A named example graph with its size and parameters.
///
/// size means: vertex count for complete_unit, cycle, path, K_m1 and K_m2;
/// edge count (vertices 0..N) for the half-lines; largest index for the
/// ladder (vertices v0..vN and w1..wN).
struct FamilySpec {
  Family family = Family::complete_unit;
  std::size_t size = 4;
  double r = 0.5;
  double rho = 0.5;
  std::optional<PSequence> p{};
  bool renormalize = false;

  void validate() const {
    const auto need = [&](std::size_t lo) {
      if (size < lo) {
        throw Error(Errc::bad_parameter,
                    std::string(family_name(family)) + " needs size >= " + std::to_string(lo));
      }
    };
    switch (family) {
      case Family::complete_unit: need(2); break;
      case Family::cycle: need(3); break;
      case Family::path: need(2); break;
      case Family::halfline_m3: need(1); break;
      case Family::halfline_m4:
        need(1);
        if (!(r > 0.0 && r < 1.0)) throw Error(Errc::bad_parameter, "r must lie in (0, 1)");
        break;
      case Family::ladder_L:
        need(1);
        if (!(r > 0.0 && r < 1.0)) throw Error(Errc::bad_parameter, "r must lie in (0, 1)");
        if (!(rho > 0.0 && rho <= r)) throw Error(Errc::bad_parameter, "rho must lie in (0, r]");
        break;
      case Family::K_m1:
        need(2);
        if (!p) throw Error(Errc::bad_parameter, "K_m1 needs a weight sequence p");
        break;
      case Family::K_m2: need(2); break;
    }
  }
};

namespace detail {

inline std::vector<std::string> numbered_labels(std::size_t first, std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(std::to_string(first + i));
  return out;
}

inline double inv_factorial(std::size_t j) { return std::exp(-std::lgamma(static_cast<double>(j) + 1.0)); }

/// Σ_{j>n} j⁻²: explicit terms to 4096 past n, then the Euler-Maclaurin tail.
inline double inverse_square_tail(std::size_t n) {
  const std::size_t m = n + 4096;
  double s = 0.0;
  for (std::size_t j = m; j > n; --j) s += 1.0 / (static_cast<double>(j) * static_cast<double>(j));
  const double x = static_cast<double>(m);
  return s + 1.0 / x - 1.0 / (2.0 * x * x) + 1.0 / (6.0 * x * x * x) - 1.0 / (30.0 * std::pow(x, 5));
}

}  // namespace detail

/// Ladder vertex indices: v_i -> i (0..N), w_i -> N + i (1..N).
inline std::size_t ladder_v(std::size_t /*n*/, std::size_t i) { return i; }
inline std::size_t ladder_w(std::size_t n, std::size_t i) { return n + i; }

/// Finite truncation of a family, weights straight from the formulas.
inline WeightedGraph generate(const FamilySpec& spec) {
  spec.validate();
  const std::size_t n = spec.size;
  std::vector<Edge> edges;
  std::vector<std::string> labels;
  switch (spec.family) {
    case Family::complete_unit:
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) edges.push_back({i, j, 1.0});
      }
      break;
    case Family::cycle:
      for (std::size_t i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
      break;
    case Family::path:
      for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
      break;
    case Family::halfline_m3:
      for (std::size_t i = 1; i <= n; ++i) {
        const double x = static_cast<double>(i);
        edges.push_back({i - 1, i, 1.0 / (x * x)});
      }
      break;
    case Family::halfline_m4:
      for (std::size_t i = 1; i <= n; ++i) edges.push_back({i - 1, i, std::pow(spec.r, static_cast<double>(i))});
      break;
    case Family::ladder_L:
      edges.push_back({ladder_v(n, 0), ladder_w(n, 1), 1.0});
      for (std::size_t i = 0; i < n; ++i) {
        edges.push_back({ladder_v(n, i), ladder_v(n, i + 1), std::pow(spec.rho, static_cast<double>(i))});
      }
      for (std::size_t i = 1; i <= n; ++i) {
        edges.push_back({ladder_v(n, i), ladder_w(n, i), std::pow(spec.r, static_cast<double>(i))});
      }
      for (std::size_t i = 0; i <= n; ++i) labels.push_back("v" + std::to_string(i));
      for (std::size_t i = 1; i <= n; ++i) labels.push_back("w" + std::to_string(i));
      break;
    case Family::K_m1: {
      WeightedGraph g = truncate_K(*spec.p, n, spec.renormalize);
      return WeightedGraph::build(g.edges(), detail::numbered_labels(1, n), n);
    }
    case Family::K_m2:
      // Vertices 1..N at indices 0..N-1; for j > i the weight is 1/j² when
      // j = i + 1 and 1/j! otherwise.
      for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = i + 1; j <= n; ++j) {
          const double x = static_cast<double>(j);
          edges.push_back({i - 1, j - 1, j == i + 1 ? 1.0 / (x * x) : detail::inv_factorial(j)});
        }
      }
      labels = detail::numbered_labels(1, n);
      break;
  }
  return WeightedGraph::build(edges, std::move(labels));
}

enum class FamilyInvariant { cheeger, dual_cheeger, kappa, spectral_gap };

inline std::string_view family_invariant_name(FamilyInvariant k) {
  switch (k) {
    case FamilyInvariant::cheeger: return "h";
    case FamilyInvariant::dual_cheeger: return "hbar";
    case FamilyInvariant::kappa: return "kappa";
    case FamilyInvariant::spectral_gap: return "gap";
  }
  return "?";
}

enum class ConvergenceMode { exact, limit, lower_bound };

inline std::string_view mode_name(ConvergenceMode m) {
  switch (m) {
    case ConvergenceMode::exact: return "exact-at-truncation";
    case ConvergenceMode::limit: return "limit-as-N-grows";
    case ConvergenceMode::lower_bound: return "lower-bound";
  }
  return "?";
}

struct ClosedForm {
  double value = 0.0;
  ConvergenceMode mode = ConvergenceMode::exact;
};

/// Known value of an invariant for a family. exact: holds for the
/// truncation itself; limit: the truncations converge to it; lower_bound:
/// the infinite graph's value is at least this.
inline ClosedForm closed_form(const FamilySpec& spec, FamilyInvariant inv) {
  spec.validate();
  const auto none = [&]() -> ClosedForm {
    throw Error(Errc::no_closed_form, std::string(family_invariant_name(inv)) + " has no closed form for " +
                                          std::string(family_name(spec.family)));
  };
  const double n = static_cast<double>(spec.size);
  const double r = spec.r;
  switch (spec.family) {
    case Family::complete_unit: {
      // n + 1 = size vertices.
      const double m = n - 1.0;
      switch (inv) {
        case FamilyInvariant::spectral_gap: return {n / (n - 1.0), ConvergenceMode::exact};
        case FamilyInvariant::kappa: return {std::ceil((m - 1.0) / 2.0) / m, ConvergenceMode::exact};
        case FamilyInvariant::cheeger: return {(n - std::floor(n / 2.0)) / (n - 1.0), ConvergenceMode::exact};
        case FamilyInvariant::dual_cheeger: {
          const double half = std::floor(n / 2.0);
          return {2.0 * half * (n - half) / (n * (n - 1.0)), ConvergenceMode::exact};
        }
      }
      break;
    }
    case Family::cycle:
      switch (inv) {
        case FamilyInvariant::kappa: return {spec.size % 2 == 0 ? 0.0 : 0.5, ConvergenceMode::exact};
        case FamilyInvariant::spectral_gap: return {1.0 - std::cos(2.0 * std::numbers::pi / n), ConvergenceMode::exact};
        case FamilyInvariant::cheeger: return {1.0 / std::floor(n / 2.0), ConvergenceMode::exact};
        case FamilyInvariant::dual_cheeger:
          if (spec.size % 2 == 0) return {1.0, ConvergenceMode::exact};
          return none();
      }
      break;
    case Family::path:
      switch (inv) {
        case FamilyInvariant::kappa: return {0.0, ConvergenceMode::exact};
        case FamilyInvariant::dual_cheeger: return {1.0, ConvergenceMode::exact};
        default: return none();
      }
    case Family::halfline_m3:
      switch (inv) {
        case FamilyInvariant::cheeger: return {0.0, ConvergenceMode::limit};
        case FamilyInvariant::kappa: return {0.0, ConvergenceMode::exact};
        case FamilyInvariant::dual_cheeger: return {1.0, ConvergenceMode::exact};
        default: return none();
      }
    case Family::halfline_m4:
      switch (inv) {
        case FamilyInvariant::cheeger: return {(1.0 - r) / (1.0 + r), ConvergenceMode::limit};
        case FamilyInvariant::kappa: return {0.0, ConvergenceMode::exact};
        case FamilyInvariant::dual_cheeger: return {1.0, ConvergenceMode::exact};
        default: return none();
      }
    case Family::ladder_L:
      if (inv != FamilyInvariant::dual_cheeger) return none();
      if (spec.rho < spec.r) return {1.0, ConvergenceMode::limit};
      // Value of the alternating pairs; the supremum can be larger.
      return {4.0 * r / (3.0 * r + 1.0), ConvergenceMode::lower_bound};
    case Family::K_m1: {
      const PSequence& p = *spec.p;
      switch (inv) {
        case FamilyInvariant::cheeger: {
          double sq = 0.0;
          for (std::size_t i = 1; i <= p.head_size(); ++i) sq += p.p(i) * p.p(i);
          sq += p.tail_sum_sq_after(p.head_size());
          return {(1.0 - sq) / 2.0, ConvergenceMode::lower_bound};
        }
        case FamilyInvariant::kappa:
          if (p.p(1) >= 0.5) return {1.0 - p.p(1), ConvergenceMode::limit};
          return none();
        case FamilyInvariant::spectral_gap: return {1.0, ConvergenceMode::limit};
        default: return none();
      }
    }
    case Family::K_m2:
      if (inv == FamilyInvariant::cheeger) return {0.0, ConvergenceMode::limit};
      return none();
  }
  return none();
}

/// One point of a witness trace: the ratio for tail index n, with its parts.
struct TracePoint {
  std::size_t n = 0;
  double value = 0.0;
  /// m(∂T_n) and m(I(T_n)) for Cheeger traces; m(A,B) and m(A)+m(B) for dual traces.
  double first = 0.0;
  double second = 0.0;
};

namespace detail {

/// Exact vertex measures of the infinite ladder.
inline double ladder_mv(double r, double rho, std::size_t i) {
  if (i == 0) return 1.0 + 1.0;
  return std::pow(rho, static_cast<double>(i) - 1.0) + std::pow(rho, static_cast<double>(i)) +
         std::pow(r, static_cast<double>(i));
}
inline double ladder_mw(double r, std::size_t i) { return (i == 1 ? 1.0 : 0.0) + std::pow(r, static_cast<double>(i)); }

}  // namespace detail

/// Analytic values of the witness ratios on the infinite graph, n = lo..hi.
///
/// halfline_m3, halfline_m4, K_m2: h(T_n) from 1/h(T_n) - 1 = 2·m(I(T_n))/m(∂T_n).
/// ladder_L with ρ < r: h̄({v_n}, {w_n}). ladder_L with ρ = r: h̄ of the
/// alternating pair starting at n (n = 0 is the modified pair with v0, v1 in A).
inline std::vector<TracePoint> tail_ratio_trace(const FamilySpec& spec, std::size_t lo, std::size_t hi) {
  spec.validate();
  if (lo > hi) throw Error(Errc::bad_parameter, "empty index range");
  std::vector<TracePoint> out;
  const double r = spec.r;
  const double rho = spec.rho;
  for (std::size_t k = lo; k <= hi; ++k) {
    const double x = static_cast<double>(k);
    TracePoint t{k, 0.0, 0.0, 0.0};
    switch (spec.family) {
      case Family::halfline_m3:
        if (k == 0) throw Error(Errc::bad_parameter, "tail index starts at 1");
        t.first = 1.0 / (x * x);
        t.second = detail::inverse_square_tail(k);
        break;
      case Family::halfline_m4:
        if (k == 0) throw Error(Errc::bad_parameter, "tail index starts at 1");
        t.first = std::pow(r, x);
        t.second = std::pow(r, x + 1.0) / (1.0 - r);
        break;
      case Family::K_m2: {
        if (k < 2) throw Error(Errc::bad_parameter, "tail index starts at 2");
        // Vertices 1, 2, ...: T_n has n - 2 vertices below it at distance > 1.
        double fact_tail = 0.0;
        double interior_fact = 0.0;
        for (std::size_t j = k + 1; j <= k + 40; ++j) {
          fact_tail += detail::inv_factorial(j);
          interior_fact += static_cast<double>(j - k - 1) * detail::inv_factorial(j);
        }
        t.first = 1.0 / (x * x) + (x - 2.0) * detail::inv_factorial(k) + (x - 1.0) * fact_tail;
        t.second = interior_fact + detail::inverse_square_tail(k);
        break;
      }
      case Family::ladder_L:
        if (spec.rho < spec.r) {
          if (k == 0) throw Error(Errc::bad_parameter, "pair index starts at 1");
          t.first = std::pow(r, x);
          t.second = detail::ladder_mv(r, rho, k) + detail::ladder_mw(r, k);
        } else if (k == 0) {
          // A = {v0, v1, w2, v3, ...}, B = {w1, v2, w3, ...}: every edge but v0v1 crosses.
          t.first = 1.0 + 2.0 * r / (1.0 - r);
          t.second = 2.0 * (1.0 + r / (1.0 - r) + 1.0 / (1.0 - r));
        } else {
          t.first = std::pow(r, x) / (1.0 - r) + std::pow(rho, x) / (1.0 - rho);
          t.second = std::pow(rho, x - 1.0) * (1.0 + rho) / (1.0 - rho) + 2.0 * std::pow(r, x) / (1.0 - r) +
                     (k == 1 ? 1.0 : 0.0);
        }
        t.value = 2.0 * t.first / t.second;
        out.push_back(t);
        continue;
      default:
        throw Error(Errc::no_tail_structure,
                    std::string(family_name(spec.family)) + " has no tail sets to trace");
    }
    t.value = t.first / (t.first + 2.0 * t.second);
    out.push_back(t);
  }
  return out;
}

inline FamilySpec family_spec_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("family")) throw Error(Errc::parse_error, "family spec needs \"family\"");
  FamilySpec s;
  s.family = parse_family(doc["family"].get<std::string>());
  if (doc.contains("n")) s.size = doc["n"].get<std::size_t>();
  if (doc.contains("r")) s.r = doc["r"].get<double>();
  s.rho = doc.contains("rho") ? doc["rho"].get<double>() : s.r;
  if (doc.contains("p")) s.p = psequence_from_json(doc["p"]);
  if (doc.contains("renormalize")) s.renormalize = doc["renormalize"].get<bool>();
  s.validate();
  return s;
}

}  // namespace specgraph
