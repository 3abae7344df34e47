#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "specgraph/check_report.hpp"
#include "specgraph/error.hpp"
#include "specgraph/graph.hpp"
#include "specgraph/vertex_set.hpp"

namespace specgraph {

struct SpectralOptions {
  /// Eigenvalues at or below this count as zero when locating the gap.
  double zero_threshold = 1e-9;
  /// Eigenvalues this far outside [0, 2] are clamped; farther is a failure.
  double clamp_tolerance = 1e-9;
  bool eigenvectors = false;
};

/// Eigenvalues of Δ in ascending order. When requested, column k of
/// eigenvectors holds f_k = D^{-1/2}u_k, an eigenfunction of Δ with
/// ⟨f_k, f_k⟩_m = 1.
struct Spectrum {
  std::vector<double> eigenvalues;
  double tolerance = 1e-9;
  std::size_t component_count = 0;
  std::optional<Eigen::MatrixXd> eigenvectors;
  /// max_k ‖Δf_k - λ_k f_k‖_m, only meaningful with eigenvectors.
  double max_residual = 0.0;
};

/// N = D^{-1/2} W D^{-1/2}.
inline Eigen::MatrixXd normalized_adjacency(const WeightedGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  Eigen::MatrixXd nm = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    // Separate roots keep the product from underflowing for tiny measures.
    const double x = e.w / (std::sqrt(g.measure(e.u)) * std::sqrt(g.measure(e.v)));
    nm(static_cast<Eigen::Index>(e.u), static_cast<Eigen::Index>(e.v)) = x;
    nm(static_cast<Eigen::Index>(e.v), static_cast<Eigen::Index>(e.u)) = x;
  }
  return nm;
}

/// Random-walk matrix P = D^{-1} W.
inline Eigen::MatrixXd random_walk_matrix(const WeightedGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    p(u, v) = e.w / g.measure(e.u);
    p(v, u) = e.w / g.measure(e.v);
  }
  return p;
}

/// Δ = I - P as a (non-symmetric) matrix.
inline Eigen::MatrixXd laplacian_matrix(const WeightedGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  return Eigen::MatrixXd::Identity(n, n) - random_walk_matrix(g);
}

namespace detail {

/// Eigenvalues of a symmetric matrix, ascending.
inline std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(Errc::numerical_failure, "symmetric eigensolver did not converge");
  const Eigen::VectorXd& ev = es.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

inline double clamp_eigenvalue(double x, double tol) {
  if (x < -tol || x > 2.0 + tol || !std::isfinite(x)) {
    throw Error(Errc::numerical_failure, "eigenvalue " + num(x) + " outside [0, 2]");
  }
  return std::clamp(x, 0.0, 2.0);
}

}  // namespace detail

/// σ(Δ), computed from the symmetric conjugate: σ(Δ) = {1 - ν : ν ∈ σ(N)}.
inline Spectrum spectrum(const WeightedGraph& g, const SpectralOptions& opts = {}) {
  const Eigen::MatrixXd nm = normalized_adjacency(g);
  const auto n = nm.rows();
  const Eigen::MatrixXd lap_sym = Eigen::MatrixXd::Identity(n, n) - nm;
  Spectrum s;
  s.tolerance = opts.clamp_tolerance;
  s.component_count = component_count(g);
  if (!opts.eigenvectors) {
    for (double x : detail::symmetric_eigenvalues(lap_sym)) s.eigenvalues.push_back(detail::clamp_eigenvalue(x, opts.clamp_tolerance));
    return s;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap_sym);
  if (es.info() != Eigen::Success) throw Error(Errc::numerical_failure, "symmetric eigensolver did not converge");
  Eigen::VectorXd inv_sqrt(n);
  for (Eigen::Index v = 0; v < n; ++v) inv_sqrt(v) = 1.0 / std::sqrt(g.measure(static_cast<std::size_t>(v)));
  Eigen::MatrixXd f = inv_sqrt.asDiagonal() * es.eigenvectors();
  const Eigen::MatrixXd lap = laplacian_matrix(g);
  Eigen::VectorXd m(n);
  for (Eigen::Index v = 0; v < n; ++v) m(v) = g.measure(static_cast<std::size_t>(v));
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lambda = es.eigenvalues()(k);
    s.eigenvalues.push_back(detail::clamp_eigenvalue(lambda, opts.clamp_tolerance));
    const Eigen::VectorXd r = lap * f.col(k) - lambda * f.col(k);
    const double res = std::sqrt((r.array().square() * m.array()).sum());
    const double nf = std::sqrt((f.col(k).array().square() * m.array()).sum());
    s.max_residual = std::max(s.max_residual, res / nf);
  }
  s.eigenvectors = std::move(f);
  return s;
}

/// Smallest eigenvalue above the zero threshold; 0 if there is none.
inline double spectral_gap(const Spectrum& s, double zero_threshold = 1e-9) {
  for (double x : s.eigenvalues) {
    if (x > zero_threshold) return x;
  }
  return 0.0;
}

inline double lambda_top(const Spectrum& s) {
  if (s.eigenvalues.empty()) throw Error(Errc::empty_spectrum, "empty spectrum has no top");
  return s.eigenvalues.back();
}

/// ⟨Δf, f⟩_m / ⟨f, f⟩_m.
inline double rayleigh(const WeightedGraph& g, std::span<const double> f) {
  const double nf = norm_squared(g, f);
  if (!(nf > 0.0)) throw Error(Errc::zero_function, "Rayleigh quotient of the zero function");
  return dirichlet_form(g, f) / nf;
}

/// P_A and P_B: the random-walk operator restricted to A×A and B×B.
/// T_ψ = π_A - π_B, P_ψ = P_A + P_B.
struct SignedBlockOperator {
  Partition partition;
  Eigen::MatrixXd p_a;
  Eigen::MatrixXd p_b;

  Eigen::MatrixXd p_psi() const { return p_a + p_b; }
  Eigen::MatrixXd t_psi() const {
    const auto n = static_cast<Eigen::Index>(partition.universe());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index v = 0; v < n; ++v) t(v, v) = partition.sign(static_cast<std::size_t>(v));
    return t;
  }
};

inline SignedBlockOperator signed_blocks(const WeightedGraph& g, const Partition& part) {
  if (part.universe() != g.vertex_count()) throw Error(Errc::size_mismatch, "partition universe differs from vertex count");
  const Eigen::MatrixXd p = random_walk_matrix(g);
  const auto n = p.rows();
  Eigen::MatrixXd pa = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd pb = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index u = 0; u < n; ++u) {
    for (Eigen::Index v = 0; v < n; ++v) {
      const int su = part.sign(static_cast<std::size_t>(u));
      if (su != part.sign(static_cast<std::size_t>(v))) continue;
      (su > 0 ? pa : pb)(u, v) = p(u, v);
    }
  }
  return {part, std::move(pa), std::move(pb)};
}

struct SignedConjugation {
  SignedBlockOperator op;
  /// max |T⁻¹ΔT - (2I - Δ - 2P_ψ)| over entries.
  CheckReport entries;
  /// max |σ(Δ)_k - σ(2I - Δ - 2P_ψ)_k| over sorted eigenvalues.
  CheckReport spectra;
};

/// Verifies T_ψ⁻¹ Δ T_ψ = 2I - Δ - 2P_ψ entrywise (1e-12) and that both
/// sides have the same spectrum (1e-9). The second spectrum is obtained
/// from the m-symmetrisation I + N - 2N_ψ, an eigensolve independent of
/// the one for Δ.
inline SignedConjugation signed_conjugation(const WeightedGraph& g, const Partition& part) {
  SignedBlockOperator op = signed_blocks(g, part);
  const Eigen::MatrixXd lap = laplacian_matrix(g);
  const auto n = lap.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd t = op.t_psi();
  // T is diagonal with entries ±1, so T⁻¹ = T.
  const Eigen::MatrixXd lhs = t * lap * t;
  const Eigen::MatrixXd rhs = 2.0 * id - lap - 2.0 * op.p_psi();
  const double entry_err = (lhs - rhs).cwiseAbs().maxCoeff();

  const Eigen::MatrixXd nm = normalized_adjacency(g);
  Eigen::MatrixXd n_psi = nm;
  for (Eigen::Index u = 0; u < n; ++u) {
    for (Eigen::Index v = 0; v < n; ++v) {
      if (part.sign(static_cast<std::size_t>(u)) != part.sign(static_cast<std::size_t>(v))) n_psi(u, v) = 0.0;
    }
  }
  const std::vector<double> s1 = detail::symmetric_eigenvalues(id - nm);
  const std::vector<double> s2 = detail::symmetric_eigenvalues(id + nm - 2.0 * n_psi);
  double spec_err = 0.0;
  for (std::size_t k = 0; k < s1.size(); ++k) spec_err = std::max(spec_err, std::fabs(s1[k] - s2[k]));

  const std::uint64_t hash = graph_fingerprint(g);
  SignedConjugation out{std::move(op), CheckReport::le("conjugation.entries", entry_err, 0.0, 1e-12),
                        CheckReport::le("conjugation.spectrum", spec_err, 0.0, 1e-9)};
  out.entries.stamp(hash, 0);
  out.spectra.stamp(hash, 0);
  return out;
}

/// Operator norm of P_ψ on L²(G, m). D^{1/2} is an isometry from L²(G, m)
/// onto ℓ², carrying P_ψ to the symmetric blocks of N.
inline double p_psi_norm(const WeightedGraph& g, const Partition& part) {
  if (part.universe() != g.vertex_count()) throw Error(Errc::size_mismatch, "partition universe differs from vertex count");
  Eigen::MatrixXd n_psi = normalized_adjacency(g);
  const auto n = n_psi.rows();
  for (Eigen::Index u = 0; u < n; ++u) {
    for (Eigen::Index v = 0; v < n; ++v) {
      if (part.sign(static_cast<std::size_t>(u)) != part.sign(static_cast<std::size_t>(v))) n_psi(u, v) = 0.0;
    }
  }
  double norm = 0.0;
  for (double x : detail::symmetric_eigenvalues(n_psi)) norm = std::max(norm, std::fabs(x));
  return norm;
}

struct CoareaReport {
  CheckReport volume;
  CheckReport boundary;
};

/// Both co-area identities for f². Superlevel sets P_t = {f² > t} only
/// change at the values of f², so each integral is a finite sum over the
/// sorted levels.
inline CoareaReport coarea_check(const WeightedGraph& g, std::span<const double> f) {
  detail::require_size(g, f);
  const std::size_t n = g.vertex_count();
  std::vector<double> sq(n);
  for (std::size_t v = 0; v < n; ++v) sq[v] = f[v] * f[v];
  std::vector<double> levels(sq);
  levels.push_back(0.0);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  double vol_integral = 0.0;
  double bdry_integral = 0.0;
  for (std::size_t k = 1; k < levels.size(); ++k) {
    const double width = levels[k] - levels[k - 1];
    // For t in (levels[k-1], levels[k]) the superlevel set is {f² >= levels[k]}.
    const double cut = levels[k];
    double vol = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      if (sq[v] >= cut) vol += g.measure(v);
    }
    double bdry = 0.0;
    for (const Edge& e : g.edges()) {
      if ((sq[e.u] >= cut) != (sq[e.v] >= cut)) bdry += e.w;
    }
    vol_integral += width * vol;
    bdry_integral += width * bdry;
  }
  double vol_direct = 0.0;
  for (std::size_t v = 0; v < n; ++v) vol_direct += g.measure(v) * sq[v];
  double bdry_direct = 0.0;
  for (const Edge& e : g.edges()) bdry_direct += e.w * std::fabs(sq[e.u] - sq[e.v]);

  const std::uint64_t hash = graph_fingerprint(g);
  CoareaReport r{CheckReport::eq("coarea.volume", vol_integral, vol_direct, 1e-10),
                 CheckReport::eq("coarea.boundary", bdry_integral, bdry_direct, 1e-10)};
  r.volume.stamp(hash, 0);
  r.boundary.stamp(hash, 0);
  return r;
}

/// The doubled graph G_f and the function f' on it, with the two
/// comparisons between (G, f) and (G_f, f').
struct AuxiliaryGraph {
  WeightedGraph graph;
  VertexFunction f_prime;
  /// Index of v' in graph for each original v, or npos if v has no duplicate.
  std::vector<std::size_t> duplicate_of;
  /// ⟨f, f⟩_m = ⟨f', f'⟩_{m_f}.
  CheckReport norm;
  /// ⟨Qf, f⟩/⟨f, f⟩ >= ⟨Δf', f'⟩/⟨f', f'⟩ on G_f.
  CheckReport quotient;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Every vertex v with f(v) != 0 gets a duplicate v'. Each edge vw with
/// f(v)f(w) > 0 is replaced by vw' and v'w; other edges are kept.
/// Duplicates left without edges are dropped.
inline AuxiliaryGraph auxiliary_graph(const WeightedGraph& g, std::span<const double> f) {
  detail::require_size(g, f);
  const std::size_t n = g.vertex_count();
  if (!(norm_squared(g, f) > 0.0)) throw Error(Errc::zero_function, "auxiliary graph of the zero function");

  std::vector<char> used(n, 0);
  for (const Edge& e : g.edges()) {
    if (f[e.u] * f[e.v] > 0.0) used[e.u] = used[e.v] = 1;
  }
  std::vector<std::size_t> dup(n, AuxiliaryGraph::npos);
  std::size_t next = n;
  for (std::size_t v = 0; v < n; ++v) {
    if (used[v]) dup[v] = next++;
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (f[e.u] * f[e.v] > 0.0) {
      edges.push_back({e.u, dup[e.v], e.w});
      edges.push_back({dup[e.u], e.v, e.w});
    } else {
      edges.push_back(e);
    }
  }
  std::vector<std::string> labels;
  if (!g.labels().empty()) {
    labels = g.labels();
    for (std::size_t v = 0; v < n; ++v) {
      if (dup[v] != AuxiliaryGraph::npos) labels.push_back(g.label(v) + "'");
    }
  }
  WeightedGraph gf = WeightedGraph::build(edges, std::move(labels), next);
  VertexFunction fp(next, 0.0);
  for (std::size_t v = 0; v < n; ++v) fp[v] = std::fabs(f[v]);

  const double nf = norm_squared(g, f);
  const double nfp = norm_squared(gf, fp);
  const double q_ratio = q_form(g, f) / nf;
  const double aux_ratio = dirichlet_form(gf, fp) / nfp;
  const std::uint64_t hash = graph_fingerprint(g);
  AuxiliaryGraph out{std::move(gf), std::move(fp), std::move(dup), CheckReport::eq("aux.norm", nf, nfp, 1e-12),
                     CheckReport::ge("aux.quotient", q_ratio, aux_ratio, 1e-10 * std::max(1.0, std::fabs(q_ratio)))};
  out.norm.stamp(hash, 0);
  out.quotient.stamp(hash, 0);
  return out;
}

inline nlohmann::json to_json(const Spectrum& s) {
  nlohmann::json j;
  j["eigenvalues"] = s.eigenvalues;
  j["component_count"] = s.component_count;
  j["tolerance"] = s.tolerance;
  if (s.eigenvectors) {
    auto cols = nlohmann::json::array();
    const Eigen::MatrixXd& f = *s.eigenvectors;
    for (Eigen::Index k = 0; k < f.cols(); ++k) {
      std::vector<double> col(f.rows());
      for (Eigen::Index v = 0; v < f.rows(); ++v) col[static_cast<std::size_t>(v)] = f(v, k);
      cols.push_back(std::move(col));
    }
    j["eigenvectors"] = std::move(cols);
    j["max_residual"] = s.max_residual;
  }
  return j;
}

}  // namespace specgraph
