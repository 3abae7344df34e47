#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "specgraph/error.hpp"
#include "specgraph/graph.hpp"

namespace specgraph {

/// Shape parameters p₁ > p₂ > … > 0 with Σ pᵢ = 1 for the infinite
/// complete graph K(p), m(ij) = pᵢpⱼ. An explicit head p₁..p_N is
/// followed by a geometric tail p_{N+k} = first·ratio^{k-1}, where first
/// defaults to p_N·ratio. Indices are 1-based throughout.
class PSequence {
 public:
  PSequence(std::vector<double> head, double ratio, std::optional<double> first = std::nullopt)
      : head_(std::move(head)), ratio_(ratio) {
    if (head_.empty()) throw Error(Errc::bad_parameter, "head must hold at least one weight");
    if (!(ratio_ > 0.0 && ratio_ < 1.0)) throw Error(Errc::bad_parameter, "tail ratio must lie in (0, 1)");
    for (std::size_t i = 0; i < head_.size(); ++i) {
      if (!(head_[i] > 0.0 && head_[i] < 1.0)) throw Error(Errc::bad_parameter, "weights must lie in (0, 1)");
      if (i > 0 && !(head_[i] < head_[i - 1])) {
        throw Error(Errc::bad_parameter, "weights must be strictly decreasing");
      }
    }
    first_ = first ? *first : head_.back() * ratio_;
    if (!(first_ > 0.0 && first_ < head_.back())) {
      throw Error(Errc::bad_parameter, "tail must continue the strict descent of the head");
    }
    suffix_.assign(head_.size() + 1, 0.0);
    for (std::size_t i = head_.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] + head_[i];
    const double total = suffix_[0] + tail_total();
    if (std::fabs(total - 1.0) > 1e-14) {
      throw Error(Errc::bad_parameter, "weights must sum to 1 (sum is " + num(total) + ")");
    }
  }

  const std::vector<double>& head() const noexcept { return head_; }
  double ratio() const noexcept { return ratio_; }
  double tail_first() const noexcept { return first_; }
  std::size_t head_size() const noexcept { return head_.size(); }

  /// p_i, i >= 1.
  double p(std::size_t i) const {
    if (i == 0) throw Error(Errc::bad_parameter, "indices start at 1");
    if (i <= head_.size()) return head_[i - 1];
    return first_ * std::pow(ratio_, static_cast<double>(i - head_.size() - 1));
  }
  double q(std::size_t i) const { return 1.0 - p(i); }
  /// a_i = p_i/q_i = -α_i = r_i - 1.
  double a(std::size_t i) const {
    const double pi = p(i);
    return pi / (1.0 - pi);
  }
  double alpha(std::size_t i) const { return -a(i); }
  double r(std::size_t i) const { return 1.0 / q(i); }

  /// Σ_{i>j} p_i in closed form.
  double tail_sum_after(std::size_t j) const {
    if (j >= head_.size()) return p(j + 1) / (1.0 - ratio_);
    return suffix_[j] + tail_total();
  }
  /// Σ_{i>j} p_i² in closed form.
  double tail_sum_sq_after(std::size_t j) const {
    if (j >= head_.size()) {
      const double pj = p(j + 1);
      return pj * pj / (1.0 - ratio_ * ratio_);
    }
    double s = first_ * first_ / (1.0 - ratio_ * ratio_);
    for (std::size_t i = j; i < head_.size(); ++i) s += head_[i] * head_[i];
    return s;
  }

 private:
  double tail_total() const { return first_ / (1.0 - ratio_); }

  std::vector<double> head_;
  double ratio_;
  double first_ = 0.0;
  std::vector<double> suffix_;
};

inline PSequence psequence_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("head") || !doc["head"].is_array() || !doc.contains("tail") ||
      !doc["tail"].is_object() || !doc["tail"].contains("ratio") || !doc["tail"]["ratio"].is_number()) {
    throw Error(Errc::parse_error, "PSequence needs {\"head\": [...], \"tail\": {\"ratio\": r}}");
  }
  std::vector<double> head;
  for (const auto& x : doc["head"]) {
    if (!x.is_number()) throw Error(Errc::parse_error, "head entries must be numbers");
    head.push_back(x.get<double>());
  }
  std::optional<double> first;
  if (doc["tail"].contains("first")) first = doc["tail"]["first"].get<double>();
  return PSequence(std::move(head), doc["tail"]["ratio"].get<double>(), first);
}

inline nlohmann::json to_json(const PSequence& p) {
  nlohmann::json j;
  j["head"] = p.head();
  j["tail"] = {{"ratio", p.ratio()}};
  if (p.tail_first() != p.head().back() * p.ratio()) j["tail"]["first"] = p.tail_first();
  return j;
}

/// A truncated series plus a certified bound on everything left out.
struct BoundedSum {
  double value = 0.0;
  /// |true value - value| <= error (tail half-width plus rounding).
  double error = 0.0;
  std::size_t terms = 0;
  double tail_bound = 0.0;
};

namespace detail {

enum class SecularKind {
  F,           // Σ a_j/(a_j + λ)
  F_neg_der,   // Σ a_j/(a_j + λ)²  (= -F'(λ))
  membership,  // Σ p_j/(a_j + λ)²
};

constexpr std::size_t kMaxSecularTerms = 2'000'000;
constexpr double kEps = std::numeric_limits<double>::epsilon();

/// Evaluates one of the secular series at λ ∉ {0} ∪ {α_j}. Terms are
/// summed explicitly until every remaining pole lies at distance >= |λ|/2
/// (λ < 0) and the remaining tail is enclosed in an interval of half-width
/// <= tol; the midpoint of that interval is added to the value.
///
/// The tail enclosure: with S_a = Σ_{j>J} a_j ∈ [T_p, T_p/q_{J+1}]
/// (T_p the closed-form Σ_{j>J} p_j) each remaining denominator a_j + λ is
/// bounded between λ and a_{J+1} + λ.
inline BoundedSum secular_series(const PSequence& ps, double lambda, SecularKind kind, double tol) {
  if (!std::isfinite(lambda)) throw Error(Errc::bad_parameter, "secular argument must be finite");
  const double abs_l = std::fabs(lambda);
  const double guard = 1e-13 * std::min(1.0, abs_l);
  if (!(abs_l > 0.0)) throw Error(Errc::pole_proximity, "secular function is singular at 0");
  const int power = kind == SecularKind::F ? 1 : 2;

  double sum = 0.0;
  double comp = 0.0;  // Neumaier compensation
  double abs_sum = 0.0;
  BoundedSum out;
  for (std::size_t j = 1; j <= kMaxSecularTerms; ++j) {
    const double pj = ps.p(j);
    const double aj = pj / (1.0 - pj);
    const double den = aj + lambda;
    if (std::fabs(den) < guard) {
      throw Error(Errc::pole_proximity, "argument within " + num(std::fabs(den)) + " of pole " +
                                            std::to_string(j));
    }
    const double num = kind == SecularKind::membership ? pj : aj;
    const double term = power == 1 ? num / den : num / (den * den);
    const double t = sum + term;
    comp += std::fabs(sum) >= std::fabs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    abs_sum += std::fabs(term);
    out.terms = j;

    if (j < ps.head_size()) continue;
    const double p_next = ps.p(j + 1);
    const double a_next = p_next / (1.0 - p_next);
    if (lambda < 0.0 && a_next > abs_l / 2.0) continue;
    const double tp = ps.tail_sum_after(j);
    const double s_lo = tp * (1.0 - 4.0 * kEps);
    const double s_hi = (kind == SecularKind::membership ? tp : tp / (1.0 - p_next)) * (1.0 + 4.0 * kEps);
    // Smallest and largest |a_j + λ| over j > J.
    const double d_small = lambda > 0.0 ? lambda : abs_l - a_next;
    const double d_large = lambda > 0.0 ? lambda + a_next : abs_l;
    double lo = 0.0;
    double hi = 0.0;
    if (power == 1) {
      if (lambda > 0.0) {
        lo = s_lo / d_large;
        hi = s_hi / d_small;
      } else {
        lo = -s_hi / d_small;
        hi = -s_lo / d_large;
      }
    } else {
      lo = s_lo / (d_large * d_large);
      hi = s_hi / (d_small * d_small);
    }
    const double half = (hi - lo) / 2.0;
    if (half <= tol || j == kMaxSecularTerms) {
      const double mid = (lo + hi) / 2.0;
      out.value = sum + comp + mid;
      out.tail_bound = half;
      out.error = half + 4.0 * kEps * (abs_sum + std::fabs(mid)) + static_cast<double>(j) * kEps * kEps * abs_sum;
      return out;
    }
  }
  throw Error(Errc::numerical_failure, "secular series did not converge");
}

}  // namespace detail

/// F(λ) = Σ α_j/(α_j - λ) = Σ a_j/(a_j + λ) with a certified error bound.
inline BoundedSum secular_F(const PSequence& p, double lambda, double tol = 1e-16) {
  return detail::secular_series(p, lambda, detail::SecularKind::F, tol);
}

/// F'(λ) = Σ α_j/(α_j - λ)², always negative.
inline BoundedSum secular_F_prime(const PSequence& p, double lambda, double tol = 1e-16) {
  BoundedSum s = detail::secular_series(p, lambda, detail::SecularKind::F_neg_der, tol);
  s.value = -s.value;
  return s;
}

/// Σ p_j (λ - α_j)⁻², finite exactly when f_λ is square-summable.
inline BoundedSum eigenfunction_norm_sum(const PSequence& p, double lambda, double tol = 1e-16) {
  return detail::secular_series(p, lambda, detail::SecularKind::membership, tol);
}

/// G(μ) = Σ (r_j - 1)/(r_j - μ) = F(1 - μ).
inline BoundedSum secular_G(const PSequence& p, double mu, double tol = 1e-16) { return secular_F(p, 1.0 - mu, tol); }

/// Root of F(λ) = 1 in its bracket, or the matching Δ-eigenvalue μ = 1 - λ.
struct SecularRoot {
  std::size_t index = 0;
  /// The bracket: (α_i, α_{i+1}) for λ, (r_{i+1}, r_i) for μ.
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;
  /// Sub-interval of the bracket on whose ends F - 1 has certified opposite signs.
  double enclosure_lo = 0.0;
  double enclosure_hi = 0.0;
  /// |F(value) - 1| as computed.
  double residual = 0.0;
  /// Certified error of the F evaluation at value.
  double tail_bound = 0.0;
  std::size_t truncation_terms = 0;
  /// Σ p_j (λ - α_j)⁻² at the root, with its error.
  double membership_sum = 0.0;
  double membership_error = 0.0;
  std::size_t newton_steps = 0;
};

struct RootOptions {
  /// Bisection stops at this fraction of the bracket width.
  double bisection_width = 1e-10;
  std::size_t newton_steps = 5;
  /// Brackets narrower than this are rejected.
  double collapse_width = 1e-15;
  double series_tol = 1e-16;
};

/// λ_i, the unique root of F(λ) = 1 in (α_i, α_{i+1}), i >= 1.
inline SecularRoot p_eigenvalue(const PSequence& p, std::size_t i, const RootOptions& opts = {}) {
  if (i == 0) throw Error(Errc::bad_parameter, "bracket indices start at 1");
  SecularRoot root;
  root.index = i;
  root.lo = p.alpha(i);
  root.hi = p.alpha(i + 1);
  const double width = root.hi - root.lo;
  if (!(width >= opts.collapse_width)) {
    throw Error(Errc::bracket_collapse, "bracket " + std::to_string(i) + " has width " + num(width));
  }
  // F - 1 runs from +∞ at lo to -∞ at hi; lo/hi track certified signs.
  double lo = root.lo;
  double hi = root.hi;
  auto classify = [&](double x) {
    const BoundedSum f = secular_F(p, x, opts.series_tol);
    const double g = f.value - 1.0;
    if (g - f.error > 0.0) return 1;
    if (g + f.error < 0.0) return -1;
    return 0;
  };
  double x = 0.5 * (lo + hi);
  bool settled = false;
  while (hi - lo > opts.bisection_width * width) {
    x = 0.5 * (lo + hi);
    const int s = classify(x);
    if (s > 0) {
      lo = x;
    } else if (s < 0) {
      hi = x;
    } else {
      settled = true;
      break;
    }
  }
  if (!settled) x = 0.5 * (lo + hi);
  for (std::size_t step = 0; step < opts.newton_steps; ++step) {
    const BoundedSum f = secular_F(p, x, opts.series_tol);
    const double g = f.value - 1.0;
    if (g - f.error > 0.0) lo = std::max(lo, x);
    if (g + f.error < 0.0) hi = std::min(hi, x);
    if (std::fabs(g) <= f.error) break;
    const BoundedSum d = secular_F_prime(p, x, opts.series_tol);
    double next = x - g / d.value;
    if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
    ++root.newton_steps;
    const bool tiny = std::fabs(next - x) <= 2.0 * detail::kEps * std::fabs(x);
    x = next;
    if (tiny) break;
  }
  const BoundedSum f = secular_F(p, x, opts.series_tol);
  const BoundedSum m = eigenfunction_norm_sum(p, x, opts.series_tol);
  root.value = x;
  root.enclosure_lo = lo;
  root.enclosure_hi = hi;
  root.residual = std::fabs(f.value - 1.0);
  root.tail_bound = f.error;
  root.truncation_terms = f.terms;
  root.membership_sum = m.value;
  root.membership_error = m.error;
  return root;
}

/// μ_i = 1 - λ_i, lying in (r_{i+1}, r_i) = (1/q_{i+1}, 1/q_i).
inline SecularRoot delta_eigenvalue(const PSequence& p, std::size_t i, const RootOptions& opts = {}) {
  SecularRoot root = p_eigenvalue(p, i, opts);
  const double lambda_lo = root.enclosure_lo;
  root.value = 1.0 - root.value;
  root.lo = p.r(i + 1);
  root.hi = p.r(i);
  root.enclosure_lo = 1.0 - root.enclosure_hi;
  root.enclosure_hi = 1.0 - lambda_lo;
  return root;
}

/// The root of F(λ) = 1 on (0, ∞); equal to 1 because α/(α - 1) = p.
inline SecularRoot positive_p_eigenvalue(const PSequence& p, const RootOptions& opts = {}) {
  double lo = 0.5;
  while (secular_F(p, lo, opts.series_tol).value <= 1.0) lo /= 2.0;
  double hi = 2.0;
  while (secular_F(p, hi, opts.series_tol).value >= 1.0) hi *= 2.0;
  SecularRoot root;
  root.lo = 0.0;
  root.hi = INFINITY;
  for (int it = 0; it < 200 && hi - lo > 4.0 * detail::kEps * hi; ++it) {
    const double x = 0.5 * (lo + hi);
    const BoundedSum f = secular_F(p, x, opts.series_tol);
    if (f.value - 1.0 - f.error > 0.0) {
      lo = x;
    } else if (f.value - 1.0 + f.error < 0.0) {
      hi = x;
    } else {
      lo = hi = x;
    }
  }
  const double x = 0.5 * (lo + hi);
  const BoundedSum f = secular_F(p, x, opts.series_tol);
  root.value = x;
  root.enclosure_lo = lo;
  root.enclosure_hi = hi;
  root.residual = std::fabs(f.value - 1.0);
  root.tail_bound = f.error;
  root.truncation_terms = f.terms;
  return root;
}

struct Eigenfunction {
  /// f(i) = (λ - α_i)⁻¹ for i = 1..k.
  std::vector<double> values;
  /// max_i |(Pg)(i) - λ g(i)| with g = f/q, the random-walk eigenfunction.
  double max_residual = 0.0;
  /// Error budget for max_residual coming from the truncated series.
  double error_bound = 0.0;
};

/// First k values of the eigenfunction for a P-eigenvalue λ. The check
/// applies the random-walk operator of K(p) directly:
/// (Pg)(i) = (Σ_j p_j g(j) - p_i g(i))/q_i with Σ_j p_j g(j) = F(λ).
inline Eigenfunction eigenfunction(const PSequence& p, double lambda, std::size_t k, double tol = 1e-16) {
  Eigenfunction out;
  const BoundedSum f = secular_F(p, lambda, tol);
  for (std::size_t i = 1; i <= k; ++i) {
    const double fi = 1.0 / (lambda + p.a(i));
    out.values.push_back(fi);
    const double qi = p.q(i);
    const double gi = fi / qi;
    const double pg = (f.value - p.p(i) * gi) / qi;
    const double scale = std::max(1.0, std::fabs(lambda * gi));
    out.max_residual = std::max(out.max_residual, std::fabs(pg - lambda * gi) / scale);
    out.error_bound = std::max(out.error_bound, (f.error / qi + 8.0 * detail::kEps * (std::fabs(pg) + std::fabs(lambda * gi))) / scale);
  }
  return out;
}

/// Bounds on μ_top from the two-term reduction with the remainder of the
/// series frozen at x: μ(x) is the root in (r₂, r₁) of
/// (r₁ - 1)(r₂ - μ) + (r₂ - 1)(r₁ - μ) = (1 - x)(r₁ - μ)(r₂ - μ).
struct MuTopBounds {
  double x_plus = 0.0;
  double x_minus = 0.0;
  /// μ(x₊), a lower bound.
  double lower = 0.0;
  /// μ(x₋) before capping at 2.
  double upper_raw = 0.0;
  double upper = 0.0;
  bool monotone = false;
};

namespace detail {

inline double refinement_root(double r1, double r2, double x) {
  const double a = 1.0 - x;
  const double b = -(1.0 - x) * (r1 + r2) + (r1 + r2 - 2.0);
  const double c = (1.0 - x) * r1 * r2 - (2.0 * r1 * r2 - r1 - r2);
  const double width = r1 - r2;
  auto inside = [&](double mu) { return std::isfinite(mu) && mu > r2 - 1e-12 * width && mu < r1 + 1e-12 * width; };
  if (std::fabs(a) <= 1e-14 * (std::fabs(b) + std::fabs(c))) {
    if (b == 0.0) throw Error(Errc::degenerate_quadratic, "refinement equation is constant");
    const double mu = -c / b;
    if (!inside(mu)) throw Error(Errc::degenerate_quadratic, "linear refinement root outside (r2, r1)");
    return mu;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) throw Error(Errc::degenerate_quadratic, "refinement quadratic has no real root");
  const double qv = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  const double roots[2] = {qv / a, qv != 0.0 ? c / qv : INFINITY};
  std::optional<double> pick;
  for (double mu : roots) {
    if (inside(mu) && (!pick || mu > *pick)) pick = mu;
  }
  if (!pick) throw Error(Errc::degenerate_quadratic, "no refinement root in (r2, r1)");
  return std::clamp(*pick, r2, r1);
}

}  // namespace detail

inline MuTopBounds mu_top_refined(const PSequence& p) {
  const double r1 = p.r(1);
  const double r2 = p.r(2);
  const double r3 = p.r(3);
  // 1 - p₁ - p₂ from the series itself rather than by cancellation.
  const double rest = p.tail_sum_after(2);
  MuTopBounds b;
  b.x_plus = -rest / p.a(1);
  b.x_minus = rest * r3 / (p.a(3) - p.a(2));
  b.lower = detail::refinement_root(r1, r2, b.x_plus);
  b.upper_raw = detail::refinement_root(r1, r2, b.x_minus);
  b.upper = std::min(b.upper_raw, 2.0);
  b.monotone = b.lower <= b.upper_raw;
  return b;
}

struct KappaK {
  double value = 0.0;
  bool certified = false;
  /// Size k of the threshold side A = {1..k} realising value.
  std::size_t threshold = 1;
};

/// κ(K(p), m). For p₁ >= 1/2 this is exactly 1 - p₁. Otherwise the result
/// is the smallest κ(A, B) over threshold partitions A = {1..k}, an upper
/// bound only.
inline KappaK kappa_K(const PSequence& p) {
  if (p.p(1) >= 0.5) return {1.0 - p.p(1), true, 1};
  KappaK best{INFINITY, false, 1};
  // Inside A the stay probability (P_A - p_v)/(1 - p_v) is largest at the
  // lightest vertex p_k; inside B its supremum is P_B, approached far out.
  double mass_a = 0.0;
  const std::size_t limit = p.head_size() + 400;
  for (std::size_t k = 1; k <= limit; ++k) {
    mass_a += p.p(k);
    const double mass_b = p.tail_sum_after(k);
    const double in_a = (mass_a - p.p(k)) / p.q(k);
    const double value = std::max(in_a, mass_b);
    if (value < best.value) best = {value, false, k};
    if (in_a >= best.value) break;
  }
  return best;
}

inline double kappa_K_certified(const PSequence& p) {
  const KappaK k = kappa_K(p);
  if (!k.certified) throw Error(Errc::out_of_regime, "closed form for kappa needs p1 >= 1/2");
  return k.value;
}

/// Hausdorff asymmetry of {0, 1} ∪ {μ_i}: 2 - μ₁ when μ₁ <= 3/2, otherwise
/// max_i min(μ_i - 1, 2 - μ_i), i.e. 1/2 - inf_i |μ_i - 3/2|.
inline double asymmetry_from_eigenvalues(const std::vector<double>& mus_descending) {
  if (mus_descending.empty()) throw Error(Errc::empty_spectrum, "no eigenvalues given");
  const double mu1 = mus_descending.front();
  if (mu1 <= 1.5) return 2.0 - mu1;
  double best = 0.0;
  for (double mu : mus_descending) best = std::max(best, std::min(mu - 1.0, 2.0 - mu));
  return best;
}

struct AsymmetryK {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  /// True when μ₁ <= 3/2.
  bool first_case = false;
  std::vector<SecularRoot> roots;
};

/// d_H(σ(Δ), R(σ(Δ))) for K(p). Roots are computed up to the first index K
/// with r_K <= 3/2; every later μ_i lies below μ_K, hence farther from 3/2.
inline AsymmetryK asymmetry_K(const PSequence& p, const RootOptions& opts = {}, std::size_t max_roots = 10'000) {
  AsymmetryK out;
  std::vector<double> mus;
  double spread = 0.0;
  for (std::size_t i = 1;; ++i) {
    if (i > max_roots) throw Error(Errc::insufficient_roots, "root budget exhausted before the tail left (3/2, 2)");
    SecularRoot root;
    try {
      root = delta_eigenvalue(p, i, opts);
    } catch (const Error& e) {
      throw Error(Errc::insufficient_roots, std::string("root ") + std::to_string(i) + ": " + e.message());
    }
    mus.push_back(root.value);
    spread = std::max({spread, root.value - root.enclosure_lo, root.enclosure_hi - root.value});
    out.roots.push_back(root);
    if (i == 1 && root.enclosure_hi <= 1.5) break;
    if (p.r(i) <= 1.5) break;
  }
  out.first_case = mus.front() <= 1.5;
  out.value = asymmetry_from_eigenvalues(mus);
  // Both formulas are 1-Lipschitz in every μ_i.
  out.lower = out.value - spread;
  out.upper = out.value + spread;
  return out;
}

/// True when no Δ-eigenvalue of K(p) lies in (a, b) with 1 < a < b. Roots
/// are solved only for brackets (r_{i+1}, r_i) that meet (a, b).
inline bool eigenvalue_free(const PSequence& p, double a, double b, const RootOptions& opts = {}) {
  if (!(a >= 1.0 && a < b)) throw Error(Errc::bad_parameter, "need 1 <= a < b");
  for (std::size_t i = 1;; ++i) {
    if (p.r(i) <= a) return true;
    if (p.r(i + 1) >= b) continue;
    const SecularRoot root = delta_eigenvalue(p, i, opts);
    if (root.enclosure_hi > a && root.enclosure_lo < b) return false;
  }
}

struct HilbertSchmidt {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  /// q₁⁻².
  double bound = 0.0;
  bool below_bound = false;
};

/// Σ_{i≠j} m(ij)²/(m(i)m(j)) = Σ_{i≠j} a_i a_j = (Σa)² - Σa², with the
/// tails of Σa and Σa² enclosed as in the secular series.
inline HilbertSchmidt hilbert_schmidt_sum(const PSequence& p, double tol = 1e-15) {
  double s1 = 0.0;
  double s2 = 0.0;
  for (std::size_t j = 1; j <= detail::kMaxSecularTerms; ++j) {
    const double aj = p.a(j);
    s1 += aj;
    s2 += aj * aj;
    if (j < p.head_size()) continue;
    const double q_next = p.q(j + 1);
    const double t1 = p.tail_sum_after(j);
    const double t2 = p.tail_sum_sq_after(j);
    const double s1_lo = s1 + t1;
    const double s1_hi = s1 + t1 / q_next;
    const double s2_lo = s2 + t2;
    const double s2_hi = s2 + t2 / (q_next * q_next);
    const double lo = s1_lo * s1_lo - s2_hi;
    const double hi = s1_hi * s1_hi - s2_lo;
    if ((hi - lo) / 2.0 <= tol * std::max(1.0, hi) || j == detail::kMaxSecularTerms) {
      const double round = 8.0 * detail::kEps * (s1_hi * s1_hi + s2_hi);
      HilbertSchmidt out;
      out.lower = lo - round;
      out.upper = hi + round;
      out.value = 0.5 * (lo + hi);
      const double q1 = p.q(1);
      out.bound = 1.0 / (q1 * q1);
      out.below_bound = out.upper < out.bound;
      return out;
    }
  }
  throw Error(Errc::numerical_failure, "Hilbert-Schmidt series did not converge");
}

/// The same sum for the finite complete graph with weights p_i p_j, where
/// m(i) = p_i (S - p_i) and S = Σ p.
inline double hilbert_schmidt_finite(std::span<const double> p) {
  double total = 0.0;
  for (double x : p) total += x;
  double s1 = 0.0;
  double s2 = 0.0;
  for (double x : p) {
    const double a = x / (total - x);
    s1 += a;
    s2 += a * a;
  }
  return s1 * s1 - s2;
}

/// Σ over ordered pairs of adjacent vertices of m(vw)²/(m(v)m(w)).
inline double hilbert_schmidt_graph(const WeightedGraph& g) {
  double s = 0.0;
  for (const Edge& e : g.edges()) s += 2.0 * e.w * e.w / (g.measure(e.u) * g.measure(e.v));
  return s;
}

/// Finite section of K(p) on vertices 1..N (indices 0..N-1), m(ij) = p_i p_j.
/// Products that underflow to zero are left out as edges.
inline WeightedGraph truncate_K(const PSequence& p, std::size_t n, bool renormalize = false) {
  if (n < 2) throw Error(Errc::bad_parameter, "truncation needs at least 2 vertices");
  std::vector<double> w(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = p.p(i + 1);
    total += w[i];
  }
  if (renormalize) {
    for (double& x : w) x /= total;
  }
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double m = w[i] * w[j];
      if (m > 0.0) edges.push_back({i, j, m});
    }
  }
  return WeightedGraph::build(edges, {}, n);
}

inline nlohmann::json to_json(const SecularRoot& r) {
  return {{"index", r.index},
          {"bracket", {r.lo, r.hi}},
          {"value", r.value},
          {"enclosure", {r.enclosure_lo, r.enclosure_hi}},
          {"residual", r.residual},
          {"tail_bound", r.tail_bound},
          {"truncation_terms", r.truncation_terms},
          {"membership_sum", r.membership_sum},
          {"newton_steps", r.newton_steps}};
}

}  // namespace specgraph
