#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "specgraph/specgraph.hpp"

using namespace specgraph;

namespace {

PSequence example() { return PSequence({0.9, 0.09, 0.009}, 0.1); }
// p_1 = 0.3, then 0.21, 0.147, ...: slow decay, p_1 < 1/2.
PSequence slow() { return PSequence({0.3}, 0.7, 0.21); }
PSequence geometric(double r) { return PSequence({1.0 - r}, r); }

// Values computed with 50-digit arithmetic for the example sequence.
constexpr double kMu[] = {1.981543595926764, 1.0169959679011, 1.001328765313855, 1.000119259517368};

double naive_F(const PSequence& p, double lambda, std::size_t terms) {
  long double s = 0.0L;
  for (std::size_t j = 1; j <= terms; ++j) {
    const long double pj = p.p(j);
    if (pj == 0.0L) break;
    const long double a = pj / (1.0L - pj);
    s += a / (a + lambda);
  }
  return static_cast<double>(s);
}

void expect_errc(Errc code, const auto& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << errc_name(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(PSequence, AccessorsAndTails) {
  const PSequence p = example();
  EXPECT_DOUBLE_EQ(p.p(1), 0.9);
  EXPECT_DOUBLE_EQ(p.p(4), 0.0009);
  EXPECT_NEAR(p.p(6), 0.000009, 1e-20);
  EXPECT_DOUBLE_EQ(p.a(1), 9.0);
  EXPECT_DOUBLE_EQ(p.alpha(1), -9.0);
  EXPECT_DOUBLE_EQ(p.r(1), 1.0 / (1.0 - 0.9));
  EXPECT_NEAR(p.tail_sum_after(0), 1.0, 1e-15);
  EXPECT_NEAR(p.tail_sum_after(1), 0.1, 1e-15);
  EXPECT_NEAR(p.tail_sum_after(5), 0.00001, 1e-18);
  double sq = 0.0;
  for (std::size_t j = 3; j <= 60; ++j) sq += p.p(j) * p.p(j);
  EXPECT_NEAR(p.tail_sum_sq_after(2), sq, 1e-18);
}

TEST(PSequence, Validation) {
  expect_errc(Errc::bad_parameter, [] { PSequence({0.5, 0.6}, 0.1); });
  expect_errc(Errc::bad_parameter, [] { PSequence({0.9, 0.05}, 0.1); });
  expect_errc(Errc::bad_parameter, [] { PSequence({0.9, 0.09, 0.009}, 1.0); });
  expect_errc(Errc::bad_parameter, [] { PSequence({}, 0.5); });
  expect_errc(Errc::bad_parameter, [] { PSequence({0.5}, 0.5, 0.6); });
}

TEST(PSequence, JsonRoundTrip) {
  const PSequence p = psequence_from_json(nlohmann::json::parse(R"({"head":[0.9,0.09,0.009],"tail":{"ratio":0.1}})"));
  EXPECT_EQ(p.head(), example().head());
  const PSequence q = psequence_from_json(to_json(slow()));
  EXPECT_EQ(q.tail_first(), 0.21);
  expect_errc(Errc::parse_error, [] { psequence_from_json(nlohmann::json::parse(R"({"head":[0.5]})")); });
}

TEST(Secular, SeriesMatchesLongDirectSum) {
  for (const PSequence& p : {example(), slow(), geometric(0.5)}) {
    const double mid = 0.5 * (p.alpha(1) + p.alpha(2));
    const BoundedSum s = secular_F(p, mid);
    const double ref = naive_F(p, mid, 1'000'000);
    EXPECT_NEAR(s.value, ref, s.error + 1e-14 * std::fabs(ref));
  }
}

TEST(Secular, TotalMassGivesOneAtOne) {
  for (const PSequence& p : {example(), slow(), geometric(0.3)}) {
    const BoundedSum s = secular_F(p, 1.0);
    EXPECT_NEAR(s.value, 1.0, s.error + 1e-15);
    EXPECT_NEAR(secular_G(p, 0.0).value, s.value, 1e-15);
  }
}

TEST(Secular, GuardsPoles) {
  const PSequence p = example();
  expect_errc(Errc::pole_proximity, [&] { secular_F(p, p.alpha(2)); });
  expect_errc(Errc::pole_proximity, [&] { secular_G(p, p.r(1)); });
}

TEST(Secular, DecreasingInsideEachBracket) {
  const PSequence p = slow();
  for (std::size_t i = 1; i <= 30; ++i) {
    const double lo = p.alpha(i);
    const double hi = p.alpha(i + 1);
    double prev = INFINITY;
    for (double t : {0.25, 0.5, 0.75}) {
      const double v = secular_F(p, lo + t * (hi - lo)).value;
      EXPECT_LT(v, prev) << "bracket " << i;
      prev = v;
    }
    EXPECT_LT(secular_F_prime(p, 0.5 * (lo + hi)).value, 0.0);
  }
}

TEST(Secular, FiftyRootsInterlaceAndDecrease) {
  const PSequence p = slow();
  double prev = 2.0;
  for (std::size_t i = 1; i <= 50; ++i) {
    const SecularRoot r = delta_eigenvalue(p, i);
    EXPECT_GT(r.value, p.r(i + 1));
    EXPECT_LT(r.value, p.r(i));
    EXPECT_LT(r.value, prev);
    EXPECT_LE(r.enclosure_lo, r.value);
    EXPECT_GE(r.enclosure_hi, r.value);
    EXPECT_LE(r.residual, 1e-12 + r.tail_bound);
    prev = r.value;
  }
}

TEST(Secular, FrozenExampleRoots) {
  const PSequence p = example();
  for (std::size_t i = 1; i <= 4; ++i) {
    const SecularRoot r = delta_eigenvalue(p, i);
    EXPECT_NEAR(r.value, kMu[i - 1], 1e-12) << "root " << i;
    EXPECT_LE(r.residual, 1e-10);
    EXPECT_NEAR(p_eigenvalue(p, i).value, 1.0 - r.value, 1e-12);
  }
}

TEST(Secular, BracketCollapseIsReported) {
  const PSequence p = example();
  expect_errc(Errc::bracket_collapse, [&] { delta_eigenvalue(p, 40); });
}

TEST(Secular, PositiveEigenvalueIsOne) {
  EXPECT_NEAR(positive_p_eigenvalue(example()).value, 1.0, 1e-12);
  EXPECT_NEAR(positive_p_eigenvalue(slow()).value, 1.0, 1e-12);
}

TEST(Secular, EigenfunctionSatisfiesWalkEquation) {
  const PSequence p = slow();
  for (std::size_t i = 1; i <= 5; ++i) {
    const double lambda = p_eigenvalue(p, i).value;
    const Eigenfunction e = eigenfunction(p, lambda, 20);
    EXPECT_LE(e.max_residual, e.error_bound + 1e-9) << "root " << i;
  }
}

TEST(Secular, DenseTruncationApproachesTopRoots) {
  const PSequence p = example();
  const Spectrum s = spectrum(truncate_K(p, 60));
  const double top = s.eigenvalues.back();
  const double second = s.eigenvalues[s.eigenvalues.size() - 2];
  EXPECT_NEAR(top, kMu[0], 1e-6);
  EXPECT_NEAR(second, kMu[1], 1e-6);
}

TEST(Refinement, BracketsTopRoot) {
  const PSequence p = example();
  const MuTopBounds b = mu_top_refined(p);
  EXPECT_NEAR(b.x_plus, -0.01 / 9.0, 1e-15);
  EXPECT_LE(b.lower, kMu[0]);
  EXPECT_GE(b.upper, kMu[0]);
  EXPECT_TRUE(b.monotone);
  for (const PSequence& q : {slow(), geometric(0.4), geometric(0.8)}) {
    const MuTopBounds c = mu_top_refined(q);
    const double mu1 = delta_eigenvalue(q, 1).value;
    EXPECT_LE(c.lower, mu1 + 1e-12);
    EXPECT_GE(c.upper, mu1 - 1e-12);
  }
}

TEST(KappaK, ClosedFormAndThresholdBound) {
  const KappaK k = kappa_K(example());
  EXPECT_TRUE(k.certified);
  EXPECT_NEAR(k.value, 0.1, 1e-15);
  const KappaK s = kappa_K(slow());
  EXPECT_FALSE(s.certified);
  EXPECT_GT(s.value, 0.0);
  EXPECT_LE(s.value, 1.0);
  expect_errc(Errc::out_of_regime, [] { kappa_K_certified(slow()); });
}

TEST(KappaK, TruncationsDoNotBeatThresholdBound) {
  // κ of a finite section is at most the threshold value up to the mass left out.
  const PSequence p = example();
  for (std::size_t n = 4; n <= 12; ++n) {
    const double kn = kappa_exact(truncate_K(p, n, true)).value;
    EXPECT_NEAR(kn, kappa_K(p).value, 0.02) << "n = " << n;
  }
}

TEST(AsymmetryK, WithinTwiceKappa) {
  for (const PSequence& p : {example(), slow(), geometric(0.3), geometric(0.6)}) {
    const AsymmetryK a = asymmetry_K(p);
    EXPECT_LE(a.lower, a.value);
    EXPECT_GE(a.upper, a.value);
    EXPECT_LE(a.value, 2.0 * kappa_K(p).value + 1e-12);
  }
}

TEST(AsymmetryK, FromEigenvalueList) {
  EXPECT_DOUBLE_EQ(asymmetry_from_eigenvalues({1.4, 1.2}), 0.6);
  EXPECT_DOUBLE_EQ(asymmetry_from_eigenvalues({1.9, 1.55, 1.2}), 0.45);
  expect_errc(Errc::empty_spectrum, [] { asymmetry_from_eigenvalues({}); });
}

TEST(AsymmetryK, EigenvalueFreeWindow) {
  const PSequence p = example();
  EXPECT_TRUE(eigenvalue_free(p, 1.2, 1.8));
  EXPECT_FALSE(eigenvalue_free(p, 1.9, 2.0));
  EXPECT_FALSE(eigenvalue_free(p, 1.01, 1.02));
}

TEST(HilbertSchmidt, FiniteFormulaMatchesGraphSum) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> p(3 + trial % 8);
    for (double& x : p) x = u(rng);
    std::sort(p.rbegin(), p.rend());
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = i + 1; j < p.size(); ++j) edges.push_back({i, j, p[i] * p[j]});
    }
    const WeightedGraph g = build_graph(std::span<const Edge>(edges));
    EXPECT_NEAR(hilbert_schmidt_finite(p), hilbert_schmidt_graph(g), 1e-12 * hilbert_schmidt_graph(g));
  }
}

TEST(HilbertSchmidt, SeriesEnclosesLongTruncation) {
  for (const PSequence& p : {example(), slow()}) {
    const HilbertSchmidt hs = hilbert_schmidt_sum(p);
    std::vector<double> w;
    for (std::size_t j = 1; j <= 400; ++j) w.push_back(p.p(j));
    const double finite = hilbert_schmidt_finite(w);
    EXPECT_NEAR(finite, hs.value, 1e-9);
    EXPECT_LE(hs.lower, hs.value);
    EXPECT_GE(hs.upper, hs.value);
  }
  const HilbertSchmidt e = hilbert_schmidt_sum(example());
  EXPECT_TRUE(e.below_bound);
  EXPECT_NEAR(e.bound, 100.0, 1e-9);
}

TEST(Truncation, CheegerAboveHalfCollisionBound) {
  for (const PSequence& p : {example(), slow(), geometric(0.5)}) {
    for (std::size_t n = 3; n <= 14; ++n) {
      const WeightedGraph g = truncate_K(p, n, true);
      double total = 0.0;
      double sq = 0.0;
      for (std::size_t i = 1; i <= n; ++i) total += p.p(i);
      for (std::size_t i = 1; i <= n; ++i) sq += (p.p(i) / total) * (p.p(i) / total);
      EXPECT_GE(cheeger_constant_exact(g).value, (1.0 - sq) / 2.0 - 1e-12) << "n = " << n;
    }
  }
}

TEST(Truncation, DropsUnderflowedWeights) {
  const PSequence p = example();
  const WeightedGraph g = truncate_K(p, 200);
  EXPECT_EQ(g.vertex_count(), 200u);
  EXPECT_LT(g.edge_count(), 200u * 199u / 2u);
}
