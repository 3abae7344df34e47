#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "specgraph/specgraph.hpp"

using namespace specgraph;

namespace {

std::vector<double> random_function(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> f(n);
  for (double& x : f) x = u(rng);
  return f;
}

}  // namespace

TEST(Spectrum, PathOnThree) {
  const Spectrum s = spectrum(generate({.family = Family::path, .size = 3}));
  ASSERT_EQ(s.eigenvalues.size(), 3u);
  EXPECT_NEAR(s.eigenvalues[0], 0.0, 1e-12);
  EXPECT_NEAR(s.eigenvalues[1], 1.0, 1e-12);
  EXPECT_NEAR(s.eigenvalues[2], 2.0, 1e-12);
  EXPECT_NEAR(spectral_gap(s), 1.0, 1e-12);
  EXPECT_NEAR(lambda_top(s), 2.0, 1e-12);
}

TEST(Spectrum, CompleteGraphGap) {
  for (std::size_t n = 3; n <= 12; ++n) {
    const Spectrum s = spectrum(generate({.family = Family::complete_unit, .size = n}));
    const double expected = static_cast<double>(n) / static_cast<double>(n - 1);
    EXPECT_NEAR(spectral_gap(s), expected, 1e-9);
    for (std::size_t k = 1; k < n; ++k) EXPECT_NEAR(s.eigenvalues[k], expected, 1e-9);
  }
}

TEST(Spectrum, CycleEigenvalues) {
  for (std::size_t n = 3; n <= 10; ++n) {
    const Spectrum s = spectrum(generate({.family = Family::cycle, .size = n}));
    std::vector<double> expected;
    for (std::size_t k = 0; k < n; ++k) expected.push_back(1.0 - std::cos(2.0 * M_PI * static_cast<double>(k) / n));
    std::sort(expected.begin(), expected.end());
    for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(s.eigenvalues[k], expected[k], 1e-12);
  }
}

TEST(Spectrum, MatchesNonsymmetricSolver) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const WeightedGraph g = oracle::random_connected(rng, 3 + trial % 10, 0.4);
    const Spectrum s = spectrum(g);
    const std::vector<double> ref = oracle::laplacian_eigenvalues(g);
    ASSERT_EQ(s.eigenvalues.size(), ref.size());
    for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_NEAR(s.eigenvalues[k], ref[k], 1e-9);
    EXPECT_GE(s.eigenvalues.front(), 0.0);
    EXPECT_LE(s.eigenvalues.back(), 2.0);
  }
}

TEST(Spectrum, ZeroMultiplicityCountsComponents) {
  const WeightedGraph g = build_graph({{0, 1, 1.0}, {1, 2, 2.0}, {3, 4, 1.0}});
  const Spectrum s = spectrum(g);
  EXPECT_EQ(s.component_count, 2u);
  EXPECT_NEAR(s.eigenvalues[0], 0.0, 1e-12);
  EXPECT_NEAR(s.eigenvalues[1], 0.0, 1e-12);
  EXPECT_GT(spectral_gap(s), 1e-9);
}

TEST(Spectrum, BipartiteSpectrumIsSymmetric) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    // Random tree: bipartite.
    const WeightedGraph g = oracle::random_connected(rng, 8, 0.0);
    const Spectrum s = spectrum(g);
    EXPECT_NEAR(lambda_top(s), 2.0, 1e-9);
    EXPECT_LT(hausdorff_asymmetry(s.eigenvalues).value, 1e-9);
  }
}

TEST(Spectrum, EigenfunctionsAreOrthonormalInWeightedInnerProduct) {
  std::mt19937_64 rng(8);
  const WeightedGraph g = oracle::random_connected(rng, 9, 0.4);
  SpectralOptions opts;
  opts.eigenvectors = true;
  const Spectrum s = spectrum(g, opts);
  ASSERT_TRUE(s.eigenvectors.has_value());
  EXPECT_LT(s.max_residual, 1e-10);
  const Eigen::MatrixXd& f = *s.eigenvectors;
  for (Eigen::Index a = 0; a < f.cols(); ++a) {
    for (Eigen::Index b = 0; b < f.cols(); ++b) {
      std::vector<double> fa(f.rows()), fb(f.rows());
      for (Eigen::Index v = 0; v < f.rows(); ++v) {
        fa[static_cast<std::size_t>(v)] = f(v, a);
        fb[static_cast<std::size_t>(v)] = f(v, b);
      }
      EXPECT_NEAR(inner(g, fa, fb), a == b ? 1.0 : 0.0, 1e-10);
      if (a == b) {
        EXPECT_NEAR(rayleigh(g, fa), s.eigenvalues[static_cast<std::size_t>(a)], 1e-10);
      }
    }
  }
  const nlohmann::json j = to_json(s);
  EXPECT_EQ(j["eigenvectors"].size(), 9u);
}

TEST(Spectrum, RayleighRejectsZero) {
  const WeightedGraph g = generate({.family = Family::path, .size = 3});
  EXPECT_THROW(rayleigh(g, std::vector<double>(3, 0.0)), Error);
}

TEST(SignedConjugation, IdentityAndSpectraOnAllPartitions) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t n = 4 + trial;
    const WeightedGraph g = oracle::random_connected(rng, n, 0.5);
    for (std::uint64_t a = 1; a < (std::uint64_t{1} << (n - 1)); ++a) {
      const SignedConjugation c = signed_conjugation(g, Partition::from_mask(n, a));
      EXPECT_TRUE(c.entries.passed) << c.entries.lhs;
      EXPECT_TRUE(c.spectra.passed) << c.spectra.lhs;
    }
  }
}

TEST(SignedConjugation, BlockNormBoundedByKappaOfPartition) {
  std::mt19937_64 rng(10);
  for (std::size_t n = 3; n <= 10; ++n) {
    const WeightedGraph g = oracle::random_connected(rng, n, 0.4);
    for (std::uint64_t a = 1; a < (std::uint64_t{1} << n) - 1; ++a) {
      const Partition part = Partition::from_mask(n, a);
      EXPECT_LE(p_psi_norm(g, part), kappa_partition(g, part) + 1e-12);
    }
  }
}

TEST(Coarea, LevelSetIdentities) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + trial % 8;
    const WeightedGraph g = oracle::random_connected(rng, n, 0.4);
    std::vector<double> f = random_function(rng, n);
    if (trial % 3 == 0) f[0] = f[1];  // ties between levels
    const CoareaReport r = coarea_check(g, f);
    EXPECT_TRUE(r.volume.passed) << r.volume.lhs << " vs " << r.volume.rhs;
    EXPECT_TRUE(r.boundary.passed) << r.boundary.lhs << " vs " << r.boundary.rhs;
  }
}

TEST(AuxiliaryGraph, NormPreservedAndQuotientNotWorse) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + trial % 8;
    const WeightedGraph g = oracle::random_connected(rng, n, 0.5);
    const std::vector<double> f = random_function(rng, n);
    const AuxiliaryGraph aux = auxiliary_graph(g, f);
    EXPECT_TRUE(aux.norm.passed);
    EXPECT_TRUE(aux.quotient.passed) << aux.quotient.lhs << " vs " << aux.quotient.rhs;
    EXPECT_EQ(aux.f_prime.size(), aux.graph.vertex_count());
    EXPECT_EQ(aux.duplicate_of.size(), n);
  }
}

TEST(Matrices, RandomWalkRowsSumToOne) {
  std::mt19937_64 rng(17);
  const WeightedGraph g = oracle::random_connected(rng, 7, 0.5);
  const Eigen::MatrixXd p = random_walk_matrix(g);
  for (Eigen::Index u = 0; u < p.rows(); ++u) EXPECT_NEAR(p.row(u).sum(), 1.0, 1e-14);
  const Eigen::MatrixXd l = laplacian_matrix(g);
  EXPECT_LT((l - (Eigen::MatrixXd::Identity(7, 7) - p)).cwiseAbs().maxCoeff(), 1e-15);
  const Eigen::MatrixXd nm = normalized_adjacency(g);
  EXPECT_LT((nm - nm.transpose()).cwiseAbs().maxCoeff(), 1e-15);
}
