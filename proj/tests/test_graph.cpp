#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "specgraph/specgraph.hpp"

using namespace specgraph;

namespace {

WeightedGraph triangle_with_tail() {
  return build_graph({{0, 1, 1.0}, {1, 2, 2.0}, {0, 2, 0.5}, {2, 3, 1.5}});
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

TEST(VertexSet, MaskRoundTripAndAlgebra) {
  const VertexSet s(6, {0, 2, 5});
  EXPECT_EQ(s.mask(), 0b100101u);
  EXPECT_EQ(VertexSet::from_mask(6, s.mask()), s);
  EXPECT_EQ(s.count(), 3u);
  EXPECT_EQ(s.complement().mask(), 0b011010u);
  EXPECT_FALSE(s.intersects(s.complement()));
  EXPECT_EQ((s | s.complement()), VertexSet::full(6));
  EXPECT_TRUE((s & s.complement()).empty());
  EXPECT_EQ(s.indices(), (std::vector<std::size_t>{0, 2, 5}));
}

TEST(VertexSet, PartitionRejectsEmptySide) {
  expect_errc(Errc::invalid_partition, [] { Partition::from_side(VertexSet::full(4)); });
  const Partition p = Partition::from_mask(4, 0b0011);
  EXPECT_EQ(p.sign(0), 1);
  EXPECT_EQ(p.sign(3), -1);
}

TEST(WeightedGraph, MeasuresAndTotals) {
  const WeightedGraph g = triangle_with_tail();
  EXPECT_EQ(g.vertex_count(), 4u);
  EXPECT_DOUBLE_EQ(g.measure(0), 1.5);
  EXPECT_DOUBLE_EQ(g.measure(2), 4.0);
  EXPECT_DOUBLE_EQ(g.total_measure(), 2.0 * g.total_edge_weight());
  EXPECT_DOUBLE_EQ(g.weight(1, 2), 2.0);
  EXPECT_DOUBLE_EQ(g.weight(1, 3), 0.0);
}

TEST(WeightedGraph, RejectsMalformedInput) {
  expect_errc(Errc::self_loop, [] { build_graph({{0, 0, 1.0}}); });
  expect_errc(Errc::nonpositive_weight, [] { build_graph({{0, 1, 0.0}}); });
  expect_errc(Errc::nonpositive_weight, [] { build_graph({{0, 1, -2.0}}); });
  expect_errc(Errc::duplicate_edge, [] { build_graph({{0, 1, 1.0}, {1, 0, 2.0}}); });
  expect_errc(Errc::isolated_vertex, [] { build_graph({{0, 2, 1.0}}); });
}

TEST(WeightedGraph, SetMeasuresSplitVolume) {
  const WeightedGraph g = triangle_with_tail();
  const VertexSet s(4, {0, 1});
  const SetMeasures m = set_measures(g, s);
  EXPECT_DOUBLE_EQ(m.volume, g.measure(0) + g.measure(1));
  EXPECT_DOUBLE_EQ(m.boundary, 2.5);
  EXPECT_DOUBLE_EQ(m.volume, m.boundary + 2.0 * m.interior);
  EXPECT_DOUBLE_EQ(cut_weight(g, s, s.complement()), m.boundary);
}

TEST(WeightedGraph, LaplacianFormsAgree) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const WeightedGraph g = oracle::random_connected(rng, 7, 0.4);
    std::vector<double> f(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double& x : f) x = u(rng);
    const VertexFunction lf = apply_laplacian(g, f);
    EXPECT_NEAR(inner(g, lf, f), dirichlet_form(g, f), 1e-12);
    EXPECT_NEAR(dirichlet_form(g, f) + q_form(g, f), 2.0 * norm_squared(g, f), 1e-12);
  }
}

TEST(WeightedGraph, ComponentsAndConnectivity) {
  const WeightedGraph g = build_graph({{0, 1, 1.0}, {2, 3, 1.0}});
  EXPECT_EQ(component_count(g), 2u);
  EXPECT_FALSE(is_connected(g));
  expect_errc(Errc::disconnected_graph, [&] { require_connected(g); });
  EXPECT_TRUE(is_connected(triangle_with_tail()));
}

TEST(WeightedGraph, FingerprintTracksWeights) {
  const WeightedGraph a = build_graph({{0, 1, 1.0}, {1, 2, 2.0}});
  const WeightedGraph b = build_graph({{0, 1, 1.0}, {1, 2, 2.0}});
  const WeightedGraph c = build_graph({{0, 1, 1.0}, {1, 2, 2.5}});
  EXPECT_EQ(graph_fingerprint(a), graph_fingerprint(b));
  EXPECT_NE(graph_fingerprint(a), graph_fingerprint(c));
}

TEST(GraphJson, RoundTripIsBitExact) {
  const std::string text = R"({"labels":["a","b","c"],"edges":[[0,1,0.1],[1,2,3],[0,2,1e-7]]})";
  const WeightedGraph g = graph_from_json_text(text);
  const WeightedGraph back = graph_from_json_text(graph_to_json_text(g));
  ASSERT_EQ(back.edge_count(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(back.edges()[k].w, g.edges()[k].w);
  }
  EXPECT_EQ(back.labels(), g.labels());
  EXPECT_EQ(graph_to_json_text(back), graph_to_json_text(g));
}

TEST(GraphJson, RejectsBadDocuments) {
  expect_errc(Errc::parse_error, [] { graph_from_json_text("{"); });
  expect_errc(Errc::parse_error, [] { graph_from_json_text(R"({"edges":[[0,1]]})"); });
  expect_errc(Errc::parse_error, [] { graph_from_json_text(R"({"edges":[[0.5,1,1]]})"); });
  expect_errc(Errc::vertex_out_of_range, [] { graph_from_json_text(R"({"edges":[[-1,1,1]]})"); });
  expect_errc(Errc::size_mismatch, [] { graph_from_json_text(R"({"labels":["a"],"edges":[[0,1,1]]})"); });
}

TEST(GraphJson, ReadsFromStream) {
  std::istringstream in(R"({"edges":[[0,1,2],[1,2,2]]})");
  const WeightedGraph g = read_graph(in);
  EXPECT_DOUBLE_EQ(g.measure(1), 4.0);
}

TEST(Hausdorff, KnownDistances) {
  const std::vector<double> a{0.0, 1.0};
  const std::vector<double> b{0.0, 3.0};
  EXPECT_DOUBLE_EQ(directed_hausdorff(a, b), 1.0);
  EXPECT_DOUBLE_EQ(directed_hausdorff(b, a), 2.0);
  EXPECT_DOUBLE_EQ(hausdorff_distance(a, b), 2.0);
}

TEST(Hausdorff, AsymmetryRoutesAgreeAndVanishOnSymmetricSets) {
  const std::vector<double> sym{0.0, 0.5, 1.0, 1.5, 2.0};
  EXPECT_DOUBLE_EQ(hausdorff_asymmetry(sym).value, 0.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> s(5);
    for (double& x : s) x = u(rng);
    const Asymmetry a = hausdorff_asymmetry(s);
    EXPECT_NEAR(a.symmetric, a.one_sided, 1e-15);
  }
  expect_errc(Errc::empty_spectrum, [] { hausdorff_asymmetry(std::vector<double>{}); });
}
