// Acceptance checks: one line per criterion, "criterion k: PASS|FAIL ...".
// Exit status is nonzero when any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oracles.hpp"
#include "specgraph/specgraph.hpp"

using namespace specgraph;

namespace {

// Pinned tolerances.
constexpr double kResidualCap = 1e-10;
constexpr double kRuntimeCap = 1.0;       // seconds
constexpr double kKappaExact = 1e-15;     // 1 - 0.9 is not exactly 0.1 in binary
constexpr double kRelative = 1e-5;
constexpr double kGapTol = 1e-9;
constexpr double kHalfLineTol = 1e-10;
constexpr double kLadderTol = 0.01;
constexpr double kTraceExact = 1e-15;
constexpr double kKappaTol = 1e-12;
constexpr double kSuiteCap = 60.0;        // seconds
constexpr double kSectionTol = 1e-6;
constexpr double kBelowOne = 1e-9;        // eigenvalues in [0, 1 - kBelowOne) count as below 1

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

PSequence example() { return PSequence({0.9, 0.09, 0.009}, 0.1); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome criterion1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const PSequence p = example();
  const SecularRoot mu1 = delta_eigenvalue(p, 1);
  const SecularRoot mu2 = delta_eigenvalue(p, 2);
  const double elapsed = seconds_since(t0);
  o.detail.precision(16);
  o.detail << "mu1=" << mu1.value << " mu2=" << mu2.value << " residual+bound=" << mu1.residual + mu1.tail_bound << ","
           << mu2.residual + mu2.tail_bound << " time=" << elapsed << "s";
  o.require(mu1.value >= 1.94747 && mu1.value <= 2.0, "mu1 in [1.94747, 2]");
  o.require(mu2.value >= 1.00908 && mu2.value <= 1.099, "mu2 in [1.00908, 1.099]");
  for (const SecularRoot& r : {mu1, mu2}) {
    o.require(r.residual + r.tail_bound <= kResidualCap, "certified residual <= 1e-10");
    o.require(r.enclosure_lo <= r.value && r.value <= r.enclosure_hi, "enclosure contains the root");
  }
  o.require(elapsed < kRuntimeCap, "runtime < 1 s");
  return o;
}

Outcome criterion2() {
  Outcome o;
  const PSequence p = example();
  const KappaK k = kappa_K(p);
  const AsymmetryK a = asymmetry_K(p);
  const bool gap_free = eigenvalue_free(p, 1.2, 1.8);
  o.detail.precision(16);
  o.detail << "kappa=" << k.value << " asymmetry=" << a.value << " in [" << a.lower << ", " << a.upper << "]"
           << " free(1.2,1.8)=" << (gap_free ? "yes" : "no");
  o.require(k.certified && std::fabs(k.value - 0.1) <= kKappaExact, "kappa = 0.1");
  o.require(a.lower >= 0.00908 && a.upper <= 0.099, "asymmetry in [0.00908, 0.099]");
  o.require(a.upper <= 2.0 * k.value + kKappaExact, "asymmetry <= 2 kappa");
  o.require(gap_free, "no eigenvalue in (1.2, 1.8)");
  return o;
}

Outcome criterion3() {
  Outcome o;
  const PSequence p = example();
  const MuTopBounds b = mu_top_refined(p);
  const double mu1 = delta_eigenvalue(p, 1).value;
  // Exact values of the two freezing points for this sequence.
  const double tail = 0.01;
  const double a2 = 0.09 / 0.91;
  const double a3 = 0.009 / 0.991;
  const double r3 = 1.0 / 0.991;
  const double x_plus = -tail / 9.0;
  const double x_minus = tail * r3 / (a3 - a2);
  const auto rel = [](double x, double y) { return std::fabs(x - y) / std::fabs(y); };
  o.detail.precision(16);
  o.detail << "x+=" << b.x_plus << " x-=" << b.x_minus << " interval=[" << b.lower << ", " << b.upper
           << "] mu1=" << mu1;
  o.require(rel(b.x_plus, x_plus) <= kRelative, "x+ within 1e-5 relative of -0.01/9");
  o.require(rel(b.x_minus, x_minus) <= kRelative, "x- within 1e-5 relative of T r3/(a3 - a2)");
  // The quoted literals are rounded; they must agree to the digits shown.
  o.require(std::fabs(b.x_plus - (-0.001111)) <= 0.5e-6, "x+ rounds to -0.001111");
  o.require(std::fabs(b.x_minus - (-0.11235)) <= 0.5e-5, "x- rounds to -0.11235");
  o.require(b.lower <= mu1 && mu1 <= b.upper, "refined interval contains mu1");
  return o;
}

Outcome criterion4() {
  Outcome o;
  double worst = 0.0;
  for (std::size_t n = 3; n <= 12; ++n) {
    const double gap = spectral_gap(spectrum(generate({.family = Family::complete_unit, .size = n})));
    worst = std::max(worst, std::fabs(gap - static_cast<double>(n) / static_cast<double>(n - 1)));
  }
  o.detail << "max |gap - n/(n-1)| over n=3..12: " << worst;
  o.require(worst <= kGapTol, "gap = n/(n-1) to 1e-9");
  return o;
}

Outcome criterion5() {
  Outcome o;
  o.detail.precision(6);
  for (double r : {0.3, 0.5, 0.7}) {
    const double limit = (1.0 - r) / (1.0 + r);
    double prev = INFINITY;
    bool monotone = true;
    double last = 0.0;
    for (std::size_t n = 6; n <= 20; ++n) {
      last = cheeger_constant_exact(generate({.family = Family::halfline_m4, .size = n, .r = r})).value;
      if (last > prev + 1e-15) monotone = false;
      prev = last;
    }
    const double err = std::fabs(last - limit);
    o.detail << " r=" << r << ": h(20)-limit=" << err << (monotone ? " monotone" : " not monotone") << ";";
    o.require(monotone, "monotone for r=" + std::to_string(r));
    o.require(err <= kHalfLineTol, "within 1e-10 at N=20 for r=" + std::to_string(r));
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  const double r = 0.5;
  const FamilySpec spec{.family = Family::ladder_L, .size = 10, .r = r, .rho = r};
  const InvariantReport hbar = dual_cheeger_exact(generate(spec));
  const auto trace = tail_ratio_trace(spec, 2, 10);
  const double target = 4.0 * r / (3.0 * r + 1.0);
  double trace_err = 0.0;
  for (const TracePoint& t : trace) trace_err = std::max(trace_err, std::fabs(t.value - target));
  o.detail.precision(10);
  o.detail << "hbar(N=10)=" << hbar.value << " alternating value=0.8 trace max|value - 4r/(3r+1)|=" << trace_err;
  o.require(std::fabs(hbar.value - 0.8) <= kLadderTol, "hbar on N=10 within 0.01 of 0.8");
  o.require(trace_err <= kTraceExact, "trace equals 4r/(3r+1)");
  return o;
}

Outcome criterion7() {
  Outcome o;
  double worst = 0.0;
  for (std::size_t n = 2; n <= 8; ++n) {
    const double expected = static_cast<double>(n / 2) / static_cast<double>(n);  // ceil((n-1)/2) = floor(n/2)
    const double k = kappa_exact(generate({.family = Family::complete_unit, .size = n + 1})).value;
    worst = std::max(worst, std::fabs(k - expected));
  }
  for (std::size_t n = 3; n <= 9; ++n) {
    const double k = kappa_exact(generate({.family = Family::cycle, .size = n})).value;
    worst = std::max(worst, std::fabs(k - (n % 2 == 0 ? 0.0 : 0.5)));
  }
  o.detail << "max deviation " << worst;
  o.require(worst <= kKappaTol, "kappa formulas");
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::size_t graphs = 0;
  std::size_t mismatches = 0;
  const auto check = [&](const WeightedGraph& g) {
    ++graphs;
    const bool bip = is_bipartite(g).bipartite;
    if (bip != oracle::bipartite(g)) ++mismatches;
    if ((kappa_exact(g).value == 0.0) != bip) ++mismatches;
  };
  for (std::size_t n = 2; n <= 6; ++n) {
    for (const WeightedGraph& g : oracle::all_connected_unit_graphs(n)) check(g);
  }
  const std::size_t exhaustive = graphs;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const std::size_t n = 2 + seed % 11;
    if (seed % 3 == 0) {
      // Weighted random trees keep bipartite graphs in the sample.
      std::mt19937_64 rng(seed);
      check(oracle::random_connected(rng, n, 0.0));
    } else {
      check(random_graph({.n = n, .edge_probability = seed % 3 == 1 ? 0.3 : 0.6, .seed = seed}));
    }
  }
  o.detail << exhaustive << " exhaustive + " << graphs - exhaustive << " random graphs, " << mismatches
           << " mismatches";
  o.require(mismatches == 0, "kappa = 0 iff bipartite");
  return o;
}

Outcome criterion9() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  SuiteConfig cfg;
  cfg.seeds = 200;
  cfg.n_min = 4;
  cfg.n_max = 12;
  const SuiteSummary s = run_suite(cfg);
  const double elapsed = seconds_since(t0);
  o.detail << s.graphs << " graphs, " << s.checks << " checks, " << s.failures << " failures, " << elapsed << "s";
  for (const char* id : {"cheeger.gap_lower", "cheeger.gap_upper", "dual.top_lower", "dual.top_upper",
                         "asymmetry.bound", "coarea.volume", "coarea.boundary", "conjugation.entries",
                         "conjugation.spectrum", "ppsi.bound", "split.balance", "split.norm", "split.energy",
                         "aux.norm", "aux.quotient", "rchain.lower", "rchain.middle", "rchain.upper",
                         "kappa.dual_sum"}) {
    const auto it = s.by_id.find(id);
    o.require(it != s.by_id.end() && it->second.count > 0, std::string("check ran: ") + id);
  }
  o.require(s.failures == 0, "zero failures");
  o.require(elapsed < kSuiteCap, "suite < 60 s");
  return o;
}

Outcome criterion10() {
  Outcome o;
  const PSequence p = example();
  const Spectrum s = spectrum(truncate_K(p, 200));
  const double mu1 = delta_eigenvalue(p, 1).value;
  std::size_t below_one = 0;
  for (double x : s.eigenvalues) {
    if (x >= 0.0 - s.tolerance && x < 1.0 - kBelowOne) ++below_one;
  }
  o.detail.precision(16);
  o.detail << "dense top=" << s.eigenvalues.back() << " secular mu1=" << mu1 << " eigenvalues in [0,1): " << below_one;
  o.require(std::fabs(s.eigenvalues.back() - mu1) <= kSectionTol, "top within 1e-6 of mu1");
  o.require(below_one == 1, "exactly one eigenvalue in [0, 1)");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "Criteria to run (default: all)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);
  if (selected.empty()) {
    for (int k = 1; k <= 10; ++k) selected.push_back(k);
  }
  const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3, criterion4,
                                                          criterion5, criterion6, criterion7, criterion8,
                                                          criterion9, criterion10};
  bool all = true;
  for (int k : selected) {
    Outcome o;
    try {
      o = criteria[static_cast<std::size_t>(k - 1)]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    std::printf("criterion %d: %s %s\n", k, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
