#pragma once

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "specgraph/specgraph.hpp"

namespace specgraph::cli {

using nlohmann::json;

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

namespace detail {

struct Flags {
  std::string in = "-";
  std::string out = "-";
  unsigned threads = 1;
  std::optional<std::size_t> cap;
  std::uint64_t seed = 20240601;
  std::size_t seeds = 200;
  std::size_t n_min = 4;
  std::size_t n_max = 12;
  bool no_families = false;
  bool renormalize = false;
  bool eigenvectors = false;
  bool connected_only = false;
  std::vector<double> head;
  std::optional<double> tail_ratio;
  std::optional<double> tail_first;
  std::size_t roots = 2;
  double tol = 1e-9;
  std::string family;
  std::size_t n = 4;
  double r = 0.5;
  std::optional<double> rho;
  std::string function = "F";
  std::optional<double> from;
  std::optional<double> to;
  std::optional<std::size_t> bracket;
  std::size_t samples = 200;
  std::optional<std::size_t> from_n;
};

inline std::string read_all(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string read_input(const Flags& f, Streams& io) {
  if (f.in == "-") return read_all(io.in);
  std::ifstream file(f.in, std::ios::binary);
  if (!file) throw Error(Errc::parse_error, "cannot open '" + f.in + "'");
  return read_all(file);
}

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, e.what());
  }
}

inline EnumerationOptions enumeration(const Flags& f) {
  EnumerationOptions o;
  o.limits = EnumerationLimits::from_env();
  if (f.cap) o.limits.cheeger = o.limits.dual_cheeger = o.limits.kappa = *f.cap;
  o.threads = f.threads;
  o.connected_only = f.connected_only;
  return o;
}

inline PSequence sequence(const Flags& f, Streams& io) {
  if (!f.head.empty()) {
    if (!f.tail_ratio) throw Error(Errc::bad_parameter, "--head needs --tail-ratio");
    return PSequence(f.head, *f.tail_ratio, f.tail_first);
  }
  try {
    return psequence_from_json(parse_json(read_input(f, io)));
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, e.what());
  }
}

inline FamilySpec family_spec(const Flags& f, Streams& io) {
  FamilySpec s;
  s.family = parse_family(f.family);
  s.size = f.n;
  s.r = f.r;
  s.rho = f.rho ? *f.rho : f.r;
  s.renormalize = f.renormalize;
  if (s.family == Family::K_m1) s.p = sequence(f, io);
  s.validate();
  return s;
}

inline WeightedGraph input_graph(const Flags& f, Streams& io) {
  try {
    return graph_from_json(parse_json(read_input(f, io)));
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, e.what());
  }
}

inline json spectrum_json(const WeightedGraph& g, const Flags& f) {
  SpectralOptions so;
  so.zero_threshold = f.tol;
  so.eigenvectors = f.eigenvectors;
  const Spectrum s = spectrum(g, so);
  json j = to_json(s);
  j["spectral_gap"] = spectral_gap(s, f.tol);
  j["lambda_top"] = lambda_top(s);
  j["asymmetry"] = hausdorff_asymmetry(s.eigenvalues).value;
  j["graph_hash"] = graph_fingerprint(g);
  return j;
}

inline json kgraph_json(const PSequence& p, const Flags& f) {
  RootOptions ro;
  json j;
  j["psequence"] = to_json(p);
  auto roots = json::array();
  for (std::size_t i = 1; i <= f.roots; ++i) roots.push_back(to_json(delta_eigenvalue(p, i, ro)));
  j["mu"] = std::move(roots);
  const SecularRoot pos = positive_p_eigenvalue(p, ro);
  j["positive_eigenvalue"] = to_json(pos);
  const KappaK k = kappa_K(p);
  j["kappa"] = {{"value", k.value}, {"certified", k.certified}, {"threshold", k.threshold}};
  try {
    const MuTopBounds b = mu_top_refined(p);
    j["mu_top_bounds"] = {{"x_plus", b.x_plus},   {"x_minus", b.x_minus},       {"lower", b.lower},
                          {"upper", b.upper},     {"upper_raw", b.upper_raw},   {"monotone", b.monotone}};
  } catch (const Error& e) {
    j["mu_top_bounds"] = {{"error", std::string(e.name())}, {"message", e.message()}};
  }
  try {
    const AsymmetryK a = asymmetry_K(p, ro);
    j["asymmetry"] = {{"value", a.value},
                      {"lower", a.lower},
                      {"upper", a.upper},
                      {"first_case", a.first_case},
                      {"roots_used", a.roots.size()}};
  } catch (const Error& e) {
    j["asymmetry"] = {{"error", std::string(e.name())}, {"message", e.message()}};
  }
  const HilbertSchmidt hs = hilbert_schmidt_sum(p);
  j["hilbert_schmidt"] = {{"value", hs.value},
                          {"lower", hs.lower},
                          {"upper", hs.upper},
                          {"bound", hs.bound},
                          {"below_bound", hs.below_bound}};
  return j;
}

inline std::size_t default_trace_start(const FamilySpec& s) {
  if (s.family == Family::K_m2) return 2;
  if (s.family == Family::ladder_L && !(s.rho < s.r)) return 0;
  return 1;
}

inline void trace_secular(const PSequence& p, const Flags& f, std::ostream& out) {
  const bool is_g = f.function == "G";
  double lo = 0.0;
  double hi = 0.0;
  if (f.bracket) {
    const std::size_t i = *f.bracket;
    if (i == 0) throw Error(Errc::bad_parameter, "--bracket starts at 1");
    if (is_g) {
      lo = p.r(i + 1);
      hi = p.r(i);
    } else {
      lo = p.alpha(i);
      hi = p.alpha(i + 1);
    }
  } else {
    if (!f.from || !f.to) throw Error(Errc::bad_parameter, "trace needs --from and --to, or --bracket");
    lo = *f.from;
    hi = *f.to;
  }
  if (!(lo < hi)) throw Error(Errc::bad_parameter, "trace range is empty");
  if (f.samples < 2) throw Error(Errc::bad_parameter, "--samples must be at least 2");
  out << (is_g ? "mu,G,error\n" : "lambda,F,error\n");
  out.precision(17);
  for (std::size_t k = 0; k < f.samples; ++k) {
    const double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(f.samples - 1);
    try {
      const BoundedSum s = is_g ? secular_G(p, x) : secular_F(p, x);
      out << x << ',' << s.value << ',' << s.error << '\n';
    } catch (const Error& e) {
      if (e.code() != Errc::pole_proximity) throw;
    }
  }
}

inline void trace_family(const FamilySpec& s, const Flags& f, std::ostream& out) {
  const std::size_t lo = f.from_n ? *f.from_n : default_trace_start(s);
  out << "n,value,first,second\n";
  out.precision(17);
  for (const TracePoint& t : tail_ratio_trace(s, lo, f.n)) {
    out << t.n << ',' << t.value << ',' << t.first << ',' << t.second << '\n';
  }
}

inline void emit_error(std::ostream& err, std::string_view name, const std::string& message) {
  err << json{{"error", name}, {"message", message}}.dump() << '\n';
}

}  // namespace detail

/// Runs one CLI invocation. Exit codes: 0 success, 1 computation error or
/// failed verification, 2 usage error.
inline int run(int argc, const char* const* argv, Streams io) {
  using detail::Flags;
  Flags f;
  CLI::App app{"Spectral and combinatorial invariants of weighted graphs"};
  app.require_subcommand(1, 1);

  const auto add_io = [&](CLI::App* c) {
    c->add_option("--in", f.in, "Input path, - for stdin");
    c->add_option("--out", f.out, "Output path, - for stdout");
  };
  const auto add_enum = [&](CLI::App* c) {
    c->add_option("--threads", f.threads, "Worker threads")->check(CLI::Range(1u, 256u));
    c->add_option("--cap", f.cap, "Enumeration cap in vertices")->check(CLI::Range(std::size_t{1}, kMaskWidthLimit));
  };
  const auto add_family = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("--family", f.family, "Family name");
    if (required) opt->required();
    c->add_option("--n", f.n, "Family size")->check(CLI::PositiveNumber);
    c->add_option("--r", f.r, "Decay ratio r");
    c->add_option("--rho", f.rho, "Ladder ratio rho (defaults to r)");
  };
  const auto add_sequence = [&](CLI::App* c) {
    c->add_option("--head", f.head, "Leading weights p_1 > p_2 > ...")->delimiter(',');
    c->add_option("--tail-ratio", f.tail_ratio, "Geometric tail ratio");
    c->add_option("--tail-first", f.tail_first, "First tail weight (defaults to last head weight times ratio)");
  };

  auto* gen = app.add_subcommand("gen", "Emit a family graph as graph JSON");
  add_family(gen, true);
  add_sequence(gen);
  gen->add_flag("--renormalize", f.renormalize, "Rescale truncated K_m1 weights to sum 1");
  gen->add_option("--out", f.out, "Output path, - for stdout");

  auto* spec_cmd = app.add_subcommand("spectrum", "Spectrum of the normalized Laplacian");
  add_io(spec_cmd);
  spec_cmd->add_flag("--eigenvectors", f.eigenvectors, "Include eigenfunctions");
  spec_cmd->add_option("--tol", f.tol, "Zero threshold for the gap")->check(CLI::PositiveNumber);

  auto* cheeger = app.add_subcommand("cheeger", "Exact Cheeger constant");
  add_io(cheeger);
  add_enum(cheeger);
  cheeger->add_flag("--connected-only", f.connected_only, "Search connected sets only");

  auto* dual = app.add_subcommand("dual-cheeger", "Exact dual Cheeger constant");
  add_io(dual);
  add_enum(dual);

  auto* kappa = app.add_subcommand("kappa", "Exact kappa");
  add_io(kappa);
  add_enum(kappa);

  auto* kgraph = app.add_subcommand("kgraph", "Secular solver for the infinite complete graph");
  add_io(kgraph);
  add_sequence(kgraph);
  kgraph->add_option("--roots", f.roots, "Number of Laplacian eigenvalues above 1 to report")
      ->check(CLI::Range(std::size_t{1}, std::size_t{100000}));

  auto* verify = app.add_subcommand("verify", "Run the property suite");
  verify->add_option("--out", f.out, "Output path, - for stdout");
  verify->add_option("--seed", f.seed, "Base seed");
  verify->add_option("--seeds", f.seeds, "Random graphs to check");
  verify->add_option("--n-min", f.n_min, "Smallest random graph")->check(CLI::Range(std::size_t{2}, std::size_t{20}));
  verify->add_option("--n-max", f.n_max, "Largest random graph")->check(CLI::Range(std::size_t{2}, std::size_t{20}));
  verify->add_option("--threads", f.threads, "Worker threads")->check(CLI::Range(1u, 256u));
  verify->add_option("--tol", f.tol, "Inequality tolerance")->check(CLI::PositiveNumber);
  verify->add_flag("--no-families", f.no_families, "Skip the family graphs");

  auto* trace = app.add_subcommand("trace", "CSV traces of F, G or family witness ratios");
  add_io(trace);
  add_sequence(trace);
  add_family(trace, false);
  trace->add_option("--function", f.function, "F or G")->check(CLI::IsMember({"F", "G"}));
  trace->add_option("--from", f.from, "Left end of the sampled range");
  trace->add_option("--to", f.to, "Right end of the sampled range");
  trace->add_option("--bracket", f.bracket, "Sample inside bracket i instead of --from/--to");
  trace->add_option("--samples", f.samples, "Sample count");
  trace->add_option("--from-n", f.from_n, "First index of a family trace");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    io.out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    io.err << e.what() << '\n';
    return 2;
  }
  if (verify->parsed() && f.n_min > f.n_max) {
    io.err << "--n-min must not exceed --n-max\n";
    return 2;
  }

  std::ofstream file;
  if (f.out != "-") {
    file.open(f.out, std::ios::binary);
    if (!file) {
      detail::emit_error(io.err, errc_name(Errc::parse_error), "cannot open '" + f.out + "' for writing");
      return 1;
    }
  }
  std::ostream& out = f.out == "-" ? io.out : file;

  try {
    if (gen->parsed()) {
      out << graph_to_json_text(generate(detail::family_spec(f, io))) << '\n';
    } else if (spec_cmd->parsed()) {
      out << detail::spectrum_json(detail::input_graph(f, io), f).dump() << '\n';
    } else if (cheeger->parsed()) {
      const WeightedGraph g = detail::input_graph(f, io);
      out << to_json(cheeger_constant_exact(g, detail::enumeration(f)), g).dump() << '\n';
    } else if (dual->parsed()) {
      const WeightedGraph g = detail::input_graph(f, io);
      out << to_json(dual_cheeger_exact(g, detail::enumeration(f)), g).dump() << '\n';
    } else if (kappa->parsed()) {
      const WeightedGraph g = detail::input_graph(f, io);
      out << to_json(kappa_exact(g, detail::enumeration(f)), g).dump() << '\n';
    } else if (kgraph->parsed()) {
      out << detail::kgraph_json(detail::sequence(f, io), f).dump() << '\n';
    } else if (verify->parsed()) {
      SuiteConfig cfg;
      cfg.seeds = f.seeds;
      cfg.base_seed = f.seed;
      cfg.n_min = f.n_min;
      cfg.n_max = f.n_max;
      cfg.threads = f.threads;
      cfg.families = !f.no_families;
      cfg.options.tolerance = f.tol;
      cfg.options.limits = EnumerationLimits::from_env();
      const SuiteSummary s = run_suite(cfg);
      out << to_json(s).dump() << '\n';
      return s.passed() ? 0 : 1;
    } else if (trace->parsed()) {
      if (!f.family.empty()) {
        detail::trace_family(detail::family_spec(f, io), f, out);
      } else {
        detail::trace_secular(detail::sequence(f, io), f, out);
      }
    }
  } catch (const Error& e) {
    detail::emit_error(io.err, e.name(), e.message());
    return 1;
  } catch (const json::exception& e) {
    detail::emit_error(io.err, errc_name(Errc::parse_error), e.what());
    return 1;
  }
  return 0;
}

}  // namespace specgraph::cli
