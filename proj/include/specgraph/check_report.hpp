#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include <json.hpp>

namespace specgraph {

/// Outcome of one inequality or identity check. slack >= -tolerance means pass.
struct CheckReport {
  std::string id;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::uint64_t graph_hash = 0;
  std::uint64_t seed = 0;

  /// lhs <= rhs up to an absolute tolerance.
  static CheckReport le(std::string id, double lhs, double rhs, double tolerance) {
    CheckReport r{std::move(id), lhs, rhs, rhs - lhs, tolerance, false, 0, 0};
    r.passed = std::isfinite(r.slack) && r.slack >= -tolerance;
    return r;
  }

  /// lhs >= rhs up to an absolute tolerance.
  static CheckReport ge(std::string id, double lhs, double rhs, double tolerance) {
    CheckReport r{std::move(id), lhs, rhs, lhs - rhs, tolerance, false, 0, 0};
    r.passed = std::isfinite(r.slack) && r.slack >= -tolerance;
    return r;
  }

  /// lhs == rhs up to rel·max(|lhs|, |rhs|) plus a 1e-15 floor.
  static CheckReport eq(std::string id, double lhs, double rhs, double rel) {
    const double tol = rel * std::max(std::fabs(lhs), std::fabs(rhs)) + 1e-15;
    CheckReport r{std::move(id), lhs, rhs, -std::fabs(lhs - rhs), tol, false, 0, 0};
    r.passed = std::isfinite(r.slack) && r.slack >= -tol;
    return r;
  }

  CheckReport& stamp(std::uint64_t hash, std::uint64_t s) {
    graph_hash = hash;
    seed = s;
    return *this;
  }
};

inline nlohmann::json to_json(const CheckReport& r) {
  return {{"id", r.id},           {"lhs", r.lhs},       {"rhs", r.rhs},
          {"slack", r.slack},     {"tolerance", r.tolerance}, {"passed", r.passed},
          {"graph_hash", r.graph_hash}, {"seed", r.seed}};
}

}  // namespace specgraph
