#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace specgraph {

/// Failure categories raised by the library. The CLI reports these names
/// verbatim in its machine-readable error output.
enum class Errc {
  duplicate_edge,
  self_loop,
  isolated_vertex,
  nonpositive_weight,
  vertex_out_of_range,
  size_mismatch,
  empty_set,
  not_disjoint,
  invalid_partition,
  disconnected_graph,
  too_large,
  numerical_failure,
  empty_spectrum,
  zero_function,
  not_orthogonal,
  pole_proximity,
  bracket_collapse,
  degenerate_quadratic,
  out_of_regime,
  insufficient_roots,
  bad_parameter,
  no_closed_form,
  no_tail_structure,
  parse_error,
};

constexpr std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::duplicate_edge: return "DuplicateEdge";
    case Errc::self_loop: return "SelfLoop";
    case Errc::isolated_vertex: return "IsolatedVertex";
    case Errc::nonpositive_weight: return "NonpositiveWeight";
    case Errc::vertex_out_of_range: return "VertexOutOfRange";
    case Errc::size_mismatch: return "SizeMismatch";
    case Errc::empty_set: return "EmptySet";
    case Errc::not_disjoint: return "NotDisjoint";
    case Errc::invalid_partition: return "InvalidPartition";
    case Errc::disconnected_graph: return "DisconnectedGraph";
    case Errc::too_large: return "TooLarge";
    case Errc::numerical_failure: return "NumericalFailure";
    case Errc::empty_spectrum: return "EmptySpectrum";
    case Errc::zero_function: return "ZeroFunction";
    case Errc::not_orthogonal: return "NotOrthogonal";
    case Errc::pole_proximity: return "PoleProximity";
    case Errc::bracket_collapse: return "BracketCollapse";
    case Errc::degenerate_quadratic: return "DegenerateQuadratic";
    case Errc::out_of_regime: return "OutOfRegime";
    case Errc::insufficient_roots: return "InsufficientRoots";
    case Errc::bad_parameter: return "BadParameter";
    case Errc::no_closed_form: return "NoClosedForm";
    case Errc::no_tail_structure: return "NoTailStructure";
    case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code),
        message_(message) {}

  Errc code() const noexcept { return code_; }
  std::string_view name() const noexcept { return errc_name(code_); }
  const std::string& message() const noexcept { return message_; }

 private:
  Errc code_;
  std::string message_;
};

/// Shortest-ish rendering of a number for messages.
inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace specgraph
