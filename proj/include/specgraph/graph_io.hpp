#pragma once

#include <cmath>
#include <istream>
#include <iterator>
#include <string>
#include <vector>

#include <json.hpp>

#include "specgraph/error.hpp"
#include "specgraph/graph.hpp"

namespace specgraph {

/// Graph document: {"labels": [...optional...], "edges": [[u, v, w], ...]}.
inline WeightedGraph graph_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("edges") || !doc["edges"].is_array()) {
    throw Error(Errc::parse_error, "graph document needs an \"edges\" array");
  }
  std::vector<Edge> edges;
  edges.reserve(doc["edges"].size());
  for (const auto& item : doc["edges"]) {
    if (!item.is_array() || item.size() != 3 || !item[0].is_number_integer() || !item[1].is_number_integer() ||
        !item[2].is_number()) {
      throw Error(Errc::parse_error, "each edge must be [u, v, w] with integer endpoints");
    }
    if (item[0].get<long long>() < 0 || item[1].get<long long>() < 0) {
      throw Error(Errc::vertex_out_of_range, "negative vertex index");
    }
    edges.push_back({item[0].get<std::size_t>(), item[1].get<std::size_t>(), item[2].get<double>()});
  }
  std::vector<std::string> labels;
  if (doc.contains("labels") && !doc["labels"].is_null()) {
    if (!doc["labels"].is_array()) throw Error(Errc::parse_error, "\"labels\" must be an array of strings");
    for (const auto& l : doc["labels"]) {
      if (!l.is_string()) throw Error(Errc::parse_error, "\"labels\" must be an array of strings");
      labels.push_back(l.get<std::string>());
    }
  }
  return WeightedGraph::build(edges, std::move(labels));
}

inline WeightedGraph graph_from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::parse_error, e.what());
  }
  return graph_from_json(doc);
}

inline WeightedGraph read_graph(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return graph_from_json_text(text);
}

namespace detail {

// Integral weights are written as JSON integers so that "1" survives a
// round trip as "1"; everything else uses the shortest round-trip decimal.
inline nlohmann::json weight_json(double w) {
  if (std::floor(w) == w && std::fabs(w) < 9007199254740992.0) return static_cast<long long>(w);
  return w;
}

}  // namespace detail

inline nlohmann::json graph_to_json(const WeightedGraph& g) {
  nlohmann::json doc;
  if (!g.labels().empty()) doc["labels"] = g.labels();
  auto edges = nlohmann::json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v, detail::weight_json(e.w)});
  doc["edges"] = std::move(edges);
  return doc;
}

inline std::string graph_to_json_text(const WeightedGraph& g) { return graph_to_json(g).dump(); }

}  // namespace specgraph
