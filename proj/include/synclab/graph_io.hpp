#pragma once

#include <charconv>
#include <string>
#include <vector>

#include <json.hpp>

#include "synclab/graph.hpp"

namespace synclab {

using json = nlohmann::json;

namespace detail {

inline std::string edge_key(int u, int v) { return std::to_string(u + 1) + "-" + std::to_string(v + 1); }

inline std::pair<int, int> parse_edge_key(const std::string& key) {
  const auto dash = key.find('-');
  if (dash == std::string::npos) throw Error(ErrorCode::MalformedDocument, "bad weight key '" + key + "'");
  int u = 0, v = 0;
  auto r1 = std::from_chars(key.data(), key.data() + dash, u);
  auto r2 = std::from_chars(key.data() + dash + 1, key.data() + key.size(), v);
  if (r1.ec != std::errc() || r2.ec != std::errc() || r2.ptr != key.data() + key.size())
    throw Error(ErrorCode::MalformedDocument, "bad weight key '" + key + "'");
  return {u - 1, v - 1};
}

}  // namespace detail

/// Builds a graph from the canonical document
/// `{"cells": n, "cell_classes": [...], "edges": [{"u":1,"v":2,"class":"a"}], "weights": {"1-2": 1.0}}`.
/// `"directed": true` switches edges to arrows u -> v.
inline NetworkGraph parse_graph(const json& doc) {
  try {
    if (!doc.is_object()) throw Error(ErrorCode::MalformedDocument, "graph document must be an object");
    if (!doc.contains("cells") || !doc.at("cells").is_number_integer())
      throw Error(ErrorCode::MalformedDocument, "missing integer field 'cells'");
    const int n = doc.at("cells").get<int>();
    std::vector<std::string> classes;
    if (doc.contains("cell_classes")) classes = doc.at("cell_classes").get<std::vector<std::string>>();
    const bool directed = doc.value("directed", false);

    std::map<std::pair<int, int>, double> weights;
    if (doc.contains("weights")) {
      for (const auto& [key, value] : doc.at("weights").items()) {
        auto [u, v] = detail::parse_edge_key(key);
        weights[{u, v}] = value.get<double>();
        if (!directed) weights[{v, u}] = value.get<double>();
      }
    }

    std::vector<EdgeSpec> edges;
    if (!doc.contains("edges") || !doc.at("edges").is_array())
      throw Error(ErrorCode::MalformedDocument, "missing array field 'edges'");
    for (const auto& e : doc.at("edges")) {
      if (!e.contains("u") || !e.contains("v") || !e.contains("class"))
        throw Error(ErrorCode::MalformedDocument, "edge needs u, v and class");
      EdgeSpec spec{e.at("u").get<int>() - 1, e.at("v").get<int>() - 1, e.at("class").get<std::string>(),
                    std::nullopt};
      if (auto it = weights.find({spec.u, spec.v}); it != weights.end()) spec.weight = it->second;
      else if (!weights.empty()) spec.weight = 1.0;
      edges.push_back(std::move(spec));
    }
    return NetworkGraph(n, std::move(classes), edges, directed);
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::MalformedDocument, ex.what());
  }
}

inline NetworkGraph parse_graph_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::MalformedDocument, ex.what());
  }
  return parse_graph(doc);
}

inline json graph_to_json(const NetworkGraph& g) {
  json doc;
  doc["cells"] = g.n_cells();
  doc["cell_classes"] = g.cell_class_labels();
  if (g.directed()) doc["directed"] = true;
  json edges = json::array();
  json weights = json::object();
  for (const auto& e : g.edge_specs()) {
    edges.push_back({{"u", e.u + 1}, {"v", e.v + 1}, {"class", e.edge_class}});
    if (e.weight) weights[detail::edge_key(e.u, e.v)] = *e.weight;
  }
  doc["edges"] = std::move(edges);
  if (g.weighted()) doc["weights"] = std::move(weights);
  return doc;
}

/// Canonical text: keys in fixed order, edges sorted with u < v.
inline std::string serialize_graph(const NetworkGraph& g) { return graph_to_json(g).dump(2) + "\n"; }

}  // namespace synclab
