#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "synclab/error.hpp"
#include "synclab/fields.hpp"
#include "synclab/graph.hpp"
#include "synclab/graph_io.hpp"

namespace synclab {

inline constexpr const char* kFixturePrefix = "fixture:";

struct FixtureInfo {
  std::string name;
  std::string kind;  // "graph" or "system"
  std::string description;
};

inline std::vector<FixtureInfo> list_fixtures() {
  return {
      {"ring<N>", "graph", "cycle on N >= 3 cells, one edge class"},
      {"g<N>", "graph", "circulant on N >= 5 cells joining nearest and next-nearest neighbours"},
      {"fig1", "graph", "directed 6-cell network with an exotic pattern {1,4},{2,5},{3,6}"},
      {"fig2", "graph", "6 cells, two cell classes, edge classes theta and phi"},
      {"fig5", "graph", "G6 with edges split into classes 'sin' and 'id'"},
      {"kuramoto-g6", "system", "g6 with sine(1) coupling, zero constants"},
      {"g6-tilde", "system", "fig5 with sin -> sine(1), id -> linear(1), zero constants"},
  };
}

namespace detail {

inline bool parse_suffix_int(const std::string& s, std::size_t from, int& out) {
  if (from >= s.size() || s.find_first_not_of("0123456789", from) != std::string::npos) return false;
  if (s.size() - from > 6) return false;
  out = std::stoi(s.substr(from));
  return true;
}

inline std::string strip_prefix(const std::string& ref) {
  const std::string prefix = kFixturePrefix;
  return ref.rfind(prefix, 0) == 0 ? ref.substr(prefix.size()) : ref;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedDocument, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedDocument, what + ": " + e.what());
  }
}

}  // namespace detail

inline bool is_fixture_ref(const std::string& ref) { return ref.rfind(kFixturePrefix, 0) == 0; }

/// Graph fixture by name ("g6", "ring5", "fig1", ...), with or without the
/// "fixture:" prefix.
inline NetworkGraph fixture_graph(const std::string& ref) {
  const std::string name = detail::strip_prefix(ref);
  int n = 0;
  if (name.rfind("ring", 0) == 0 && detail::parse_suffix_int(name, 4, n)) return make_ring(n);
  if (name.rfind("g", 0) == 0 && detail::parse_suffix_int(name, 1, n)) return make_gn(n);
  if (name == "fig1" || name == "fig2" || name == "fig5") return make_paper_graph(name);
  throw Error(ErrorCode::UnknownFixture, "no graph fixture '" + name + "'");
}

inline AdditiveLaplacianSystem fixture_system(const std::string& ref) {
  const std::string name = detail::strip_prefix(ref);
  if (name == "kuramoto-g6") return build_additive_system(make_gn(6), {{"a", OddCoupling::sine(1.0)}}, {{"p", 0.0}});
  if (name == "g6-tilde")
    return build_additive_system(make_paper_graph("fig5"),
                                 {{"sin", OddCoupling::sine(1.0)}, {"id", OddCoupling::linear(1.0)}}, {{"p", 0.0}});
  throw Error(ErrorCode::UnknownFixture, "no system fixture '" + name + "'");
}

/// A fixture reference or a path to a graph document.
inline NetworkGraph resolve_graph(const std::string& ref) {
  if (is_fixture_ref(ref)) return fixture_graph(ref);
  return parse_graph(detail::parse_json_text(detail::read_file(ref), ref));
}

inline OddCoupling parse_coupling(const json& doc) {
  try {
    const auto kind = doc.at("kind").get<std::string>();
    if (kind == "sine") return OddCoupling::sine(doc.value("amplitude", 1.0));
    if (kind == "linear") return OddCoupling::linear(doc.value("slope", 1.0));
    if (kind == "odd_polynomial") return OddCoupling::odd_polynomial(doc.at("coefficients").get<std::vector<double>>());
    if (kind == "scaled_sine_sum") {
      std::vector<std::pair<double, int>> terms;
      for (const auto& t : doc.at("terms")) {
        if (t.is_array()) terms.emplace_back(t.at(0).get<double>(), t.at(1).get<int>());
        else terms.emplace_back(t.at("a").get<double>(), t.at("m").get<int>());
      }
      return OddCoupling::scaled_sine_sum(terms);
    }
    throw Error(ErrorCode::MalformedDocument, "unknown coupling kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedDocument, std::string("coupling: ") + e.what());
  }
}

inline json coupling_to_json(const OddCoupling& c) {
  json j;
  j["kind"] = c.kind_name();
  const auto& terms = c.terms();
  switch (c.kind()) {
    case OddCoupling::Kind::Sine: j["amplitude"] = terms.front().first; break;
    case OddCoupling::Kind::Linear: j["slope"] = terms.front().first; break;
    case OddCoupling::Kind::OddPolynomial: {
      std::vector<double> coeffs;
      for (const auto& [a, p] : terms) {
        const auto idx = static_cast<std::size_t>(p);
        if (coeffs.size() <= idx) coeffs.resize(idx + 1, 0.0);
        coeffs[idx] = a;
      }
      j["coefficients"] = coeffs;
      break;
    }
    case OddCoupling::Kind::ScaledSineSum: {
      json arr = json::array();
      for (const auto& [a, m] : terms) arr.push_back({a, static_cast<int>(m)});
      j["terms"] = arr;
      break;
    }
  }
  return j;
}

/// {"graph": <graph doc or fixture ref>, "couplings": {...}, "constants": {...}}
inline AdditiveLaplacianSystem parse_system(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::MalformedDocument, "system document must be an object");
  try {
    const auto& g = doc.at("graph");
    const NetworkGraph graph = g.is_string() ? resolve_graph(g.get<std::string>()) : parse_graph(g);
    std::map<std::string, OddCoupling> couplings;
    for (const auto& [name, c] : doc.at("couplings").items()) couplings.emplace(name, parse_coupling(c));
    std::map<std::string, double> constants;
    if (doc.contains("constants"))
      for (const auto& [name, k] : doc.at("constants").items()) constants[name] = k.get<double>();
    return build_additive_system(graph, couplings, constants);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedDocument, std::string("system: ") + e.what());
  }
}

inline AdditiveLaplacianSystem resolve_system(const std::string& ref) {
  if (is_fixture_ref(ref)) return fixture_system(ref);
  return parse_system(detail::parse_json_text(detail::read_file(ref), ref));
}

}  // namespace synclab
