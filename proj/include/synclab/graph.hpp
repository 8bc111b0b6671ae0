#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "synclab/error.hpp"

namespace synclab {

/// A typed arrow tail -> head. Cells are 0-based internally and 1-based in
/// every document or report.
struct Arrow {
  int tail = 0;
  int head = 0;
  int edge_class = 0;
  double weight = 1.0;

  friend bool operator==(const Arrow&, const Arrow&) = default;
};

/// An edge as written in a graph document: undirected {u, v} unless the graph
/// is declared directed, in which case it is the arrow u -> v.
struct EdgeSpec {
  int u = 0;
  int v = 0;
  std::string edge_class;
  std::optional<double> weight;
};

enum class GraphKind { regular, homogeneous, nonhomogeneous };

inline std::string to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::regular: return "regular";
    case GraphKind::homogeneous: return "homogeneous";
    case GraphKind::nonhomogeneous: return "nonhomogeneous";
  }
  return "unknown";
}

struct InputSignature {
  int cell = 0;
  std::map<std::string, int> counts;

  int total() const {
    int sum = 0;
    for (const auto& [cls, count] : counts) sum += count;
    return sum;
  }
  bool equivalent_to(const InputSignature& other) const { return counts == other.counts; }
};

struct AdjacencyMatrix {
  std::string edge_class;
  Eigen::MatrixXd entries;
};

/// Network graph of identical cells with typed arrows.
///
/// Graphs are bidirected unless constructed with `directed = true`; in the
/// bidirected case every EdgeSpec contributes both arrows u -> v and v -> u
/// with the same class and weight. The value is immutable after construction.
class NetworkGraph {
 public:
  NetworkGraph() = default;

  NetworkGraph(int n_cells, std::vector<std::string> cell_classes, const std::vector<EdgeSpec>& edges,
               bool directed = false)
      : n_(n_cells), directed_(directed) {
    if (n_cells <= 0) throw Error(ErrorCode::MalformedDocument, "graph needs at least one cell");
    if (cell_classes.empty()) cell_classes.assign(static_cast<std::size_t>(n_cells), "p");
    if (static_cast<int>(cell_classes.size()) != n_cells)
      throw Error(ErrorCode::MalformedDocument, "cell_classes length differs from cell count");

    std::set<std::string> cell_names(cell_classes.begin(), cell_classes.end());
    cell_class_names_.assign(cell_names.begin(), cell_names.end());
    for (const auto& name : cell_classes) cell_class_.push_back(index_of(cell_class_names_, name));

    std::set<std::string> edge_names;
    for (const auto& e : edges) edge_names.insert(e.edge_class);
    edge_class_names_.assign(edge_names.begin(), edge_names.end());

    class_matrix_.assign(static_cast<std::size_t>(n_ * n_), -1);
    weight_matrix_.assign(static_cast<std::size_t>(n_ * n_), 0.0);
    for (const auto& e : edges) {
      if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_)
        throw Error(ErrorCode::MalformedDocument,
                    "edge endpoint out of range: " + std::to_string(e.u + 1) + "-" + std::to_string(e.v + 1));
      if (e.u == e.v) throw Error(ErrorCode::SelfEdge, "edge (" + std::to_string(e.u + 1) + "," +
                                                           std::to_string(e.u + 1) + ") is a self edge");
      const int cls = index_of(edge_class_names_, e.edge_class);
      if (e.weight) weighted_ = true;
      add_arrow(e.u, e.v, cls, e.weight);
      if (!directed_) add_arrow(e.v, e.u, cls, e.weight);
    }

    for (int head = 0; head < n_; ++head)
      for (int tail = 0; tail < n_; ++tail) {
        const int cls = class_matrix_[idx(tail, head)];
        if (cls >= 0) arrows_.push_back(Arrow{tail, head, cls, weight_matrix_[idx(tail, head)]});
      }
    input_offsets_.assign(static_cast<std::size_t>(n_ + 1), 0);
    for (const auto& a : arrows_) ++input_offsets_[static_cast<std::size_t>(a.head + 1)];
    for (int c = 0; c < n_; ++c) input_offsets_[c + 1] += input_offsets_[c];

    check_compatibility();
  }

  int n_cells() const { return n_; }
  bool directed() const { return directed_; }
  bool weighted() const { return weighted_; }

  bool bidirected() const {
    for (const auto& a : arrows_) {
      if (arrow_class(a.head, a.tail) != a.edge_class) return false;
      if (arrow_weight(a.head, a.tail) != a.weight) return false;
    }
    return true;
  }

  int n_edge_classes() const { return static_cast<int>(edge_class_names_.size()); }
  const std::vector<std::string>& edge_class_names() const { return edge_class_names_; }
  const std::string& edge_class_name(int cls) const { return edge_class_names_.at(static_cast<std::size_t>(cls)); }
  int edge_class_index(const std::string& name) const {
    auto it = std::lower_bound(edge_class_names_.begin(), edge_class_names_.end(), name);
    return (it != edge_class_names_.end() && *it == name) ? static_cast<int>(it - edge_class_names_.begin()) : -1;
  }

  int n_cell_classes() const { return static_cast<int>(cell_class_names_.size()); }
  const std::vector<std::string>& cell_class_names() const { return cell_class_names_; }
  int cell_class(int c) const { return cell_class_.at(static_cast<std::size_t>(c)); }
  const std::string& cell_class_name(int c) const { return cell_class_names_[static_cast<std::size_t>(cell_class(c))]; }

  /// All arrows, grouped by head then ordered by tail.
  const std::vector<Arrow>& arrows() const { return arrows_; }

  /// Arrows whose head is `c`, i.e. the input set I(c).
  std::span<const Arrow> inputs(int c) const {
    return std::span<const Arrow>(arrows_).subspan(input_offsets_[c], input_offsets_[c + 1] - input_offsets_[c]);
  }

  /// Class of the arrow tail -> head, or -1.
  int arrow_class(int tail, int head) const { return class_matrix_[idx(tail, head)]; }
  double arrow_weight(int tail, int head) const { return weight_matrix_[idx(tail, head)]; }

  int in_degree(int c) const { return input_offsets_[c + 1] - input_offsets_[c]; }

  /// Edges as they are written in a document: u < v for bidirected graphs,
  /// every arrow for directed ones; sorted by (u, v).
  std::vector<EdgeSpec> edge_specs() const {
    std::vector<EdgeSpec> out;
    for (int u = 0; u < n_; ++u)
      for (int v = 0; v < n_; ++v) {
        const int cls = arrow_class(u, v);
        if (cls < 0) continue;
        if (!directed_ && u > v) continue;
        EdgeSpec e{u, v, edge_class_names_[static_cast<std::size_t>(cls)], std::nullopt};
        if (weighted_) e.weight = arrow_weight(u, v);
        out.push_back(std::move(e));
      }
    return out;
  }

  std::size_t n_edges() const { return directed_ ? arrows_.size() : arrows_.size() / 2; }

  std::vector<std::string> cell_class_labels() const {
    std::vector<std::string> out;
    for (int c = 0; c < n_; ++c) out.push_back(cell_class_name(c));
    return out;
  }

  friend bool operator==(const NetworkGraph& a, const NetworkGraph& b) {
    return a.n_ == b.n_ && a.directed_ == b.directed_ && a.weighted_ == b.weighted_ &&
           a.cell_class_labels() == b.cell_class_labels() && a.edge_class_names_ == b.edge_class_names_ &&
           a.arrows_ == b.arrows_;
  }

 private:
  std::size_t idx(int tail, int head) const { return static_cast<std::size_t>(tail * n_ + head); }

  static int index_of(const std::vector<std::string>& sorted, const std::string& name) {
    return static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), name) - sorted.begin());
  }

  void add_arrow(int tail, int head, int cls, std::optional<double> weight) {
    const double w = weight.value_or(1.0);
    int& slot = class_matrix_[idx(tail, head)];
    if (slot >= 0) {
      if (slot != cls)
        throw Error(ErrorCode::ConflictingEdgeClass, "pair " + std::to_string(tail + 1) + "-" +
                                                         std::to_string(head + 1) + " listed with two classes");
      if (weight_matrix_[idx(tail, head)] != w)
        throw Error(ErrorCode::ConflictingEdgeClass, "pair " + std::to_string(tail + 1) + "-" +
                                                         std::to_string(head + 1) + " listed with two weights");
      return;
    }
    slot = cls;
    weight_matrix_[idx(tail, head)] = w;
  }

  // Every edge of one class joins the same unordered pair of cell classes.
  void check_compatibility() const {
    std::vector<std::optional<std::pair<int, int>>> seen(edge_class_names_.size());
    for (const auto& a : arrows_) {
      const int x = cell_class(a.tail), y = cell_class(a.head);
      const std::pair<int, int> key{std::min(x, y), std::max(x, y)};
      auto& slot = seen[static_cast<std::size_t>(a.edge_class)];
      if (!slot) {
        slot = key;
      } else if (*slot != key) {
        throw Error(ErrorCode::CompatibilityViolation,
                    "edge class '" + edge_class_names_[static_cast<std::size_t>(a.edge_class)] +
                        "' joins incompatible cell classes");
      }
    }
  }

  int n_ = 0;
  bool directed_ = false;
  bool weighted_ = false;
  std::vector<std::string> cell_class_names_;
  std::vector<int> cell_class_;
  std::vector<std::string> edge_class_names_;
  std::vector<int> class_matrix_;
  std::vector<double> weight_matrix_;
  std::vector<Arrow> arrows_;
  std::vector<int> input_offsets_;
};

inline InputSignature input_signature(const NetworkGraph& g, int c) {
  if (c < 0 || c >= g.n_cells()) throw Error(ErrorCode::InvalidArgument, "cell out of range");
  InputSignature sig{c, {}};
  for (const auto& a : g.inputs(c)) ++sig.counts[g.edge_class_name(a.edge_class)];
  return sig;
}

inline GraphKind classify(const NetworkGraph& g) {
  const auto first = input_signature(g, 0);
  for (int c = 1; c < g.n_cells(); ++c)
    if (!input_signature(g, c).equivalent_to(first)) return GraphKind::nonhomogeneous;
  return g.n_edge_classes() <= 1 ? GraphKind::regular : GraphKind::homogeneous;
}

/// One matrix per edge class with (A)_{ij} = w for the arrow j -> i.
inline std::vector<AdjacencyMatrix> adjacency_matrices(const NetworkGraph& g) {
  std::vector<AdjacencyMatrix> out;
  for (int cls = 0; cls < g.n_edge_classes(); ++cls) {
    AdjacencyMatrix m{g.edge_class_name(cls), Eigen::MatrixXd::Zero(g.n_cells(), g.n_cells())};
    for (const auto& a : g.arrows())
      if (a.edge_class == cls) m.entries(a.head, a.tail) = a.weight;
    out.push_back(std::move(m));
  }
  return out;
}

/// Sum of all class adjacency matrices.
inline Eigen::MatrixXd total_adjacency(const NetworkGraph& g) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.n_cells(), g.n_cells());
  for (const auto& m : adjacency_matrices(g)) a += m.entries;
  return a;
}

// ---------------------------------------------------------------------------
// Generators

inline NetworkGraph make_ring(int n) {
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "ring needs n >= 3");
  std::vector<EdgeSpec> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, "a", std::nullopt});
  return NetworkGraph(n, {}, edges);
}

/// Circulant graph C_n(1, 2): nearest and next-nearest neighbours.
inline NetworkGraph make_gn(int n) {
  if (n < 5) throw Error(ErrorCode::InvalidArgument, "G_n needs n >= 5");
  std::vector<EdgeSpec> edges;
  for (int i = 0; i < n; ++i) {
    edges.push_back({i, (i + 1) % n, "a", std::nullopt});
    edges.push_back({i, (i + 2) % n, "a", std::nullopt});
  }
  return NetworkGraph(n, {}, edges);
}

namespace detail {
inline std::vector<EdgeSpec> one_based(std::initializer_list<std::pair<int, int>> pairs, const std::string& cls) {
  std::vector<EdgeSpec> out;
  for (auto [u, v] : pairs) out.push_back({u - 1, v - 1, cls, std::nullopt});
  return out;
}
inline void append(std::vector<EdgeSpec>& to, std::vector<EdgeSpec> from) {
  to.insert(to.end(), from.begin(), from.end());
}
}  // namespace detail

/// Graphs drawn in the worked examples: "fig1" (directed, two arrow types,
/// exotic pattern), "fig2" (nonhomogeneous, theta/phi) and "fig5" (the
/// homogeneous sine/identity variant of G_6).
inline NetworkGraph make_paper_graph(const std::string& name) {
  using detail::append;
  using detail::one_based;
  std::vector<EdgeSpec> edges;
  if (name == "fig1") {
    append(edges, one_based({{1, 2}, {1, 5}, {2, 1}, {2, 4}, {3, 6}, {6, 3}}, "a"));
    append(edges, one_based({{1, 3}, {1, 4}, {1, 6}, {2, 3}, {2, 5}, {2, 6},
                             {3, 1}, {3, 4}, {4, 1}, {5, 2}, {6, 2}, {6, 5}},
                            "b"));
    return NetworkGraph(6, {}, edges, /*directed=*/true);
  }
  if (name == "fig2") {
    append(edges, one_based({{1, 2}, {1, 5}, {2, 4}, {4, 5}}, "theta"));
    append(edges, one_based({{1, 6}, {2, 3}, {3, 4}, {5, 6}}, "phi"));
    return NetworkGraph(6, {"p", "p", "q", "p", "p", "q"}, edges);
  }
  if (name == "fig5") {
    append(edges, one_based({{1, 2}, {1, 3}, {2, 6}, {3, 5}, {4, 5}, {4, 6}}, "sin"));
    append(edges, one_based({{1, 5}, {1, 6}, {2, 3}, {2, 4}, {3, 4}, {5, 6}}, "id"));
    return NetworkGraph(6, {}, edges);
  }
  throw Error(ErrorCode::UnknownFixture, "unknown paper graph '" + name + "'");
}

}  // namespace synclab
