#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "synclab/graph.hpp"
#include "synclab/partition.hpp"
#include "synclab/synchrony.hpp"

namespace synclab {

/// Bijection of the cells; image[c] is where c goes (0-based).
struct Permutation {
  std::vector<int> image;

  static Permutation identity(int n) {
    Permutation p{std::vector<int>(static_cast<std::size_t>(n))};
    std::iota(p.image.begin(), p.image.end(), 0);
    return p;
  }

  /// Cycle notation with 1-based cells, e.g. "(1 4)(2 5)"; the identity is "()".
  static Permutation from_cycles(int n, const std::string& text) {
    Permutation p = identity(n);
    std::vector<int> cycle;
    std::string number;
    auto flush_number = [&] {
      if (number.empty()) return;
      const int c = std::stoi(number) - 1;
      if (c < 0 || c >= n) throw Error(ErrorCode::InvalidArgument, "cycle entry out of range: " + number);
      cycle.push_back(c);
      number.clear();
    };
    for (char ch : text) {
      if (ch >= '0' && ch <= '9') {
        number += ch;
      } else if (ch == ' ' || ch == ',') {
        flush_number();
      } else if (ch == '(') {
        cycle.clear();
      } else if (ch == ')') {
        flush_number();
        for (std::size_t i = 0; i < cycle.size(); ++i)
          p.image[static_cast<std::size_t>(cycle[i])] = cycle[(i + 1) % cycle.size()];
        cycle.clear();
      } else {
        throw Error(ErrorCode::InvalidArgument, "bad character in cycle notation: " + text);
      }
    }
    std::vector<int> sorted = p.image;
    std::sort(sorted.begin(), sorted.end());
    for (int c = 0; c < n; ++c)
      if (sorted[static_cast<std::size_t>(c)] != c) throw Error(ErrorCode::InvalidArgument, "not a bijection: " + text);
    return p;
  }

  int size() const { return static_cast<int>(image.size()); }
  int operator()(int c) const { return image[static_cast<std::size_t>(c)]; }

  bool is_identity() const {
    for (int c = 0; c < size(); ++c)
      if (image[static_cast<std::size_t>(c)] != c) return false;
    return true;
  }

  /// (*this ∘ other)(c) = (*this)(other(c)).
  Permutation after(const Permutation& other) const {
    Permutation out{std::vector<int>(image.size())};
    for (int c = 0; c < size(); ++c) out.image[static_cast<std::size_t>(c)] = (*this)(other(c));
    return out;
  }

  Permutation inverse() const {
    Permutation out{std::vector<int>(image.size())};
    for (int c = 0; c < size(); ++c) out.image[static_cast<std::size_t>(image[static_cast<std::size_t>(c)])] = c;
    return out;
  }

  std::string cycles() const {
    std::string out;
    std::vector<bool> seen(image.size(), false);
    for (int start = 0; start < size(); ++start) {
      if (seen[static_cast<std::size_t>(start)] || (*this)(start) == start) continue;
      out += '(';
      int c = start;
      bool first = true;
      do {
        if (!first) out += ' ';
        out += std::to_string(c + 1);
        seen[static_cast<std::size_t>(c)] = true;
        c = (*this)(c);
        first = false;
      } while (c != start);
      out += ')';
    }
    return out.empty() ? "()" : out;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation& a, const Permutation& b) { return a.image <=> b.image; }
};

/// Closure of a set of permutations of {0..n-1} under composition.
inline std::vector<Permutation> generate_group(int n, const std::vector<Permutation>& generators) {
  std::set<Permutation> elements{Permutation::identity(n)};
  std::vector<Permutation> frontier{Permutation::identity(n)};
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (const auto& x : frontier)
      for (const auto& s : generators) {
        auto y = s.after(x);
        if (elements.insert(y).second) next.push_back(std::move(y));
      }
    frontier = std::move(next);
  }
  return {elements.begin(), elements.end()};
}

/// Greedy generating set: walk the sorted elements and keep each one not
/// already generated by those kept so far.
inline std::vector<Permutation> greedy_generators(int n, const std::vector<Permutation>& elements) {
  std::vector<Permutation> gens;
  std::set<Permutation> span{Permutation::identity(n)};
  for (const auto& g : elements) {
    if (span.count(g)) continue;
    gens.push_back(g);
    auto closure = generate_group(n, gens);
    span = std::set<Permutation>(closure.begin(), closure.end());
    if (span.size() == elements.size()) break;
  }
  return gens;
}

struct AutomorphismGroup {
  int n = 0;
  std::vector<Permutation> elements;  // sorted, identity first
  std::vector<Permutation> generators;

  std::size_t order() const { return elements.size(); }
  bool contains(const Permutation& p) const { return std::binary_search(elements.begin(), elements.end(), p); }
};

struct AutomorphismOptions {
  int max_cells = 14;
};

namespace detail {

class AutomorphismSearch {
 public:
  explicit AutomorphismSearch(const NetworkGraph& g) : g_(g), n_(g.n_cells()) {
    for (int c = 0; c < n_; ++c) invariant_.push_back(invariant(c));
    image_.assign(static_cast<std::size_t>(n_), -1);
    used_.assign(static_cast<std::size_t>(n_), false);
  }

  std::vector<Permutation> run() {
    found_.clear();
    extend(0);
    std::sort(found_.begin(), found_.end());
    return found_;
  }

 private:
  // Cell class, per-class in/out degrees and the multiset of neighbour
  // degrees: anything an automorphism must preserve.
  std::vector<int> invariant(int c) const {
    const int k = g_.n_edge_classes();
    std::vector<int> inv{g_.cell_class(c)};
    std::vector<int> in(static_cast<std::size_t>(k), 0), out(static_cast<std::size_t>(k), 0);
    std::vector<int> neighbour_degrees;
    for (int d = 0; d < n_; ++d) {
      if (int cls = g_.arrow_class(d, c); cls >= 0) {
        ++in[static_cast<std::size_t>(cls)];
        neighbour_degrees.push_back(g_.in_degree(d) * (k + 1) + cls);
      }
      if (int cls = g_.arrow_class(c, d); cls >= 0) ++out[static_cast<std::size_t>(cls)];
    }
    std::sort(neighbour_degrees.begin(), neighbour_degrees.end());
    inv.insert(inv.end(), in.begin(), in.end());
    inv.insert(inv.end(), out.begin(), out.end());
    inv.insert(inv.end(), neighbour_degrees.begin(), neighbour_degrees.end());
    return inv;
  }

  bool consistent(int u, int v) const {
    for (int w = 0; w < u; ++w) {
      const int x = image_[static_cast<std::size_t>(w)];
      if (g_.arrow_class(w, u) != g_.arrow_class(x, v) || g_.arrow_class(u, w) != g_.arrow_class(v, x)) return false;
      if (g_.arrow_class(w, u) >= 0 && g_.arrow_weight(w, u) != g_.arrow_weight(x, v)) return false;
      if (g_.arrow_class(u, w) >= 0 && g_.arrow_weight(u, w) != g_.arrow_weight(v, x)) return false;
    }
    return true;
  }

  void extend(int u) {
    if (u == n_) {
      found_.push_back(Permutation{image_});
      return;
    }
    for (int v = 0; v < n_; ++v) {
      if (used_[static_cast<std::size_t>(v)] || invariant_[static_cast<std::size_t>(v)] != invariant_[static_cast<std::size_t>(u)])
        continue;
      if (!consistent(u, v)) continue;
      image_[static_cast<std::size_t>(u)] = v;
      used_[static_cast<std::size_t>(v)] = true;
      extend(u + 1);
      used_[static_cast<std::size_t>(v)] = false;
    }
    image_[static_cast<std::size_t>(u)] = -1;
  }

  const NetworkGraph& g_;
  int n_;
  std::vector<std::vector<int>> invariant_;
  std::vector<int> image_;
  std::vector<bool> used_;
  std::vector<Permutation> found_;
};

}  // namespace detail

/// All permutations preserving cell classes and typed arrows, by
/// backtracking with vertex-invariant pruning.
inline AutomorphismGroup find_automorphisms(const NetworkGraph& g, const AutomorphismOptions& options = {}) {
  if (g.n_cells() > options.max_cells)
    throw Error(ErrorCode::TooManyCells, std::to_string(g.n_cells()) + " cells exceeds the automorphism guard of " +
                                             std::to_string(options.max_cells));
  AutomorphismGroup grp;
  grp.n = g.n_cells();
  grp.elements = detail::AutomorphismSearch(g).run();
  grp.generators = greedy_generators(grp.n, grp.elements);
  return grp;
}

/// Orbits of the group generated by `perms`.
inline Partition orbit_partition(const std::vector<Permutation>& perms, int n) {
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int c) {
    while (parent[static_cast<std::size_t>(c)] != c) c = parent[static_cast<std::size_t>(c)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(c)])];
    return c;
  };
  for (const auto& p : perms) {
    if (p.size() != n) throw Error(ErrorCode::InvalidArgument, "permutation size differs from n");
    for (int c = 0; c < n; ++c) {
      const int a = find(c), b = find(p(c));
      if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
  }
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) labels[static_cast<std::size_t>(c)] = find(c);
  return Partition(labels);
}

struct ExoticVerdict {
  bool exotic = false;
  /// The class-stabiliser subgroup H; when symmetric its orbits are the pattern.
  std::vector<Permutation> stabilizer;
  std::vector<Permutation> witness_generators;
};

/// A balanced pattern is symmetric iff the subgroup of automorphisms that
/// map every class onto itself has exactly the pattern's classes as orbits.
inline ExoticVerdict detect_exotic(const NetworkGraph& g, const Partition& p, const AutomorphismGroup& aut) {
  if (!is_balanced(g, p)) throw Error(ErrorCode::NotBalanced, "pattern " + p.to_string() + " is not balanced");
  ExoticVerdict verdict;
  for (const auto& gamma : aut.elements) {
    bool keeps = true;
    for (int c = 0; c < p.n_cells() && keeps; ++c) keeps = p.class_of(gamma(c)) == p.class_of(c);
    if (keeps) verdict.stabilizer.push_back(gamma);
  }
  verdict.exotic = orbit_partition(verdict.stabilizer, p.n_cells()) != p;
  if (!verdict.exotic) verdict.witness_generators = greedy_generators(p.n_cells(), verdict.stabilizer);
  return verdict;
}

inline ExoticVerdict detect_exotic(const NetworkGraph& g, const Partition& p) {
  return detect_exotic(g, p, find_automorphisms(g));
}

/// Lexicographically least restricted-growth string in the Aut-orbit of p.
inline Partition canonical_representative(const Partition& p, const AutomorphismGroup& aut) {
  Partition best = p;
  for (const auto& gamma : aut.elements) {
    auto q = p.permuted(gamma.image);
    if (q.labels() < best.labels()) best = std::move(q);
  }
  return best;
}

struct ConjugacyClass {
  Partition representative;
  std::vector<int> members;  // indices into the input pattern list
};

/// Groups patterns into Aut(G)-orbits, ordered by their representatives.
inline std::vector<ConjugacyClass> conjugacy_group_patterns(const std::vector<Partition>& patterns,
                                                            const AutomorphismGroup& aut) {
  std::map<std::vector<int>, ConjugacyClass> groups;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    auto rep = canonical_representative(patterns[i], aut);
    auto& cls = groups[rep.labels()];
    cls.representative = rep;
    cls.members.push_back(static_cast<int>(i));
  }
  std::vector<ConjugacyClass> out;
  for (auto& [key, cls] : groups) out.push_back(std::move(cls));
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return canonical_less(a.representative, b.representative); });
  return out;
}

inline std::vector<ConjugacyClass> conjugacy_group_patterns(const SynchronyLattice& lattice,
                                                            const AutomorphismGroup& aut) {
  std::vector<Partition> patterns;
  for (const auto& p : lattice.patterns) patterns.push_back(p.partition);
  return conjugacy_group_patterns(patterns, aut);
}

}  // namespace synclab
