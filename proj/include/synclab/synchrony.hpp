#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <utility>
#include <vector>

#include "synclab/graph.hpp"
#include "synclab/partition.hpp"

namespace synclab {

namespace detail {

inline void require_same_size(const NetworkGraph& g, const Partition& p) {
  if (p.n_cells() != g.n_cells())
    throw Error(ErrorCode::InvalidArgument, "partition has " + std::to_string(p.n_cells()) + " cells, graph has " +
                                                std::to_string(g.n_cells()));
}

inline bool mixes_cell_classes(const NetworkGraph& g, const Partition& p) {
  std::vector<int> cls(static_cast<std::size_t>(p.n_classes()), -1);
  for (int c = 0; c < g.n_cells(); ++c) {
    int& slot = cls[static_cast<std::size_t>(p.class_of(c))];
    if (slot == -1) slot = g.cell_class(c);
    else if (slot != g.cell_class(c)) return true;
  }
  return false;
}

/// Counts of inputs to `c` indexed by (edge class, block of the tail).
inline std::vector<int> input_profile(const NetworkGraph& g, const std::vector<int>& block_of, int n_blocks, int c) {
  std::vector<int> counts(static_cast<std::size_t>(g.n_edge_classes() * n_blocks), 0);
  for (const auto& a : g.inputs(c)) ++counts[static_cast<std::size_t>(a.edge_class * n_blocks + block_of[a.tail])];
  return counts;
}

}  // namespace detail

/// Balanced iff, for every class K, edge class and class J, all cells of K
/// receive the same number of inputs of that edge class from J.
/// Throws MixedCellClasses when the partition merges cells of different
/// cell classes (callers use this to prune rather than to reject).
inline bool is_balanced(const NetworkGraph& g, const Partition& p) {
  detail::require_same_size(g, p);
  if (detail::mixes_cell_classes(g, p))
    throw Error(ErrorCode::MixedCellClasses, "partition " + p.to_string() + " merges different cell classes");
  std::vector<int> reference(static_cast<std::size_t>(p.n_classes()), -1);
  std::vector<std::vector<int>> profiles(static_cast<std::size_t>(p.n_classes()));
  for (int c = 0; c < g.n_cells(); ++c) {
    const auto k = static_cast<std::size_t>(p.class_of(c));
    auto profile = detail::input_profile(g, p.labels(), p.n_classes(), c);
    if (reference[k] == -1) {
      reference[k] = c;
      profiles[k] = std::move(profile);
    } else if (profiles[k] != profile) {
      return false;
    }
  }
  return true;
}

/// A^ξ(Δ_p) ⊆ Δ_p for every edge class ξ: the row sums of A^ξ over each
/// class J are constant on every class K. Integer weights are compared
/// exactly, other weights to 1e-12 relative.
inline bool is_invariant_under_adjacency(const NetworkGraph& g, const Partition& p) {
  detail::require_same_size(g, p);
  const auto mats = adjacency_matrices(g);
  bool integral = true;
  double scale = 0.0;
  for (const auto& a : g.arrows()) {
    integral = integral && a.weight == std::round(a.weight) && std::abs(a.weight) < 1e15;
    scale = std::max(scale, std::abs(a.weight));
  }
  const double tol = 1e-12 * (1.0 + scale * g.n_cells());
  const auto blocks = p.blocks();
  for (const auto& m : mats) {
    for (const auto& source : blocks) {
      // Row sums of A restricted to the columns of `source`.
      Eigen::VectorXd sums = Eigen::VectorXd::Zero(g.n_cells());
      for (int j : source) sums += m.entries.col(j);
      for (const auto& target : blocks) {
        const double first = sums(target.front());
        for (int i : target) {
          if (integral ? static_cast<std::int64_t>(sums(i)) != static_cast<std::int64_t>(first)
                       : std::abs(sums(i) - first) > tol)
            return false;
        }
      }
    }
  }
  return true;
}

/// Coarsest balanced partition that refines `p` (the smallest synchrony
/// subspace containing Δ_p), by iterated splitting on input profiles.
inline Partition coarsest_balanced_refinement(const NetworkGraph& g, const Partition& p) {
  detail::require_same_size(g, p);
  const int n = g.n_cells();
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) labels[static_cast<std::size_t>(c)] = p.class_of(c) * g.n_cell_classes() + g.cell_class(c);
  Partition current(labels);
  while (true) {
    std::vector<std::pair<std::pair<int, std::vector<int>>, int>> keyed;
    for (int c = 0; c < n; ++c)
      keyed.push_back({{current.class_of(c), detail::input_profile(g, current.labels(), current.n_classes(), c)}, c});
    std::vector<std::pair<int, std::vector<int>>> keys;
    for (auto& k : keyed) keys.push_back(k.first);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::vector<int> next(static_cast<std::size_t>(n));
    for (auto& [key, c] : keyed)
      next[static_cast<std::size_t>(c)] =
          static_cast<int>(std::lower_bound(keys.begin(), keys.end(), key) - keys.begin());
    Partition refined(next);
    if (refined.n_classes() == current.n_classes()) return current;
    current = std::move(refined);
  }
}

struct SynchronyPattern {
  Partition partition;
  bool trivial = false;  // the singleton partition
};

struct SynchronyLattice {
  std::vector<SynchronyPattern> patterns;
  /// (i, j): Δ of pattern i is properly contained in Δ of pattern j, and no
  /// pattern lies strictly between them.
  std::vector<std::pair<int, int>> refinement_edges;
};

struct EnumerateOptions {
  int max_cells = 13;
  bool include_trivial = true;
  int threads = 1;
};

namespace detail {

/// Restricted-growth search over partitions with prefix pruning: a cell is
/// "complete" once all of its input tails are placed, and complete cells in
/// one class must have identical input profiles.
class BalancedSearch {
 public:
  explicit BalancedSearch(const NetworkGraph& g) : g_(g), n_(g.n_cells()) {
    ready_at_.resize(static_cast<std::size_t>(n_));
    for (int c = 0; c < n_; ++c) {
      int ready = c;
      for (const auto& a : g.inputs(c)) ready = std::max(ready, a.tail);
      ready_at_[static_cast<std::size_t>(ready)].push_back(c);
    }
    labels_.assign(static_cast<std::size_t>(n_), -1);
    reference_.assign(static_cast<std::size_t>(n_), -1);
    reference_step_.assign(static_cast<std::size_t>(n_), -1);
    block_cell_class_.assign(static_cast<std::size_t>(n_), -1);
  }

  /// All feasible label prefixes of the given length.
  std::vector<std::vector<int>> prefixes(int length) {
    std::vector<std::vector<int>> out;
    length = std::min(length, n_);
    collect_prefixes(0, 0, length, out);
    return out;
  }

  /// Completes a feasible prefix, appending every balanced partition.
  void complete(const std::vector<int>& prefix, std::vector<Partition>& out) {
    reset();
    int blocks = 0;
    for (int i = 0; i < static_cast<int>(prefix.size()); ++i) {
      const bool fresh = prefix[static_cast<std::size_t>(i)] == blocks;
      place(i, prefix[static_cast<std::size_t>(i)], fresh);
      if (fresh) ++blocks;
      if (!check(i)) return;  // prefixes() only yields feasible ones
    }
    search(static_cast<int>(prefix.size()), blocks, out);
  }

 private:
  void reset() {
    std::fill(labels_.begin(), labels_.end(), -1);
    std::fill(reference_.begin(), reference_.end(), -1);
    std::fill(reference_step_.begin(), reference_step_.end(), -1);
    std::fill(block_cell_class_.begin(), block_cell_class_.end(), -1);
  }

  void place(int cell, int block, bool fresh) {
    labels_[static_cast<std::size_t>(cell)] = block;
    if (fresh) block_cell_class_[static_cast<std::size_t>(block)] = g_.cell_class(cell);
  }

  void unplace(int cell, bool fresh) {
    const int block = labels_[static_cast<std::size_t>(cell)];
    if (fresh) block_cell_class_[static_cast<std::size_t>(block)] = -1;
    labels_[static_cast<std::size_t>(cell)] = -1;
    for (int b = 0; b < n_; ++b)
      if (reference_step_[static_cast<std::size_t>(b)] == cell) {
        reference_[static_cast<std::size_t>(b)] = -1;
        reference_step_[static_cast<std::size_t>(b)] = -1;
      }
  }

  bool same_profile(int c, int d) const {
    std::vector<int> pc(static_cast<std::size_t>(g_.n_edge_classes() * n_), 0);
    for (const auto& a : g_.inputs(c)) ++pc[static_cast<std::size_t>(a.edge_class * n_ + labels_[a.tail])];
    for (const auto& a : g_.inputs(d)) --pc[static_cast<std::size_t>(a.edge_class * n_ + labels_[a.tail])];
    return std::all_of(pc.begin(), pc.end(), [](int v) { return v == 0; });
  }

  // Checks the cells that became complete at step `step`.
  bool check(int step) {
    for (int c : ready_at_[static_cast<std::size_t>(step)]) {
      const auto block = static_cast<std::size_t>(labels_[static_cast<std::size_t>(c)]);
      if (reference_[block] == -1) {
        reference_[block] = c;
        reference_step_[block] = step;
      } else if (!same_profile(reference_[block], c)) {
        return false;
      }
    }
    return true;
  }

  bool can_join(int cell, int block) const {
    return block_cell_class_[static_cast<std::size_t>(block)] == g_.cell_class(cell);
  }

  void search(int cell, int blocks, std::vector<Partition>& out) {
    if (cell == n_) {
      out.emplace_back(labels_);
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      const bool fresh = b == blocks;
      if (!fresh && !can_join(cell, b)) continue;
      place(cell, b, fresh);
      if (check(cell)) search(cell + 1, fresh ? blocks + 1 : blocks, out);
      unplace(cell, fresh);
    }
  }

  void collect_prefixes(int cell, int blocks, int length, std::vector<std::vector<int>>& out) {
    if (cell == length) {
      out.emplace_back(labels_.begin(), labels_.begin() + length);
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      const bool fresh = b == blocks;
      if (!fresh && !can_join(cell, b)) continue;
      place(cell, b, fresh);
      if (check(cell)) collect_prefixes(cell + 1, fresh ? blocks + 1 : blocks, length, out);
      unplace(cell, fresh);
    }
  }

  const NetworkGraph& g_;
  int n_;
  std::vector<std::vector<int>> ready_at_;
  std::vector<int> labels_;
  std::vector<int> reference_;
  std::vector<int> reference_step_;
  std::vector<int> block_cell_class_;
};

}  // namespace detail

/// Every balanced partition of `g`, sorted by class count then
/// lexicographically.
inline std::vector<Partition> enumerate_balanced(const NetworkGraph& g, const EnumerateOptions& options = {}) {
  if (g.n_cells() > options.max_cells)
    throw Error(ErrorCode::TooManyCells, std::to_string(g.n_cells()) + " cells exceeds the enumeration guard of " +
                                             std::to_string(options.max_cells));
  std::vector<Partition> found;
  const int threads = std::max(1, options.threads);
  if (threads == 1) {
    detail::BalancedSearch(g).complete({}, found);
  } else {
    auto prefixes = detail::BalancedSearch(g).prefixes(std::min(g.n_cells(), 5));
    std::vector<std::vector<Partition>> partial(static_cast<std::size_t>(threads));
    std::vector<std::thread> workers;
    for (int t = 0; t < threads; ++t) {
      workers.emplace_back([&, t] {
        detail::BalancedSearch search(g);
        for (std::size_t i = static_cast<std::size_t>(t); i < prefixes.size(); i += static_cast<std::size_t>(threads))
          search.complete(prefixes[i], partial[static_cast<std::size_t>(t)]);
      });
    }
    for (auto& w : workers) w.join();
    for (auto& part : partial) found.insert(found.end(), part.begin(), part.end());
  }
  std::sort(found.begin(), found.end(), canonical_less);
  return found;
}

/// Hasse diagram of containment among the given patterns: (i, j) when
/// Δ_i ⊂ Δ_j (pattern i strictly coarser) with nothing in between.
inline std::vector<std::pair<int, int>> refinement_edges(const std::vector<Partition>& patterns) {
  const auto m = static_cast<int>(patterns.size());
  auto contained = [&](int i, int j) {
    return i != j && patterns[static_cast<std::size_t>(j)].refines(patterns[static_cast<std::size_t>(i)]) &&
           patterns[static_cast<std::size_t>(i)] != patterns[static_cast<std::size_t>(j)];
  };
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (!contained(i, j)) continue;
      bool cover = true;
      for (int k = 0; k < m && cover; ++k)
        if (contained(i, k) && contained(k, j)) cover = false;
      if (cover) edges.emplace_back(i, j);
    }
  return edges;
}

inline SynchronyLattice enumerate_synchrony(const NetworkGraph& g, const EnumerateOptions& options = {}) {
  SynchronyLattice lattice;
  std::vector<Partition> kept;
  for (auto& p : enumerate_balanced(g, options)) {
    const bool trivial = p.is_singletons() && g.n_cells() > 1;
    if (trivial && !options.include_trivial) continue;
    kept.push_back(p);
    lattice.patterns.push_back({std::move(p), trivial});
  }
  lattice.refinement_edges = refinement_edges(kept);
  return lattice;
}

}  // namespace synclab
