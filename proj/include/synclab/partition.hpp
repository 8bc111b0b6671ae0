#pragma once

#include <algorithm>
#include <compare>
#include <sstream>
#include <string>
#include <vector>

#include "synclab/error.hpp"

namespace synclab {

/// Partition of the cells {0..n-1} stored as a restricted-growth string:
/// class indices appear in first-occurrence order, so equal partitions have
/// equal representations. Identified with its polydiagonal
/// {x : x_c = x_d whenever c and d share a class}.
class Partition {
 public:
  Partition() = default;

  /// Any labelling; it is canonicalised.
  explicit Partition(const std::vector<int>& labels) : class_of_(labels.size()) {
    std::vector<std::pair<int, int>> remap;
    int next = 0;
    for (std::size_t c = 0; c < labels.size(); ++c) {
      auto it = std::find_if(remap.begin(), remap.end(), [&](auto& p) { return p.first == labels[c]; });
      if (it == remap.end()) {
        remap.emplace_back(labels[c], next);
        class_of_[c] = next++;
      } else {
        class_of_[c] = it->second;
      }
    }
    n_classes_ = next;
  }

  static Partition singletons(int n) {
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) labels[static_cast<std::size_t>(c)] = c;
    return Partition(labels);
  }

  static Partition total(int n) { return Partition(std::vector<int>(static_cast<std::size_t>(n), 0)); }

  /// Blocks given as lists of 0-based cells; every cell must appear exactly once.
  static Partition from_blocks(int n, const std::vector<std::vector<int>>& blocks) {
    std::vector<int> labels(static_cast<std::size_t>(n), -1);
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (int c : blocks[b]) {
        if (c < 0 || c >= n) throw Error(ErrorCode::InvalidArgument, "cell out of range in partition");
        if (labels[static_cast<std::size_t>(c)] != -1)
          throw Error(ErrorCode::InvalidArgument, "cell listed twice in partition");
        labels[static_cast<std::size_t>(c)] = static_cast<int>(b);
      }
    for (int c = 0; c < n; ++c)
      if (labels[static_cast<std::size_t>(c)] == -1)
        labels[static_cast<std::size_t>(c)] = static_cast<int>(blocks.size()) + c;  // unlisted cells stay alone
    return Partition(labels);
  }

  /// Parses "1,4|2,5|3,6" (1-based); unlisted cells become singletons.
  static Partition parse(int n, const std::string& text) {
    std::vector<std::vector<int>> blocks;
    std::stringstream outer(text);
    std::string block;
    while (std::getline(outer, block, '|')) {
      std::vector<int> cells;
      std::stringstream inner(block);
      std::string tok;
      while (std::getline(inner, tok, ',')) {
        try {
          std::size_t used = 0;
          const int c = std::stoi(tok, &used);
          if (tok.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(tok);
          cells.push_back(c - 1);
        } catch (const std::exception&) {
          throw Error(ErrorCode::InvalidArgument, "bad cell '" + tok + "' in pattern");
        }
      }
      if (!cells.empty()) blocks.push_back(std::move(cells));
    }
    return from_blocks(n, blocks);
  }

  int n_cells() const { return static_cast<int>(class_of_.size()); }
  int n_classes() const { return n_classes_; }
  int class_of(int c) const { return class_of_[static_cast<std::size_t>(c)]; }
  const std::vector<int>& labels() const { return class_of_; }

  bool is_singletons() const { return n_classes_ == n_cells(); }
  bool is_total() const { return n_classes_ == 1; }

  std::vector<std::vector<int>> blocks() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(n_classes_));
    for (int c = 0; c < n_cells(); ++c) out[static_cast<std::size_t>(class_of(c))].push_back(c);
    return out;
  }

  /// True when every class of *this lies inside a class of `coarser`, i.e.
  /// Δ_coarser ⊆ Δ_this.
  bool refines(const Partition& coarser) const {
    std::vector<int> image(static_cast<std::size_t>(n_classes_), -1);
    for (int c = 0; c < n_cells(); ++c) {
      int& slot = image[static_cast<std::size_t>(class_of(c))];
      if (slot == -1) slot = coarser.class_of(c);
      else if (slot != coarser.class_of(c)) return false;
    }
    return true;
  }

  /// Image under a cell permutation given as image[c].
  Partition permuted(const std::vector<int>& image) const {
    std::vector<int> labels(class_of_.size());
    for (std::size_t c = 0; c < class_of_.size(); ++c) labels[static_cast<std::size_t>(image[c])] = class_of_[c];
    return Partition(labels);
  }

  /// "1,4|2,5|3,6"
  std::string to_string() const {
    std::string out;
    for (const auto& block : blocks()) {
      if (!out.empty()) out += '|';
      for (std::size_t i = 0; i < block.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(block[i] + 1);
      }
    }
    return out;
  }

  friend bool operator==(const Partition&, const Partition&) = default;
  friend auto operator<=>(const Partition& a, const Partition& b) { return a.class_of_ <=> b.class_of_; }

 private:
  std::vector<int> class_of_;
  int n_classes_ = 0;
};

/// Output ordering: ascending class count, then lexicographic restricted-growth string.
inline bool canonical_less(const Partition& a, const Partition& b) {
  if (a.n_classes() != b.n_classes()) return a.n_classes() < b.n_classes();
  return a.labels() < b.labels();
}

}  // namespace synclab
