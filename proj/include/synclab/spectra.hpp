#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "synclab/error.hpp"

namespace synclab {

/// Symmetric matrix whose rows sum to zero (l_ii = -Σ_{j≠i} l_ij). The
/// induced edge weight is w_ij = l_ij for i ≠ j.
class LaplacianMatrix {
 public:
  const Eigen::MatrixXd& entries() const { return m_; }
  int size() const { return static_cast<int>(m_.rows()); }
  double tolerance() const { return tol_; }
  /// Max absolute row sum.
  double inf_norm() const { return m_.cwiseAbs().rowwise().sum().maxCoeff(); }

 private:
  friend LaplacianMatrix validate_laplacian(const Eigen::MatrixXd& m, double tol);
  Eigen::MatrixXd m_;
  double tol_ = 0.0;
};

inline LaplacianMatrix validate_laplacian(const Eigen::MatrixXd& m, double tol = 1e-9) {
  if (m.rows() != m.cols() || m.rows() == 0) throw Error(ErrorCode::InvalidArgument, "matrix must be square");
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol) throw Error(ErrorCode::NotSymmetric, "max |m_ij - m_ji| = " + std::to_string(asym));
  const double row = m.rowwise().sum().cwiseAbs().maxCoeff();
  if (row > tol) throw Error(ErrorCode::RowSumNonzero, "max |row sum| = " + std::to_string(row));
  LaplacianMatrix out;
  out.m_ = m;
  out.tol_ = tol;
  return out;
}

struct ComponentCounts {
  int c_g = 0;
  int c_gplus = 0;
  int c_gminus = 0;

  friend bool operator==(const ComponentCounts&, const ComponentCounts&) = default;
};

struct Interval {
  int lo = 0;
  int hi = 0;

  bool contains(int v) const { return lo <= v && v <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Eigenvalue-count estimates from component counts.
struct TheoremBounds {
  Interval n_plus;
  Interval n_minus;
  Interval n_zero;

  friend bool operator==(const TheoremBounds&, const TheoremBounds&) = default;
};

inline TheoremBounds theorem_bounds(const ComponentCounts& k, int n) {
  auto clamp0 = [](int v) { return std::max(0, v); };
  return TheoremBounds{
      {clamp0(k.c_gplus - k.c_g), n - k.c_gminus},
      {clamp0(k.c_gminus - k.c_g), n - k.c_gplus},
      {k.c_g, n + 2 * k.c_g - k.c_gplus - k.c_gminus},
  };
}

inline double default_edge_tol(const LaplacianMatrix& l) { return 1e-12 * (1.0 + l.inf_norm()); }
inline double default_zero_tol(const LaplacianMatrix& l) { return 1e-9 * (1.0 + l.inf_norm()) * l.size(); }

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)), components_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      auto& p = parent_[static_cast<std::size_t>(x)];
      p = parent_[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    parent_[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    --components_;
  }
  int components() const { return components_; }

 private:
  std::vector<int> parent_;
  int components_;
};

}  // namespace detail

/// Components of G (|l_ij| > edge_tol), G+ (l_ij > edge_tol) and
/// G- (l_ij < -edge_tol). Entries within edge_tol of zero are absent edges.
inline ComponentCounts component_counts(const LaplacianMatrix& l, double edge_tol) {
  const int n = l.size();
  detail::UnionFind all(n), plus(n), minus(n);
  const auto& m = l.entries();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double w = m(i, j);
      if (w > edge_tol) {
        all.unite(i, j);
        plus.unite(i, j);
      } else if (w < -edge_tol) {
        all.unite(i, j);
        minus.unite(i, j);
      }
    }
  return {all.components(), plus.components(), minus.components()};
}

inline ComponentCounts component_counts(const LaplacianMatrix& l) { return component_counts(l, default_edge_tol(l)); }

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
/// Throws NoConvergence if the off-diagonal mass does not vanish within
/// `max_sweeps` sweeps.
inline std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a, int max_sweeps = 100) {
  const int n = static_cast<int>(a.rows());
  auto off_norm = [&] {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };
  const double scale = std::max(a.norm(), 1e-300);
  int sweep = 0;
  while (off_norm() > 1e-14 * scale) {
    if (++sweep > max_sweeps) throw Error(ErrorCode::NoConvergence, "Jacobi iteration cap reached");
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> eig(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

struct Signature {
  int n_plus = 0;
  int n_zero = 0;
  int n_minus = 0;

  friend bool operator==(const Signature&, const Signature&) = default;
};

struct SignedSpectrumReport {
  Signature signature;
  ComponentCounts counts;
  TheoremBounds bounds;
  std::vector<double> eigenvalues;
  bool within_bounds = false;
  double zero_tol = 0.0;
  double edge_tol = 0.0;
  /// The eigenvalue whose magnitude is closest to zero_tol, i.e. the one most
  /// at risk of being misclassified.
  double nearest_threshold = 0.0;
};

struct SpectrumOptions {
  double zero_tol = -1.0;  // negative: scale-aware default
  double edge_tol = -1.0;
};

inline SignedSpectrumReport eigen_signature(const LaplacianMatrix& l, const SpectrumOptions& options = {}) {
  SignedSpectrumReport r;
  r.zero_tol = options.zero_tol >= 0 ? options.zero_tol : default_zero_tol(l);
  r.edge_tol = options.edge_tol >= 0 ? options.edge_tol : default_edge_tol(l);
  r.eigenvalues = jacobi_eigenvalues(l.entries());
  double best = -1.0;
  for (double lambda : r.eigenvalues) {
    if (std::abs(lambda) <= r.zero_tol) ++r.signature.n_zero;
    else if (lambda > 0) ++r.signature.n_plus;
    else ++r.signature.n_minus;
    const double gap = std::abs(std::abs(lambda) - r.zero_tol);
    if (best < 0 || gap < best) {
      best = gap;
      r.nearest_threshold = lambda;
    }
  }
  r.counts = component_counts(l, r.edge_tol);
  r.bounds = theorem_bounds(r.counts, l.size());
  r.within_bounds = r.bounds.n_plus.contains(r.signature.n_plus) && r.bounds.n_minus.contains(r.signature.n_minus) &&
                    r.bounds.n_zero.contains(r.signature.n_zero);
  return r;
}

}  // namespace synclab
