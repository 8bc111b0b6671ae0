#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "synclab/error.hpp"
#include "synclab/fields.hpp"
#include "synclab/partition.hpp"
#include "synclab/spectra.hpp"
#include "synclab/synchrony.hpp"

namespace synclab {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Maps t into [0, 2π), snapping values within `snap` of 2π to 0.
inline double wrap_angle(double t, double snap = 1e-9) {
  double r = std::fmod(t, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (kTwoPi - r <= snap) r = 0.0;
  return r;
}

inline double angle_distance(double a, double b) {
  const double d = std::abs(wrap_angle(a - b, 0.0));
  return std::min(d, kTwoPi - d);
}

inline double spread(const Vector& x) { return x.maxCoeff() - x.minCoeff(); }

// ---------------------------------------------------------------------------
// Integration

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<double> potentials;
};

struct IntegrateOptions {
  int record_every = 1;
  /// Allowed potential increase per step, relative to 1 + |gbar|.
  double energy_slack = 1e-8;
};

/// Classical RK4. The potential must not increase along the flow; a step
/// that raises it by more than the slack throws StepTooLarge.
inline Trajectory integrate(const AdditiveLaplacianSystem& sys, const Vector& x0, double t_end, double dt,
                            const IntegrateOptions& options = {}) {
  if (!(dt > 0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  if (t_end < 0) throw Error(ErrorCode::InvalidArgument, "t_end must be nonnegative");
  if (x0.size() != sys.n()) throw Error(ErrorCode::InvalidArgument, "x0 has the wrong dimension");
  const int every = std::max(1, options.record_every);
  Trajectory tr;
  Vector x = x0;
  double t = 0.0;
  double g = sys.potential(x);
  tr.times.push_back(t);
  tr.states.push_back(x);
  tr.potentials.push_back(g);
  const auto steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
  for (long s = 1; s <= steps; ++s) {
    const double h = std::min(dt, t_end - t);
    const Vector k1 = sys.evaluate(x);
    const Vector k2 = sys.evaluate(x + 0.5 * h * k1);
    const Vector k3 = sys.evaluate(x + 0.5 * h * k2);
    const Vector k4 = sys.evaluate(x + h * k3);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = s == steps ? t_end : t + h;
    const double g_new = sys.potential(x);
    if (g_new - g > options.energy_slack * (1.0 + std::abs(g)))
      throw Error(ErrorCode::StepTooLarge, "potential rose by " + std::to_string(g_new - g) + " at t = " +
                                               std::to_string(t) + "; reduce dt");
    g = g_new;
    if (s % every == 0 || s == steps) {
      tr.times.push_back(t);
      tr.states.push_back(x);
      tr.potentials.push_back(g);
    }
  }
  return tr;
}

// ---------------------------------------------------------------------------
// Dissipation inside the tube of width ε around the diagonal

struct LyapunovTubeReport {
  double epsilon = 0.0;
  int trials = 0;
  int dissipation_failures = 0;  // f(x)·(x - mean) >= 0 off the diagonal
  int zero_set_failures = 0;     // f vanishing off Δ, or not vanishing on Δ
  bool passed = true;
};

inline LyapunovTubeReport lyapunov_tube_check(const AdditiveLaplacianSystem& sys, double epsilon, int n_trials,
                                              std::uint64_t seed = 0, double zero_tol = 1e-12) {
  if (!check_condition_30(sys, epsilon))
    throw Error(ErrorCode::Condition30Violated, "couplings are not dissipative on (-eps, eps)");
  LyapunovTubeReport r;
  r.epsilon = epsilon;
  r.trials = n_trials;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> offset(-100.0, 100.0);
  std::uniform_real_distribution<double> u(0.0, epsilon);
  const int n = sys.n();
  for (int trial = 0; trial < n_trials; ++trial) {
    const double base = offset(rng);
    // every tenth trial lies on Δ
    const bool on_diagonal = trial % 10 == 9;
    Vector x(n);
    for (int c = 0; c < n; ++c) x(c) = base + (on_diagonal ? 0.0 : u(rng));
    const Vector f = sys.evaluate(x);
    const Vector y = x.array() - x.mean();
    const double dot = f.dot(y);
    const bool vanishes = f.cwiseAbs().maxCoeff() <= zero_tol * (1.0 + std::abs(base));
    if (on_diagonal) {
      if (!vanishes || std::abs(dot) > zero_tol) ++r.zero_set_failures;
    } else {
      if (!(dot < 0.0)) ++r.dissipation_failures;
      if (vanishes) ++r.zero_set_failures;
    }
  }
  r.passed = r.dissipation_failures == 0 && r.zero_set_failures == 0;
  return r;
}

// ---------------------------------------------------------------------------
// Charts on synchrony subspaces

/// Parametrizes Δ_⋈ by one value per class. Class 0 always contains cell 1
/// and is pinned to 0, so the free coordinates are classes 1..K-1.
class SynchronyChart {
 public:
  explicit SynchronyChart(Partition pattern) : pattern_(std::move(pattern)) {
    for (int c = 0; c < pattern_.n_cells(); ++c)
      if (static_cast<int>(representatives_.size()) == pattern_.class_of(c)) representatives_.push_back(c);
  }

  const Partition& pattern() const { return pattern_; }
  int n_classes() const { return pattern_.n_classes(); }
  int dimension() const { return pattern_.n_classes() - 1; }
  const std::vector<int>& representatives() const { return representatives_; }

  /// Full state from the free coordinates (gauge value 0 prepended).
  Vector embed(const Vector& free) const {
    Vector x(pattern_.n_cells());
    for (int c = 0; c < pattern_.n_cells(); ++c) {
      const int k = pattern_.class_of(c);
      x(c) = k == 0 ? 0.0 : free(k - 1);
    }
    return x;
  }

  /// Free coordinates of a gauge-normalized state in Δ_⋈.
  Vector restrict(const Vector& x) const {
    Vector free(dimension());
    for (int k = 1; k < n_classes(); ++k) free(k - 1) = x(representatives_[static_cast<std::size_t>(k)]);
    return free;
  }

  /// d(embed)/d(free): n × (K-1) indicator matrix.
  Matrix embedding_matrix() const {
    Matrix e = Matrix::Zero(pattern_.n_cells(), dimension());
    for (int c = 0; c < pattern_.n_cells(); ++c) {
      const int k = pattern_.class_of(c);
      if (k > 0) e(c, k - 1) = 1.0;
    }
    return e;
  }

 private:
  Partition pattern_;
  std::vector<int> representatives_;
};

// ---------------------------------------------------------------------------
// Stability classification

enum class Verdict { StableModuloDiagonal, Unstable, Degenerate };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::StableModuloDiagonal: return "stable_modulo_diagonal";
    case Verdict::Unstable: return "unstable";
    case Verdict::Degenerate: return "degenerate";
  }
  return "?";
}

struct EquilibriumRecord {
  Vector point;
  Partition pattern;
  SignedSpectrumReport spectrum;
  Verdict verdict = Verdict::Degenerate;
  bool family_hint = false;
  double residual = 0.0;
};

/// Equality partition of x (mod 2π on the torus) at tolerance `tol`.
inline Partition equality_partition(const Vector& x, bool torus, double tol = 1e-6) {
  const auto n = static_cast<int>(x.size());
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  int next = 0;
  for (int c = 0; c < n; ++c) {
    if (labels[static_cast<std::size_t>(c)] >= 0) continue;
    labels[static_cast<std::size_t>(c)] = next;
    for (int d = c + 1; d < n; ++d) {
      if (labels[static_cast<std::size_t>(d)] >= 0) continue;
      const double dist = torus ? angle_distance(x(c), x(d)) : std::abs(x(c) - x(d));
      if (dist <= tol) labels[static_cast<std::size_t>(d)] = next;
    }
    ++next;
  }
  return Partition(labels);
}

/// The smallest synchrony subspace containing x.
inline Partition finest_pattern(const AdditiveLaplacianSystem& sys, const Vector& x, double tol = 1e-6) {
  return coarsest_balanced_refinement(sys.graph(), equality_partition(x, sys.torus_reducible(), tol));
}

inline Verdict verdict_for(const Signature& s) {
  if (s.n_plus >= 1) return Verdict::Unstable;
  return s.n_zero == 1 ? Verdict::StableModuloDiagonal : Verdict::Degenerate;
}

inline EquilibriumRecord classify_stability(const AdditiveLaplacianSystem& sys, const Vector& point,
                                            double tol = 1e-9) {
  const Vector f = sys.evaluate(point);
  const double residual = f.cwiseAbs().maxCoeff();
  if (residual > tol)
    throw Error(ErrorCode::NotEquilibrium, "|f(x)|_inf = " + std::to_string(residual) + " exceeds " + std::to_string(tol));
  const Matrix j = sys.jacobian(point);
  const auto lap = validate_laplacian(j, 1e-10 * (1.0 + j.cwiseAbs().maxCoeff()));
  EquilibriumRecord r;
  r.point = point;
  r.pattern = finest_pattern(sys, point);
  r.spectrum = eigen_signature(lap);
  r.verdict = verdict_for(r.spectrum.signature);
  r.family_hint = r.spectrum.signature.n_zero >= 2;
  r.residual = residual;
  return r;
}

// ---------------------------------------------------------------------------
// Multistart damped Newton inside a chart

struct EquilibriumOptions {
  int grid = 8;
  double box = kTwoPi;  // half-width of the search box for non-periodic systems
  double tolerance = 1e-12;
  double dedup_tol = 1e-6;
  double snap_tol = 1e-3;
  int max_iterations = 100;
  int max_halvings = 30;
  int threads = 1;
};

namespace detail {

/// Gauss-Newton with min-norm steps on the chart. Each arrow in `locus`
/// adds the equation w φ'(x_tail - x_head) = 0.
inline bool damped_newton(const AdditiveLaplacianSystem& sys, const SynchronyChart& chart, Vector& y,
                          const EquilibriumOptions& o, const std::vector<Arrow>& locus = {}) {
  const Matrix e = chart.embedding_matrix();
  const auto& reps = chart.representatives();
  const auto n_rows = static_cast<Eigen::Index>(reps.size() + locus.size());
  auto residual = [&](const Vector& free) {
    const Vector x = chart.embed(free);
    const Vector f = sys.evaluate(x);
    Vector r(n_rows);
    Eigen::Index row = 0;
    for (int c : reps) r(row++) = f(c);
    for (const auto& a : locus) r(row++) = a.weight * sys.coupling(a.edge_class).derivative(x(a.tail) - x(a.head));
    return r;
  };
  Vector r = residual(y);
  double norm = r.cwiseAbs().maxCoeff();
  for (int it = 0; it < o.max_iterations; ++it) {
    if (norm <= o.tolerance) return true;
    const Vector x = chart.embed(y);
    const Matrix j = sys.jacobian(x);
    Matrix jr(n_rows, chart.dimension());
    Eigen::Index row = 0;
    for (int c : reps) jr.row(row++) = j.row(c) * e;
    for (const auto& a : locus) {
      const double d2 = a.weight * sys.coupling(a.edge_class).second_derivative(x(a.tail) - x(a.head));
      jr.row(row++) = d2 * (e.row(a.tail) - e.row(a.head));
    }
    const Vector step = jr.completeOrthogonalDecomposition().solve(-r);
    if (!step.allFinite()) return false;
    double lambda = 1.0;
    bool accepted = false;
    for (int h = 0; h <= o.max_halvings; ++h, lambda *= 0.5) {
      const Vector trial = y + lambda * step;
      const Vector rt = residual(trial);
      const double nt = rt.cwiseAbs().maxCoeff();
      if (nt < norm) {
        y = trial;
        r = rt;
        norm = nt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return norm <= o.tolerance;
}

/// Degenerate roots are only located to about the square or cube root of
/// machine precision, which is too coarse to tell a tiny coupling weight
/// from an absent edge. A converged point is moved onto the nearby smallest
/// synchrony subspace and onto the locus where nearly vanishing weights are
/// exactly zero, when the equations can be solved there.
inline Vector sharpen_root(const AdditiveLaplacianSystem& sys, const SynchronyChart& chart, Vector x,
                           const EquilibriumOptions& o) {
  const bool torus = sys.torus_reducible();
  SynchronyChart current = chart;
  const Partition near = coarsest_balanced_refinement(sys.graph(), equality_partition(x, torus, o.snap_tol));
  if (near.n_classes() < chart.n_classes()) {
    SynchronyChart inner(near);
    Vector z = inner.restrict(x);
    if (damped_newton(sys, inner, z, o)) {
      x = inner.embed(z);
      current = std::move(inner);
    }
  }
  const Matrix j = sys.jacobian(x);
  const double scale = 1.0 + j.cwiseAbs().maxCoeff();
  std::vector<Arrow> locus;
  for (const auto& a : sys.graph().arrows())
    if (a.tail < a.head && std::abs(j(a.head, a.tail)) <= o.snap_tol * scale && j(a.head, a.tail) != 0.0)
      locus.push_back(a);
  if (!locus.empty()) {
    Vector z = current.restrict(x);
    if (damped_newton(sys, current, z, o, locus)) x = current.embed(z);
  }
  return x;
}

inline bool close_points(const Vector& a, const Vector& b, bool torus, double tol) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double d = torus ? angle_distance(a(i), b(i)) : std::abs(a(i) - b(i));
    if (d > tol) return false;
  }
  return true;
}

}  // namespace detail

/// Gauge-normalized full state: x_1 = 0 and, on the torus, every coordinate
/// in [0, 2π).
inline Vector normalize_point(const Vector& x, bool torus) {
  Vector y = x.array() - x(0);
  if (torus)
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = wrap_angle(y(i));
  return y;
}

/// Equilibria of `sys` inside the synchrony subspace of `pattern`.
inline std::vector<EquilibriumRecord> find_equilibria(const AdditiveLaplacianSystem& sys, const Partition& pattern,
                                                      const EquilibriumOptions& options = {}) {
  if (pattern.n_cells() != sys.n()) throw Error(ErrorCode::InvalidArgument, "pattern size does not match system");
  if (!is_balanced(sys.graph(), pattern))
    throw Error(ErrorCode::NotBalanced, "pattern " + pattern.to_string() + " is not balanced");
  if (options.grid < 1) throw Error(ErrorCode::InvalidArgument, "grid must be at least 1");
  const SynchronyChart chart(pattern);
  const bool torus = sys.torus_reducible();
  const int dim = chart.dimension();
  const int m = options.grid;

  std::vector<double> axis(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    if (torus) axis[static_cast<std::size_t>(i)] = kTwoPi * i / m;
    else axis[static_cast<std::size_t>(i)] = m == 1 ? 0.0 : -options.box + 2.0 * options.box * i / (m - 1);
  }
  long total = 1;
  for (int d = 0; d < dim; ++d) total *= m;

  auto start_point = [&](long index) {
    Vector y(dim);
    for (int d = 0; d < dim; ++d) {
      y(d) = axis[static_cast<std::size_t>(index % m)];
      index /= m;
    }
    return y;
  };

  const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(std::min<long>(total, 64))));
  std::vector<std::vector<Vector>> found(static_cast<std::size_t>(threads));
  auto worker = [&](int t) {
    for (long s = t; s < total; s += threads) {
      Vector y = start_point(s);
      if (!detail::damped_newton(sys, chart, y, options)) continue;
      Vector x = detail::sharpen_root(sys, chart, chart.embed(y), options);
      x = normalize_point(x, torus);
      if (!torus && x.cwiseAbs().maxCoeff() > options.box + options.dedup_tol) continue;
      found[static_cast<std::size_t>(t)].push_back(std::move(x));
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }

  std::vector<Vector> all;
  for (auto& v : found)
    for (auto& x : v) all.push_back(std::move(x));
  std::sort(all.begin(), all.end(), [](const Vector& a, const Vector& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  std::vector<Vector> unique;
  for (const auto& x : all) {
    bool dup = false;
    for (const auto& u : unique)
      if (detail::close_points(x, u, torus, options.dedup_tol)) {
        dup = true;
        break;
      }
    if (!dup) unique.push_back(x);
  }

  std::vector<EquilibriumRecord> out;
  out.reserve(unique.size());
  for (const auto& x : unique) out.push_back(classify_stability(sys, x, 1e-10));
  return out;
}

// ---------------------------------------------------------------------------
// Jacobian structure on the diagonal of a regular network

struct GenericJacobianSample {
  double nu = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double residual = 0.0;
  bool degenerate = false;
};

struct GenericJacobianReport {
  std::vector<GenericJacobianSample> samples;
  bool passed = true;  // every residual within tolerance
  bool degenerate = false;  // some sample has |beta| below threshold
};

/// Fits J(ν·1) = αI + βA by least squares at random ν.
inline GenericJacobianReport generic_jacobian_check(const AdditiveLaplacianSystem& sys, int n_points = 16,
                                                    std::uint64_t seed = 0) {
  if (classify(sys.graph()) != GraphKind::regular)
    throw Error(ErrorCode::GraphNotRegular, "the graph has more than one edge class or unequal inputs");
  const int n = sys.n();
  const Matrix a = total_adjacency(sys.graph());
  Matrix design(n * n, 2);
  design.col(0) = Matrix::Identity(n, n).reshaped();
  design.col(1) = a.reshaped();
  const auto solver = design.completeOrthogonalDecomposition();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-kTwoPi, kTwoPi);
  GenericJacobianReport r;
  for (int i = 0; i < n_points; ++i) {
    GenericJacobianSample s;
    s.nu = i == 0 ? 0.0 : u(rng);
    const Matrix j = sys.jacobian(Vector::Constant(n, s.nu));
    const Vector target = j.reshaped();
    const Vector coef = solver.solve(target);
    s.alpha = coef(0);
    s.beta = coef(1);
    s.residual = (design * coef - target).cwiseAbs().maxCoeff();
    s.degenerate = std::abs(s.beta) < 1e-10;
    r.passed = r.passed && s.residual <= 1e-10;
    r.degenerate = r.degenerate || s.degenerate;
    r.samples.push_back(s);
  }
  return r;
}

}  // namespace synclab
