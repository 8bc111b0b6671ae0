#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "synclab/error.hpp"
#include "synclab/expression.hpp"
#include "synclab/graph.hpp"

namespace synclab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Laplacian maps from a difference potential

/// g is a function of t_i = x_i - x_n, i = 1..n-1.
struct DifferencePotential {
  int n = 0;
  Expression g;
  double k = 0.0;

  static DifferencePotential parse(int n, const std::string& g_text, double k = 0.0) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "a difference potential needs n >= 2");
    return {n, Expression::parse(g_text, n - 1), k};
  }
};

/// f_i = dg/dt_i for i < n and f_n = k - sum_{i<n} f_i. The potential
/// gbar(x) = -g(t) - k x_n satisfies f = -grad gbar.
class LaplacianMap {
 public:
  explicit LaplacianMap(const DifferencePotential& p) : n_(p.n), k_(p.k), g_(p.g) {
    const int m = n_ - 1;
    grad_.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) grad_.push_back(g_.derivative(i));
    hess_.resize(static_cast<std::size_t>(m * m));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) hess_[static_cast<std::size_t>(i * m + j)] = grad_[static_cast<std::size_t>(i)].derivative(j);
  }

  int n() const { return n_; }
  double k() const { return k_; }
  const std::vector<Expression>& gradient_expressions() const { return grad_; }

  Vector evaluate(const Vector& x) const {
    const auto t = differences(x);
    Vector f(n_);
    double sum = 0.0;
    for (int i = 0; i < n_ - 1; ++i) {
      f(i) = grad_[static_cast<std::size_t>(i)].evaluate(t);
      sum += f(i);
    }
    f(n_ - 1) = k_ - sum;
    return f;
  }

  Matrix jacobian(const Vector& x) const {
    const auto t = differences(x);
    const int m = n_ - 1;
    Matrix j = Matrix::Zero(n_, n_);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) j(a, b) = hess_[static_cast<std::size_t>(a * m + b)].evaluate(t);
    for (int a = 0; a < m; ++a) {
      j(a, m) = -j.row(a).head(m).sum();
      j(m, a) = -j.col(a).head(m).sum();
    }
    j(m, m) = j.topLeftCorner(m, m).sum();
    return j;
  }

  double potential(const Vector& x) const { return -g_.evaluate(differences(x)) - k_ * x(n_ - 1); }

 private:
  std::vector<double> differences(const Vector& x) const {
    if (x.size() != n_) throw Error(ErrorCode::InvalidArgument, "state has wrong dimension");
    std::vector<double> t(static_cast<std::size_t>(n_ - 1));
    for (int i = 0; i < n_ - 1; ++i) t[static_cast<std::size_t>(i)] = x(i) - x(n_ - 1);
    return t;
  }

  int n_;
  double k_;
  Expression g_;
  std::vector<Expression> grad_;
  std::vector<Expression> hess_;
};

inline LaplacianMap laplacian_map_from_potential(const DifferencePotential& p) { return LaplacianMap(p); }

// ---------------------------------------------------------------------------
// Generic verification of the Laplacian property

struct VectorField {
  int n = 0;
  std::function<Vector(const Vector&)> evaluate;
  std::function<Matrix(const Vector&)> jacobian;  // may be empty
};

inline Matrix finite_difference_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& x) {
  const double h = 1e-5 * (1.0 + x.cwiseAbs().maxCoeff());
  const auto n = x.size();
  Matrix j(f(x).size(), n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Vector xp = x, xm = x;
    xp(c) += h;
    xm(c) -= h;
    j.col(c) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return j;
}

struct LaplacianSampleDefects {
  double symmetry = 0.0;
  double row_sum = 0.0;
  double fd_relative = -1.0;  // negative when no analytic Jacobian was given
};

struct LaplacianMapReport {
  std::vector<LaplacianSampleDefects> samples;
  double max_symmetry = 0.0;
  double max_row_sum = 0.0;
  double max_fd_relative = 0.0;
  double defect_tol = 1e-6;
  double fd_tol = 1e-4;
  bool passed = true;
  std::optional<ErrorCode> failure;
};

/// Checks symmetry and zero row sums of the Jacobian at every sample. The
/// finite-difference Jacobian is always checked; an analytic one, when
/// present, is checked too and compared against it.
inline LaplacianMapReport verify_laplacian_map(const VectorField& f, const std::vector<Vector>& samples,
                                               double defect_tol = 1e-6, double fd_tol = 1e-4) {
  LaplacianMapReport r;
  r.defect_tol = defect_tol;
  r.fd_tol = fd_tol;
  auto defects = [](const Matrix& j, LaplacianSampleDefects& d) {
    d.symmetry = std::max(d.symmetry, (j - j.transpose()).cwiseAbs().maxCoeff());
    d.row_sum = std::max(d.row_sum, j.rowwise().sum().cwiseAbs().maxCoeff());
  };
  for (const auto& x : samples) {
    LaplacianSampleDefects d;
    const Matrix fd = finite_difference_jacobian(f.evaluate, x);
    defects(fd, d);
    if (f.jacobian) {
      const Matrix an = f.jacobian(x);
      defects(an, d);
      d.fd_relative = (an - fd).cwiseAbs().maxCoeff() / (1.0 + an.cwiseAbs().maxCoeff());
      r.max_fd_relative = std::max(r.max_fd_relative, d.fd_relative);
    }
    r.max_symmetry = std::max(r.max_symmetry, d.symmetry);
    r.max_row_sum = std::max(r.max_row_sum, d.row_sum);
    r.samples.push_back(d);
  }
  if (r.max_symmetry > defect_tol) r.failure = ErrorCode::NotSymmetric;
  else if (r.max_row_sum > defect_tol) r.failure = ErrorCode::RowSumNonzero;
  r.passed = !r.failure && r.max_fd_relative <= fd_tol;
  return r;
}

inline VectorField as_vector_field(const LaplacianMap& m) {
  return {m.n(), [m](const Vector& x) { return m.evaluate(x); }, [m](const Vector& x) { return m.jacobian(x); }};
}

// ---------------------------------------------------------------------------
// Odd couplings

/// An odd scalar function phi together with phi' and the even antiderivative
/// psi (psi' = phi, psi(0) = 0).
class OddCoupling {
 public:
  enum class Kind { Sine, Linear, OddPolynomial, ScaledSineSum };

  static OddCoupling sine(double amplitude) { return OddCoupling(Kind::Sine, {{amplitude, 1.0}}); }
  static OddCoupling linear(double slope) { return OddCoupling(Kind::Linear, {{slope, 1.0}}); }

  /// coefficients[p] multiplies t^p; every even-power coefficient must be 0.
  static OddCoupling odd_polynomial(const std::vector<double>& coefficients) {
    std::vector<std::pair<double, double>> terms;
    for (std::size_t p = 0; p < coefficients.size(); ++p) {
      if (coefficients[p] == 0.0) continue;
      if (p % 2 == 0)
        throw Error(ErrorCode::NonOddCoupling,
                    "odd_polynomial has a nonzero coefficient on t^" + std::to_string(p));
      terms.emplace_back(coefficients[p], static_cast<double>(p));
    }
    return OddCoupling(Kind::OddPolynomial, std::move(terms));
  }

  /// Sum of a_m sin(m t) over (a_m, m) with m a positive integer.
  static OddCoupling scaled_sine_sum(const std::vector<std::pair<double, int>>& terms) {
    std::vector<std::pair<double, double>> t;
    for (const auto& [a, m] : terms) {
      if (m <= 0) throw Error(ErrorCode::InvalidArgument, "scaled_sine_sum frequencies must be positive integers");
      t.emplace_back(a, static_cast<double>(m));
    }
    return OddCoupling(Kind::ScaledSineSum, std::move(t));
  }

  Kind kind() const { return kind_; }
  const std::vector<std::pair<double, double>>& terms() const { return terms_; }

  double value(double t) const {
    double s = 0.0;
    for (const auto& [a, m] : terms_) {
      switch (kind_) {
        case Kind::Sine:
        case Kind::ScaledSineSum: s += a * std::sin(m * t); break;
        case Kind::Linear: s += a * t; break;
        case Kind::OddPolynomial: s += a * ipow(t, m); break;
      }
    }
    return s;
  }

  double derivative(double t) const {
    double s = 0.0;
    for (const auto& [a, m] : terms_) {
      switch (kind_) {
        case Kind::Sine:
        case Kind::ScaledSineSum: s += a * m * std::cos(m * t); break;
        case Kind::Linear: s += a; break;
        case Kind::OddPolynomial: s += a * m * ipow(t, m - 1); break;
      }
    }
    return s;
  }

  double second_derivative(double t) const {
    double s = 0.0;
    for (const auto& [a, m] : terms_) {
      switch (kind_) {
        case Kind::Sine:
        case Kind::ScaledSineSum: s -= a * m * m * std::sin(m * t); break;
        case Kind::Linear: break;
        case Kind::OddPolynomial: s += m > 1 ? a * m * (m - 1) * ipow(t, m - 2) : 0.0; break;
      }
    }
    return s;
  }

  double antiderivative(double t) const {
    double s = 0.0;
    for (const auto& [a, m] : terms_) {
      switch (kind_) {
        case Kind::Sine:
        case Kind::ScaledSineSum: s += a * (1.0 - std::cos(m * t)) / m; break;
        case Kind::Linear: s += 0.5 * a * t * t; break;
        case Kind::OddPolynomial: s += a * ipow(t, m + 1) / (m + 1); break;
      }
    }
    return s;
  }

  /// 2π-periodic, so the system can be studied on the torus.
  bool periodic() const {
    if (kind_ == Kind::Sine || kind_ == Kind::ScaledSineSum) return true;
    for (const auto& term : terms_)
      if (term.first != 0.0) return false;
    return true;
  }

  std::string kind_name() const {
    switch (kind_) {
      case Kind::Sine: return "sine";
      case Kind::Linear: return "linear";
      case Kind::OddPolynomial: return "odd_polynomial";
      case Kind::ScaledSineSum: return "scaled_sine_sum";
    }
    return "?";
  }

 private:
  OddCoupling(Kind kind, std::vector<std::pair<double, double>> terms) : kind_(kind), terms_(std::move(terms)) {}

  static double ipow(double t, double p) {
    double r = 1.0;
    for (int i = 0; i < static_cast<int>(p); ++i) r *= t;
    return r;
  }

  Kind kind_;
  std::vector<std::pair<double, double>> terms_;  // (coefficient, frequency or power)
};

// ---------------------------------------------------------------------------
// Additive systems f_c = k_[c] + Σ_{d -> c} w_dc φ_[dc](x_d - x_c)

class AdditiveLaplacianSystem {
 public:
  const NetworkGraph& graph() const { return graph_; }
  int n() const { return graph_.n_cells(); }
  const OddCoupling& coupling(int edge_class) const { return couplings_[static_cast<std::size_t>(edge_class)]; }
  const std::vector<double>& cell_constants() const { return cell_k_; }
  double constant_of_class(const std::string& cell_class) const {
    const auto& names = graph_.cell_class_names();
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == cell_class) return class_k_[i];
    throw Error(ErrorCode::InvalidArgument, "unknown cell class '" + cell_class + "'");
  }
  /// Σ_c k_[c] over all cells.
  double constant_sum() const {
    double s = 0.0;
    for (double k : cell_k_) s += k;
    return s;
  }
  bool torus_reducible() const {
    for (const auto& c : couplings_)
      if (!c.periodic()) return false;
    return true;
  }

  Vector evaluate(const Vector& x) const {
    check(x);
    Vector f(n());
    for (int c = 0; c < n(); ++c) {
      double s = cell_k_[static_cast<std::size_t>(c)];
      for (const auto& a : graph_.inputs(c)) s += a.weight * coupling(a.edge_class).value(x(a.tail) - x(c));
      f(c) = s;
    }
    return f;
  }

  Matrix jacobian(const Vector& x) const {
    check(x);
    Matrix j = Matrix::Zero(n(), n());
    for (int c = 0; c < n(); ++c) {
      double diag = 0.0;
      for (const auto& a : graph_.inputs(c)) {
        const double w = a.weight * coupling(a.edge_class).derivative(x(a.tail) - x(c));
        j(c, a.tail) += w;
        diag -= w;
      }
      j(c, c) = diag;
    }
    return j;
  }

  /// gbar(x) = Σ_{edges {c,d}} w ψ(x_d - x_c) - Σ_c k_[c] x_c, so f = -grad gbar.
  double potential(const Vector& x) const {
    check(x);
    double s = 0.0;
    for (const auto& a : graph_.arrows())
      if (a.tail < a.head) s += a.weight * coupling(a.edge_class).antiderivative(x(a.tail) - x(a.head));
    for (int c = 0; c < n(); ++c) s -= cell_k_[static_cast<std::size_t>(c)] * x(c);
    return s;
  }

  VectorField as_vector_field() const {
    return {n(), [sys = *this](const Vector& x) { return sys.evaluate(x); },
            [sys = *this](const Vector& x) { return sys.jacobian(x); }};
  }

 private:
  friend AdditiveLaplacianSystem build_additive_system(const NetworkGraph&, const std::map<std::string, OddCoupling>&,
                                                       const std::map<std::string, double>&);
  explicit AdditiveLaplacianSystem(NetworkGraph g) : graph_(std::move(g)) {}

  void check(const Vector& x) const {
    if (x.size() != n())
      throw Error(ErrorCode::InvalidArgument,
                  "state has dimension " + std::to_string(x.size()) + ", expected " + std::to_string(n()));
  }

  NetworkGraph graph_;
  std::vector<OddCoupling> couplings_;
  std::vector<double> class_k_;
  std::vector<double> cell_k_;
};

inline AdditiveLaplacianSystem build_additive_system(const NetworkGraph& graph,
                                                     const std::map<std::string, OddCoupling>& couplings,
                                                     const std::map<std::string, double>& constants) {
  if (!graph.bidirected()) throw Error(ErrorCode::NotBidirected, "additive systems need a bidirected graph");
  AdditiveLaplacianSystem sys(graph);
  for (const auto& name : graph.edge_class_names()) {
    auto it = couplings.find(name);
    if (it == couplings.end()) throw Error(ErrorCode::MissingCoupling, "no coupling for edge class '" + name + "'");
    sys.couplings_.push_back(it->second);
  }
  for (const auto& [name, _] : couplings)
    if (graph.edge_class_index(name) < 0)
      throw Error(ErrorCode::InvalidArgument, "coupling given for unknown edge class '" + name + "'");
  for (const auto& name : graph.cell_class_names()) {
    auto it = constants.find(name);
    if (it == constants.end()) throw Error(ErrorCode::MissingConstant, "no constant for cell class '" + name + "'");
    sys.class_k_.push_back(it->second);
  }
  for (int c = 0; c < graph.n_cells(); ++c)
    sys.cell_k_.push_back(sys.class_k_[static_cast<std::size_t>(graph.cell_class(c))]);
  return sys;
}

// ---------------------------------------------------------------------------
// Dissipativity near the diagonal: α φ(α) > 0 for 0 < |α| < ε

struct Condition30Entry {
  std::string edge_class;
  bool sampled_ok = true;
  bool derivative_positive = false;  // sufficient test φ'(0) > 0
  double worst_alpha = 0.0;
};

struct Condition30Report {
  double epsilon = 0.0;
  std::vector<Condition30Entry> entries;
  bool holds = true;
};

inline Condition30Report condition_30_report(const AdditiveLaplacianSystem& sys, double epsilon,
                                             int samples = 1000) {
  if (!(epsilon > 0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  Condition30Report r;
  r.epsilon = epsilon;
  for (int cls = 0; cls < sys.graph().n_edge_classes(); ++cls) {
    const auto& phi = sys.coupling(cls);
    Condition30Entry e;
    e.edge_class = sys.graph().edge_class_name(cls);
    e.derivative_positive = phi.derivative(0.0) > 0.0;
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
      // midpoints of a uniform grid on (-ε, ε); never hits 0 for even sample counts
      const double alpha = -epsilon + 2.0 * epsilon * (i + 0.5) / samples;
      if (alpha == 0.0) continue;
      const double v = alpha * phi.value(alpha);
      if (v <= 0.0 && (e.sampled_ok || v < worst)) {
        e.sampled_ok = false;
        worst = v;
        e.worst_alpha = alpha;
      }
    }
    r.holds = r.holds && e.sampled_ok;
    r.entries.push_back(e);
  }
  return r;
}

inline bool check_condition_30(const AdditiveLaplacianSystem& sys, double epsilon) {
  return condition_30_report(sys, epsilon).holds;
}

// ---------------------------------------------------------------------------
// Random sampling helpers shared by property checks

inline std::vector<Vector> random_points(int n, int count, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Vector x(n);
    for (int c = 0; c < n; ++c) x(c) = u(rng);
    out.push_back(x);
  }
  return out;
}

}  // namespace synclab
