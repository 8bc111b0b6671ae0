#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "synclab/automorphism.hpp"
#include "synclab/dynamics.hpp"
#include "synclab/fields.hpp"
#include "synclab/fixtures.hpp"
#include "synclab/spectra.hpp"
#include "synclab/synchrony.hpp"

// Randomized and exhaustive property checks behind `synclab verify`.

namespace synclab {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Symmetric matrix with zero row sums, off-diagonal weights uniform in
/// [-1, 1] and each edge present with probability `density`.
inline Eigen::MatrixXd random_signed_laplacian(int n, double density, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> w(-1.0, 1.0);
  std::bernoulli_distribution present(density);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (present(rng)) m(i, j) = m(j, i) = w(rng);
  for (int i = 0; i < n; ++i) m(i, i) = -(m.row(i).sum() - m(i, i));
  return m;
}

/// Random smooth difference potential on n cells as expression text.
inline std::string random_potential_text(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> var(1, n - 1);
  std::uniform_int_distribution<int> power(1, 3);
  std::uniform_int_distribution<int> shape(0, 3);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::ostringstream out;
  out.precision(6);
  const int terms = 2 + shape(rng);
  for (int k = 0; k < terms; ++k) {
    if (k > 0) out << " + ";
    out << "(" << coef(rng) << ")*";
    const int a = var(rng), b = var(rng);
    switch (shape(rng)) {
      case 0: out << "t" << a << "^" << power(rng) + 1; break;
      case 1: out << "t" << a << "^" << power(rng) << "*t" << b << "^" << power(rng); break;
      case 2: out << "sin(t" << a << " - 2*t" << b << ")"; break;
      default: out << "cos(t" << a << ")*t" << b; break;
    }
  }
  return out.str();
}

namespace detail {

template <class F>
CheckResult timed_check(const std::string& name, F&& body) {
  CheckResult r;
  r.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

/// Calls f on every partition of {0..n-1} as a restricted-growth string.
inline void for_each_partition(int n, const std::function<void(const Partition&)>& f) {
  std::vector<int> rgs(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int i, int blocks) {
    if (i == n) {
      f(Partition(rgs));
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      rgs[static_cast<std::size_t>(i)] = b;
      rec(i + 1, std::max(blocks, b + 1));
    }
  };
  if (n == 0) return;
  rec(1, 1);
}

inline Vector permute_state(const Permutation& gamma, const Vector& x) {
  Vector y(x.size());
  for (Eigen::Index c = 0; c < x.size(); ++c) y(gamma(static_cast<int>(c))) = x(c);
  return y;
}

inline std::vector<std::pair<std::string, AdditiveLaplacianSystem>> sample_systems() {
  std::vector<std::pair<std::string, AdditiveLaplacianSystem>> out;
  out.emplace_back("kuramoto-g6", fixture_system("kuramoto-g6"));
  out.emplace_back("g6-tilde", fixture_system("g6-tilde"));
  out.emplace_back("fig2", build_additive_system(make_paper_graph("fig2"),
                                                 {{"phi", OddCoupling::odd_polynomial({0.0, 1.0, 0.0, 0.3})},
                                                  {"theta", OddCoupling::scaled_sine_sum({{1.0, 1}, {0.25, 2}})}},
                                                 {{"p", 0.4}, {"q", -0.8}}));
  out.emplace_back("ring5-sine2", build_additive_system(make_ring(5), {{"a", OddCoupling::sine(2.0)}}, {{"p", 0.0}}));
  return out;
}

}  // namespace detail

struct SuiteOptions {
  std::uint64_t seed = 0;
  int fuzz_cases = 10000;
};

inline std::vector<CheckResult> run_property_suite(const SuiteOptions& options = {}) {
  std::vector<CheckResult> results;
  std::mt19937_64 rng(options.seed);

  results.push_back(detail::timed_check("balanced iff adjacency-invariant (fixtures, n <= 6)", [&](CheckResult& r) {
    long checks = 0, disagreements = 0;
    for (const char* ref : {"ring3", "ring4", "ring5", "ring6", "g5", "g6", "fig1", "fig2", "fig5"}) {
      const auto g = fixture_graph(ref);
      detail::for_each_partition(g.n_cells(), [&](const Partition& p) {
        if (detail::mixes_cell_classes(g, p)) return;
        ++checks;
        if (is_balanced(g, p) != is_invariant_under_adjacency(g, p)) ++disagreements;
      });
    }
    r.passed = disagreements == 0;
    r.detail = std::to_string(checks) + " partitions, " + std::to_string(disagreements) + " disagreements";
  }));

  results.push_back(detail::timed_check("orbit partitions of automorphisms are balanced", [&](CheckResult& r) {
    long bad = 0, total = 0;
    for (const char* ref : {"ring5", "ring6", "g6", "g7", "fig1", "fig2", "fig5"}) {
      const auto g = fixture_graph(ref);
      const auto aut = find_automorphisms(g);
      for (const auto& gamma : aut.elements) {
        ++total;
        if (!is_balanced(g, orbit_partition({gamma}, g.n_cells()))) ++bad;
      }
    }
    r.passed = bad == 0;
    r.detail = std::to_string(total) + " cyclic subgroups, " + std::to_string(bad) + " unbalanced orbit partitions";
  }));

  results.push_back(detail::timed_check("eigenvalue signature within component bounds", [&](CheckResult& r) {
    std::uniform_int_distribution<int> size(2, 8);
    std::uniform_real_distribution<double> density(0.0, 1.0);
    int outside = 0, kernel = 0, trace = 0;
    for (int i = 0; i < options.fuzz_cases; ++i) {
      const auto l = validate_laplacian(random_signed_laplacian(size(rng), density(rng), rng));
      const auto s = eigen_signature(l);
      if (!s.within_bounds) ++outside;
      if (s.signature.n_zero < 1 || (l.entries() * Vector::Ones(l.size())).cwiseAbs().maxCoeff() > 1e-12) ++kernel;
      double sum = 0.0;
      for (double v : s.eigenvalues) sum += v;
      if (std::abs(sum - l.entries().trace()) > 1e-9 * l.size() * (1.0 + l.inf_norm())) ++trace;
    }
    r.passed = outside == 0 && kernel == 0 && trace == 0;
    r.detail = std::to_string(options.fuzz_cases) + " matrices: " + std::to_string(outside) + " outside bounds, " +
               std::to_string(kernel) + " kernel failures, " + std::to_string(trace) + " trace mismatches";
  }));

  results.push_back(detail::timed_check("signature additive over block diagonals", [&](CheckResult& r) {
    std::uniform_int_distribution<int> size(1, 5);
    std::uniform_real_distribution<double> density(0.0, 1.0);
    int bad = 0;
    const int pairs = std::max(1, options.fuzz_cases / 10);
    for (int i = 0; i < pairs; ++i) {
      const auto a = random_signed_laplacian(size(rng), density(rng), rng);
      const auto b = random_signed_laplacian(size(rng), density(rng), rng);
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(a.rows() + b.rows(), a.cols() + b.cols());
      m.topLeftCorner(a.rows(), a.cols()) = a;
      m.bottomRightCorner(b.rows(), b.cols()) = b;
      // one shared threshold so the three signatures classify alike
      SpectrumOptions so;
      so.zero_tol = default_zero_tol(validate_laplacian(m));
      const auto sa = eigen_signature(validate_laplacian(a), so).signature;
      const auto sb = eigen_signature(validate_laplacian(b), so).signature;
      const auto sm = eigen_signature(validate_laplacian(m), so).signature;
      if (sm.n_plus != sa.n_plus + sb.n_plus || sm.n_zero != sa.n_zero + sb.n_zero ||
          sm.n_minus != sa.n_minus + sb.n_minus)
        ++bad;
    }
    r.passed = bad == 0;
    r.detail = std::to_string(pairs) + " block pairs, " + std::to_string(bad) + " non-additive";
  }));

  results.push_back(detail::timed_check("Laplacian maps from potentials", [&](CheckResult& r) {
    std::vector<DifferencePotential> potentials{DifferencePotential::parse(3, "t1^2*t2^2/2")};
    std::uniform_int_distribution<int> size(3, 5);
    for (int i = 0; i < 5; ++i) {
      const int n = size(rng);
      potentials.push_back(DifferencePotential::parse(n, random_potential_text(n, rng), 0.5 * i));
    }
    double worst_defect = 0.0, worst_sum = 0.0, worst_grad = 0.0, worst_fd = 0.0;
    for (const auto& p : potentials) {
      const LaplacianMap map(p);
      const auto pts = random_points(p.n, 100, -2.0, 2.0, rng);
      const auto rep = verify_laplacian_map(as_vector_field(map), pts);
      worst_defect = std::max({worst_defect, rep.max_symmetry, rep.max_row_sum});
      worst_fd = std::max(worst_fd, rep.max_fd_relative);
      for (const auto& x : pts) {
        const Vector f = map.evaluate(x);
        worst_sum = std::max(worst_sum, std::abs(f.sum() - p.k));
        const Vector grad = finite_difference_jacobian(
            [&](const Vector& y) { return Vector::Constant(1, map.potential(y)); }, x).row(0).transpose();
        worst_grad = std::max(worst_grad, (f + grad).cwiseAbs().maxCoeff() / (1.0 + f.cwiseAbs().maxCoeff()));
      }
    }
    r.passed = worst_defect < 1e-6 && worst_sum < 1e-8 && worst_grad < 1e-4 && worst_fd < 1e-4;
    std::ostringstream d;
    d << potentials.size() << " potentials: defect " << worst_defect << ", |sum f - k| " << worst_sum
      << ", |f + grad g| rel " << worst_grad << ", FD rel " << worst_fd;
    r.detail = d.str();
  }));

  results.push_back(detail::timed_check("additive systems: Laplacian Jacobian, sums, shifts, gradient", [&](CheckResult& r) {
    std::ostringstream d;
    bool ok = true;
    std::uniform_real_distribution<double> shift(-5.0, 5.0);
    for (const auto& [name, sys] : detail::sample_systems()) {
      const auto aut = find_automorphisms(sys.graph());
      const auto pts = random_points(sys.n(), 100, -kTwoPi, kTwoPi, rng);
      double lap = 0.0, sum = 0.0, inv = 0.0, grad = 0.0, equi = 0.0, pot = 0.0;
      for (const auto& x : pts) {
        const Matrix j = sys.jacobian(x);
        lap = std::max({lap, (j - j.transpose()).cwiseAbs().maxCoeff(), j.rowwise().sum().cwiseAbs().maxCoeff()});
        const Vector f = sys.evaluate(x);
        sum = std::max(sum, std::abs(f.sum() - sys.constant_sum()));
        const double t = shift(rng);
        const Vector xs = x.array() + t;
        inv = std::max(inv, (sys.evaluate(xs) - f).cwiseAbs().maxCoeff());
        // gbar(x + t1) - gbar(x) = -t Σk with f = -grad gbar
        pot = std::max(pot, std::abs(sys.potential(xs) - sys.potential(x) + t * sys.constant_sum()));
        const Vector g = finite_difference_jacobian(
            [&](const Vector& y) { return Vector::Constant(1, sys.potential(y)); }, x).row(0).transpose();
        grad = std::max(grad, (f + g).cwiseAbs().maxCoeff() / (1.0 + f.cwiseAbs().maxCoeff()));
        for (const auto& gamma : aut.elements)
          equi = std::max(equi, (sys.evaluate(detail::permute_state(gamma, x)) - detail::permute_state(gamma, f))
                                    .cwiseAbs()
                                    .maxCoeff());
      }
      const auto fd = verify_laplacian_map(sys.as_vector_field(), pts);
      const bool sys_ok = lap <= 1e-10 && sum <= 1e-8 && inv <= 1e-8 && pot <= 1e-6 * (1 + std::abs(sys.constant_sum())) &&
                          grad <= 1e-4 && equi <= 1e-10 && fd.passed;
      ok = ok && sys_ok;
      d << name << (sys_ok ? " ok" : " FAILED") << " (lap " << lap << ", sum " << sum << ", shift " << inv << ", grad "
        << grad << ", equivariance " << equi << ", FD " << fd.max_fd_relative << "); ";
    }
    r.passed = ok;
    r.detail = d.str();
  }));

  results.push_back(detail::timed_check("dissipation near the diagonal", [&](CheckResult& r) {
    const auto k = lyapunov_tube_check(fixture_system("kuramoto-g6"), 1.0, 1000, options.seed);
    const auto t = lyapunov_tube_check(fixture_system("g6-tilde"), 1.0, 1000, options.seed + 1);
    r.passed = k.passed && t.passed;
    r.detail = "kuramoto-g6 " + std::to_string(k.dissipation_failures + k.zero_set_failures) + " failures, g6-tilde " +
               std::to_string(t.dissipation_failures + t.zero_set_failures) + " failures over 1000 trials each";
  }));

  results.push_back(detail::timed_check("trajectories: potential monotone, mean drift", [&](CheckResult& r) {
    std::ostringstream d;
    bool ok = true;
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (const auto& [name, sys] : detail::sample_systems()) {
      Vector x0(sys.n());
      for (int c = 0; c < sys.n(); ++c) x0(c) = u(rng);
      const auto tr = integrate(sys, x0, 20.0, 0.01);
      double rise = 0.0;
      for (std::size_t i = 1; i < tr.potentials.size(); ++i)
        rise = std::max(rise, tr.potentials[i] - tr.potentials[i - 1]);
      const double drift = std::abs(tr.states.back().sum() - x0.sum() - tr.times.back() * sys.constant_sum());
      const bool sys_ok = rise <= 1e-8 * (1.0 + std::abs(tr.potentials.front())) && drift <= 1e-8;
      ok = ok && sys_ok;
      d << name << (sys_ok ? " ok" : " FAILED") << " (max rise " << rise << ", drift " << drift << "); ";
    }
    r.passed = ok;
    r.detail = d.str();
  }));

  results.push_back(detail::timed_check("equilibrium census independent of grid (m = 8, 10)", [&](CheckResult& r) {
    const auto sys = fixture_system("g6-tilde");
    const auto pattern = Partition::parse(6, "1,5|2,4");
    std::vector<std::vector<EquilibriumRecord>> runs;
    for (int m : {8, 10}) {
      EquilibriumOptions o;
      o.grid = m;
      runs.push_back(find_equilibria(sys, pattern, o));
    }
    bool same = runs[0].size() == runs[1].size();
    for (std::size_t i = 0; same && i < runs[0].size(); ++i)
      same = detail::close_points(runs[0][i].point, runs[1][i].point, false, 1e-6);
    double worst = 0.0;
    for (const auto& run : runs)
      for (const auto& e : run) worst = std::max(worst, e.residual);
    r.passed = same && worst <= 1e-10;
    r.detail = std::to_string(runs[0].size()) + " vs " + std::to_string(runs[1].size()) + " equilibria, max residual " +
               std::to_string(worst);
  }));

  results.push_back(detail::timed_check("generic Jacobian on the diagonal", [&](CheckResult& r) {
    const auto k = generic_jacobian_check(fixture_system("kuramoto-g6"), 16, options.seed);
    bool ok = k.passed && !k.degenerate;
    for (const auto& s : k.samples) ok = ok && std::abs(s.alpha + 4.0) < 1e-10 && std::abs(s.beta - 1.0) < 1e-10;
    r.passed = ok;
    r.detail = "kuramoto-g6 alpha = " + std::to_string(k.samples.front().alpha) +
               ", beta = " + std::to_string(k.samples.front().beta);
  }));

  return results;
}

}  // namespace synclab
