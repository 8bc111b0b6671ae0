#pragma once

#include <algorithm>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "synclab/automorphism.hpp"
#include "synclab/dynamics.hpp"
#include "synclab/fixtures.hpp"
#include "synclab/spectra.hpp"
#include "synclab/synchrony.hpp"

// Census of Kuramoto equilibria on G6 by conjugacy class of synchrony
// pattern, checked against the published stability table.

namespace synclab {

struct GoldenPoint {
  std::string label;
  std::vector<double> x;
};

/// One printed line: representatives sharing the printed counts and interval.
struct GoldenLine {
  std::vector<GoldenPoint> representatives;
  ComponentCounts counts;
  Interval n_plus;
};

struct GoldenRow {
  int number = 0;
  std::string generator;  // cycle notation, 1-based
  std::vector<GoldenLine> lines;  // empty: no representative printed
};

namespace detail {

inline GoldenPoint gp(std::string label, std::vector<double> x) { return {std::move(label), std::move(x)}; }

// Two generic values: one with cos α > 0 and one with cos α < 0.
inline constexpr double kGenericAlpha[] = {0.7, 2.3};

}  // namespace detail

/// Counts are stored as (c_g, c_gplus, c_gminus); the printed column order is
/// c(G+), c(G-), c(G).
inline std::vector<GoldenRow> golden_table1() {
  constexpr double pi = std::numbers::pi;
  using detail::gp;
  std::vector<GoldenRow> rows;
  rows.push_back({1, "(1 4)", {}});
  rows.push_back({2, "(1 2 4 5)", {{{gp("(0,0,π,0,0,0)", {0, 0, pi, 0, 0, 0})}, {1, 2, 2}, {1, 4}}}});

  GoldenLine r3_generic{{}, {1, 2, 1}, {1, 5}};
  GoldenLine r4_generic{{}, {1, 2, 1}, {1, 5}};
  for (double a : detail::kGenericAlpha) {
    const std::string s = "α=" + std::to_string(a).substr(0, 3);
    r3_generic.representatives.push_back(gp("(0,0,α,π,π,-α) " + s, {0, 0, a, pi, pi, -a}));
    r3_generic.representatives.push_back(gp("(0,0,α,π,π,α+π) " + s, {0, 0, a, pi, pi, a + pi}));
    r4_generic.representatives.push_back(gp("(0,π,α,0,π,-α) " + s, {0, pi, a, 0, pi, -a}));
    r4_generic.representatives.push_back(gp("(0,π,α,0,π,α+π) " + s, {0, pi, a, 0, pi, a + pi}));
  }
  GoldenLine r3_quarter{{}, {3, 4, 4}, {1, 2}};
  GoldenLine r4_quarter{{}, {3, 6, 3}, {3, 3}};
  for (int sign : {1, -1}) {
    const double a = sign * pi / 2;
    const std::string s = sign > 0 ? "α=π/2" : "α=-π/2";
    r3_quarter.representatives.push_back(gp("(0,0,α,π,π,-α) " + s, {0, 0, a, pi, pi, -a}));
    r3_quarter.representatives.push_back(gp("(0,0,α,π,π,α+π) " + s, {0, 0, a, pi, pi, a + pi}));
    r4_quarter.representatives.push_back(gp("(0,π,α,0,π,-α) " + s, {0, pi, a, 0, pi, -a}));
    r4_quarter.representatives.push_back(gp("(0,π,α,0,π,α+π) " + s, {0, pi, a, 0, pi, a + pi}));
  }
  rows.push_back({3, "(1 2)(4 5)", {r3_generic, r3_quarter}});
  rows.push_back(
      {4, "(1 4)(2 5)", {r4_generic, r4_quarter, {{gp("(0,π,π,0,π,0)", {0, pi, pi, 0, pi, 0})}, {1, 2, 2}, {1, 4}}}});
  rows.push_back({5, "(1 2 4 5)(3 6)", {{{gp("(0,π,0,0,π,0)", {0, pi, 0, 0, pi, 0})}, {1, 3, 1}, {2, 5}}}});
  rows.push_back({6, "(1 2 3)(4 5 6)", {{{gp("(0,0,0,π,π,π)", {0, 0, 0, pi, pi, pi})}, {1, 2, 1}, {1, 5}}}});
  rows.push_back({7, "(1 2)(3 6)(4 5)", {{{gp("(0,0,0,π,π,0)", {0, 0, 0, pi, pi, 0})}, {1, 2, 1}, {1, 5}}}});
  rows.push_back({8,
                  "(1 4)(2 5)(3 6)",
                  {{{gp("(0,4π/3,2π/3,0,4π/3,2π/3)", {0, 4 * pi / 3, 2 * pi / 3, 0, 4 * pi / 3, 2 * pi / 3})},
                    {1, 6, 1},
                    {5, 5}}}});
  return rows;
}

struct PointCheck {
  GoldenPoint golden;
  std::optional<EquilibriumRecord> record;  // empty when the point is not an equilibrium
  bool in_row_class = false;
  bool counts_match = false;
  bool interval_match = false;
  bool n_plus_inside = false;
  bool ok() const { return record && in_row_class && counts_match && interval_match && n_plus_inside; }
};

struct LineCheck {
  GoldenLine golden;
  std::vector<PointCheck> points;
  bool ok() const {
    return std::all_of(points.begin(), points.end(), [](const PointCheck& p) { return p.ok(); });
  }
};

/// Distinct (counts, interval, n+) combination seen in the census.
struct CensusType {
  ComponentCounts counts;
  Interval n_plus_bounds;
  int n_plus = 0;
  int occurrences = 0;
  Vector example;
  bool printed = false;  // matches one of the row's printed lines
};

struct Table1Row {
  GoldenRow golden;
  Partition pattern;    // orbit partition of the generator
  Partition canonical;  // least conjugate
  bool balanced = false;
  std::vector<LineCheck> lines;
  std::vector<CensusType> census;
  bool ok() const {
    return balanced && std::all_of(lines.begin(), lines.end(), [](const LineCheck& l) { return l.ok(); });
  }
};

struct Table1Options {
  int grid = 8;
  int threads = 1;
};

struct Table1Report {
  std::vector<Table1Row> rows;
  int n_conjugacy_classes = 0;       // nontrivial classes found by enumeration
  bool rows_match_classes = false;   // the 8 generators hit 8 distinct nontrivial classes
  int census_size = 0;
  int census_bound_violations = 0;   // exact n+ outside its own interval
  int census_stable_off_diagonal = 0;  // n+ = 0 away from Δ
  std::vector<std::string> notes;
  bool matches() const {
    return rows_match_classes && census_bound_violations == 0 && census_stable_off_diagonal == 0 &&
           std::all_of(rows.begin(), rows.end(), [](const Table1Row& r) { return r.ok(); });
  }
};

inline Table1Report table1_report(const Table1Options& options = {}) {
  const auto sys = fixture_system("kuramoto-g6");
  const auto& g = sys.graph();
  const int n = g.n_cells();
  const auto aut = find_automorphisms(g);
  const auto lattice = enumerate_synchrony(g);
  const auto classes = conjugacy_group_patterns(lattice, aut);

  Table1Report report;
  std::vector<Partition> nontrivial;
  for (const auto& c : classes)
    if (!c.representative.is_total() && !c.representative.is_singletons()) nontrivial.push_back(c.representative);
  report.n_conjugacy_classes = static_cast<int>(nontrivial.size());

  std::map<std::vector<int>, std::size_t> row_of_class;
  for (const auto& golden : golden_table1()) {
    Table1Row row;
    row.golden = golden;
    row.pattern = orbit_partition({Permutation::from_cycles(n, golden.generator)}, n);
    row.canonical = canonical_representative(row.pattern, aut);
    row.balanced = is_balanced(g, row.pattern);
    row_of_class.emplace(row.canonical.labels(), report.rows.size());
    for (const auto& line : golden.lines) {
      LineCheck lc{line, {}};
      for (const auto& p : line.representatives) {
        PointCheck pc;
        pc.golden = p;
        const Vector x = Eigen::Map<const Vector>(p.x.data(), static_cast<Eigen::Index>(p.x.size()));
        try {
          pc.record = classify_stability(sys, x);
        } catch (const Error&) {
          lc.points.push_back(pc);
          continue;
        }
        const auto& s = pc.record->spectrum;
        pc.in_row_class = canonical_representative(pc.record->pattern, aut) == row.canonical;
        pc.counts_match = s.counts == line.counts;
        pc.interval_match = s.bounds.n_plus == line.n_plus;
        pc.n_plus_inside = s.bounds.n_plus.contains(s.signature.n_plus);
        lc.points.push_back(pc);
      }
      row.lines.push_back(lc);
    }
    report.rows.push_back(row);
  }
  {
    std::vector<Partition> hit;
    for (const auto& r : report.rows)
      if (std::find(nontrivial.begin(), nontrivial.end(), r.canonical) != nontrivial.end() &&
          std::find(hit.begin(), hit.end(), r.canonical) == hit.end())
        hit.push_back(r.canonical);
    report.rows_match_classes = hit.size() == report.rows.size() && nontrivial.size() == report.rows.size();
  }

  // Census, largest fixed-point subspaces first.
  std::vector<std::size_t> order(report.rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return report.rows[a].pattern.n_classes() > report.rows[b].pattern.n_classes();
  });
  EquilibriumOptions eo;
  eo.grid = options.grid;
  eo.threads = options.threads;
  std::vector<EquilibriumRecord> census;
  for (std::size_t i : order)
    for (auto& rec : find_equilibria(sys, report.rows[i].pattern, eo)) {
      const bool seen = std::any_of(census.begin(), census.end(), [&](const EquilibriumRecord& e) {
        return detail::close_points(e.point, rec.point, true, eo.dedup_tol);
      });
      if (!seen) census.push_back(std::move(rec));
    }
  report.census_size = static_cast<int>(census.size());
  for (const auto& rec : census) {
    const auto& s = rec.spectrum;
    if (!s.bounds.n_plus.contains(s.signature.n_plus)) ++report.census_bound_violations;
    if (!rec.pattern.is_total() && s.signature.n_plus == 0) ++report.census_stable_off_diagonal;
    auto it = row_of_class.find(canonical_representative(rec.pattern, aut).labels());
    if (it == row_of_class.end()) continue;
    auto& row = report.rows[it->second];
    auto type = std::find_if(row.census.begin(), row.census.end(), [&](const CensusType& t) {
      return t.counts == s.counts && t.n_plus == s.signature.n_plus;
    });
    if (type == row.census.end()) {
      CensusType t;
      t.counts = s.counts;
      t.n_plus_bounds = s.bounds.n_plus;
      t.n_plus = s.signature.n_plus;
      t.example = rec.point;
      t.printed = std::any_of(row.golden.lines.begin(), row.golden.lines.end(),
                              [&](const GoldenLine& l) { return l.counts == s.counts; });
      row.census.push_back(t);
      type = row.census.end() - 1;
    }
    ++type->occurrences;
  }
  for (auto& row : report.rows) {
    std::sort(row.census.begin(), row.census.end(), [](const CensusType& a, const CensusType& b) {
      return std::tie(a.counts.c_gplus, a.counts.c_gminus, a.counts.c_g, a.n_plus) <
             std::tie(b.counts.c_gplus, b.counts.c_gminus, b.counts.c_g, b.n_plus);
    });
    for (const auto& t : row.census)
      if (!t.printed)
        report.notes.push_back("row " + std::to_string(row.golden.number) + ": census finds counts (" +
                               std::to_string(t.counts.c_gplus) + "," + std::to_string(t.counts.c_gminus) + "," +
                               std::to_string(t.counts.c_g) + ") with n+ = " + std::to_string(t.n_plus) +
                               ", not among the printed lines");
  }
  return report;
}

}  // namespace synclab
