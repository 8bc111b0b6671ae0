#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "synclab/table1.hpp"

using namespace synclab;

namespace {

constexpr double pi = std::numbers::pi;

// Counts and n+ from first principles: weights cos(x_j - x_i) on the edges of
// G6, components by BFS, eigenvalues by Eigen.
struct Hand {
  ComponentCounts counts;
  int n_plus = 0;
};

Hand by_hand(const std::vector<double>& x) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int d : {1, 2, 4, 5}) {
      const int j = (i + d) % 6;
      m(i, j) = std::cos(x[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(i)]);
    }
  for (int i = 0; i < 6; ++i) m(i, i) = -m.row(i).sum();
  const double tol = 1e-9;
  Hand h;
  h.counts.c_g = oracle::components(m, [&](double w) { return std::abs(w) > tol; });
  h.counts.c_gplus = oracle::components(m, [&](double w) { return w > tol; });
  h.counts.c_gminus = oracle::components(m, [&](double w) { return w < -tol; });
  h.n_plus = oracle::signature(m, 1e-8).plus;
  return h;
}

const Table1Report& report() {
  static const Table1Report r = table1_report();
  return r;
}

}  // namespace

TEST(StabilityTable, GeneratorsCoverTheConjugacyClasses) {
  EXPECT_EQ(report().n_conjugacy_classes, 8);
  EXPECT_TRUE(report().rows_match_classes);
  for (const auto& row : report().rows) EXPECT_TRUE(row.balanced) << row.golden.number;
}

TEST(StabilityTable, ComputedValuesAgreeWithHandOracle) {
  for (const auto& row : report().rows)
    for (const auto& line : row.lines)
      for (const auto& pc : line.points) {
        ASSERT_TRUE(pc.record) << pc.golden.label;
        const auto h = by_hand(pc.golden.x);
        EXPECT_EQ(pc.record->spectrum.counts, h.counts) << pc.golden.label;
        EXPECT_EQ(pc.record->spectrum.signature.n_plus, h.n_plus) << pc.golden.label;
        EXPECT_TRUE(pc.n_plus_inside) << pc.golden.label;
        EXPECT_TRUE(pc.in_row_class) << pc.golden.label;
      }
}

TEST(StabilityTable, PrintedRowsThatReproduce) {
  for (const auto& row : report().rows) {
    if (row.golden.number == 4) continue;
    EXPECT_TRUE(row.ok()) << "row " << row.golden.number;
  }
}

TEST(StabilityTable, SpotValues) {
  EXPECT_EQ(by_hand({0, pi, 0, 0, pi, 0}).counts, (ComponentCounts{1, 3, 1}));
  EXPECT_EQ(theorem_bounds({1, 3, 1}, 6).n_plus, (Interval{2, 5}));
  EXPECT_EQ(by_hand({0, 0, 0, pi, pi, pi}).counts, (ComponentCounts{1, 2, 1}));
  const auto q = by_hand({0, pi, pi / 2, 0, pi, -pi / 2});
  EXPECT_EQ(q.counts, (ComponentCounts{3, 6, 3}));
  EXPECT_EQ(q.n_plus, 3);
  EXPECT_EQ(by_hand({0, 4 * pi / 3, 2 * pi / 3, 0, 4 * pi / 3, 2 * pi / 3}).n_plus, 5);
}

// Row 4 of the printed table cannot be reproduced for two of its entries.
// Hand check for (0,π,α,0,π,-α), cos α > 0: positive edges 1-3, 1-6, 3-4,
// 4-6 join {1,3,4,6}; cells 2 and 5 have only negative edges. So c(G+) = 3.
TEST(StabilityTable, RowFourDiscrepancy) {
  for (double a : {0.7, -0.4}) {
    const auto h = by_hand({0, pi, a, 0, pi, -a});
    EXPECT_EQ(h.counts, (ComponentCounts{1, 3, 1}));
    EXPECT_EQ(theorem_bounds(h.counts, 6).n_plus, (Interval{2, 5}));
  }
  // with cos α < 0 the roles swap but the counts stay the same
  EXPECT_EQ(by_hand({0, pi, 2.3, 0, pi, -2.3}).counts, (ComponentCounts{1, 3, 1}));
  // the α+π family does give the printed (2,1,1)
  EXPECT_EQ(by_hand({0, pi, 0.7, 0, pi, 0.7 + pi}).counts, (ComponentCounts{1, 2, 1}));
  // the printed (2,2,1) does not occur at (0,π,π,0,π,0)
  EXPECT_EQ(by_hand({0, pi, pi, 0, pi, 0}).counts, (ComponentCounts{1, 2, 1}));

  const auto& row4 = report().rows[3];
  ASSERT_EQ(row4.golden.number, 4);
  EXPECT_FALSE(row4.ok());
  EXPECT_FALSE(report().matches());
}

TEST(StabilityTable, CensusIsConsistent) {
  EXPECT_GT(report().census_size, 0);
  EXPECT_EQ(report().census_bound_violations, 0);
  EXPECT_EQ(report().census_stable_off_diagonal, 0);
}
