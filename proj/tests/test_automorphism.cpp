#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "synclab/automorphism.hpp"
#include "synclab/fixtures.hpp"

using namespace synclab;

namespace {

std::set<std::vector<int>> elements(const AutomorphismGroup& g) {
  std::set<std::vector<int>> out;
  for (const auto& p : g.elements) out.insert(p.image);
  return out;
}

Permutation cyc(const std::string& s) { return Permutation::from_cycles(6, s); }

}  // namespace

TEST(Permutation, CycleNotation) {
  const auto p = cyc("(1 4)(2 5)");
  EXPECT_EQ(p.image, (std::vector<int>{3, 4, 2, 0, 1, 5}));
  EXPECT_EQ(p.cycles(), "(1 4)(2 5)");
  EXPECT_EQ(Permutation::identity(4).cycles(), "()");
  EXPECT_TRUE(p.after(p).is_identity());
  const auto r = cyc("(1 2 3 4 5 6)");
  EXPECT_EQ(r.after(r.inverse()), Permutation::identity(6));
  EXPECT_THROW(Permutation::from_cycles(3, "(1 4)"), Error);
  EXPECT_THROW(Permutation::from_cycles(3, "(1 x)"), Error);
}

TEST(Automorphisms, MatchBruteForce) {
  for (const char* ref : {"ring3", "ring4", "ring5", "ring6", "ring7", "g5", "g6", "g7", "fig1", "fig2", "fig5"}) {
    const auto g = fixture_graph(ref);
    const auto brute = oracle::automorphisms(g);
    const auto aut = find_automorphisms(g);
    EXPECT_EQ(elements(aut), std::set<std::vector<int>>(brute.begin(), brute.end())) << ref;
    EXPECT_EQ(generate_group(g.n_cells(), aut.generators).size(), aut.order()) << ref;
  }
}

TEST(Automorphisms, RingsAreDihedral) {
  for (int n = 3; n <= 8; ++n) EXPECT_EQ(find_automorphisms(make_ring(n)).order(), static_cast<std::size_t>(2 * n));
}

TEST(Automorphisms, G6) {
  const auto aut = find_automorphisms(make_gn(6));
  EXPECT_EQ(aut.order(), 48u);
  EXPECT_TRUE(aut.contains(cyc("(1 4)")));
  EXPECT_TRUE(aut.contains(cyc("(2 5)")));
  EXPECT_TRUE(aut.contains(cyc("(1 2 3 4 5 6)")));
  EXPECT_TRUE(aut.contains(cyc("(2 6)(3 5)")));
}

TEST(Automorphisms, Fig5) {
  const auto aut = find_automorphisms(make_paper_graph("fig5"));
  EXPECT_EQ(aut.order(), 12u);
  for (const char* s : {"(1 5)(2 4)", "(1 2)(3 6)(4 5)", "(1 5 6)(2 3 4)"}) EXPECT_TRUE(aut.contains(cyc(s))) << s;
  EXPECT_EQ(generate_group(6, {cyc("(1 5)(2 4)"), cyc("(1 2)(3 6)(4 5)"), cyc("(1 5 6)(2 3 4)")}).size(), 12u);
}

TEST(Automorphisms, Fig1) {
  const auto aut = find_automorphisms(make_paper_graph("fig1"));
  EXPECT_EQ(aut.order(), 2u);
  EXPECT_TRUE(aut.contains(cyc("(1 2)(3 6)(4 5)")));
}

TEST(OrbitPartition, Examples) {
  EXPECT_EQ(orbit_partition({Permutation::identity(6)}, 6), Partition::singletons(6));
  EXPECT_EQ(orbit_partition({cyc("(1 4)(2 5)(3 6)")}, 6), Partition::parse(6, "1,4|2,5|3,6"));
  EXPECT_EQ(orbit_partition({cyc("(1 5 6)(2 3 4)")}, 6), Partition::parse(6, "1,5,6|2,3,4"));
  EXPECT_EQ(orbit_partition({}, 3), Partition::singletons(3));
}

TEST(OrbitPartition, AlwaysBalanced) {
  for (const char* ref : {"ring5", "g6", "fig1", "fig2", "fig5"}) {
    const auto g = fixture_graph(ref);
    for (const auto& p : find_automorphisms(g).elements)
      EXPECT_TRUE(oracle::delta_invariant(g, orbit_partition({p}, g.n_cells()))) << ref << " " << p.cycles();
  }
}

TEST(Exotic, Fig1Pattern) {
  const auto g = make_paper_graph("fig1");
  const auto v = detect_exotic(g, Partition::parse(6, "1,4|2,5|3,6"));
  EXPECT_TRUE(v.exotic);
  const auto s = detect_exotic(g, Partition::parse(6, "1,2|3,6|4,5"));
  EXPECT_FALSE(s.exotic);
  ASSERT_EQ(s.witness_generators.size(), 1u);
  EXPECT_EQ(s.witness_generators[0].cycles(), "(1 2)(3 6)(4 5)");
}

TEST(Exotic, NoneOnRingsAndSmallCirculants) {
  for (const char* ref : {"ring3", "ring4", "ring5", "ring6", "ring7", "ring8", "g5", "g6", "g7", "g8", "g9"}) {
    const auto g = fixture_graph(ref);
    const auto aut = find_automorphisms(g);
    for (const auto& p : enumerate_synchrony(g).patterns)
      EXPECT_FALSE(detect_exotic(g, p.partition, aut).exotic) << ref << " " << p.partition.to_string();
  }
}

// Independent check of the verdict: a pattern is symmetric iff some subgroup
// has it as orbit partition; enough to try the subgroups generated by one or
// two elements on these small groups.
TEST(Exotic, VerdictMatchesSubgroupSearch) {
  for (const char* ref : {"fig1", "fig5", "g6", "g10"}) {
    const auto g = fixture_graph(ref);
    const auto aut = find_automorphisms(g);
    std::set<std::vector<int>> orbit_partitions;
    for (const auto& a : aut.elements)
      for (const auto& b : aut.elements) orbit_partitions.insert(orbit_partition({a, b}, g.n_cells()).labels());
    for (const auto& p : enumerate_synchrony(g).patterns) {
      const bool exotic = detect_exotic(g, p.partition, aut).exotic;
      if (!exotic) continue;
      EXPECT_FALSE(orbit_partitions.count(p.partition.labels())) << ref << " " << p.partition.to_string();
    }
  }
}

TEST(Exotic, G10HasSome) {
  const auto g = make_gn(10);
  const auto aut = find_automorphisms(g);
  int exotic = 0;
  for (const auto& p : enumerate_synchrony(g).patterns) exotic += detect_exotic(g, p.partition, aut).exotic;
  EXPECT_GE(exotic, 1);
}

TEST(Exotic, NotBalancedIsAnError) {
  try {
    detect_exotic(make_gn(6), Partition::parse(6, "1,2|3,4,5,6"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotBalanced);
  }
}

TEST(Conjugacy, G6EightRows) {
  const auto g = make_gn(6);
  const auto classes = conjugacy_group_patterns(enumerate_synchrony(g), find_automorphisms(g));
  int nontrivial = 0;
  for (const auto& c : classes)
    if (!c.representative.is_total() && !c.representative.is_singletons()) ++nontrivial;
  EXPECT_EQ(nontrivial, 8);
}

TEST(Conjugacy, Fig5FiveClasses) {
  const auto g = make_paper_graph("fig5");
  const auto classes = conjugacy_group_patterns(enumerate_synchrony(g), find_automorphisms(g));
  int nontrivial = 0;
  for (const auto& c : classes)
    if (!c.representative.is_total() && !c.representative.is_singletons()) ++nontrivial;
  EXPECT_EQ(nontrivial, 5);
}

TEST(Conjugacy, RepresentativeIsLeastInOrbit) {
  const auto g = make_gn(6);
  const auto aut = find_automorphisms(g);
  for (const auto& p : enumerate_synchrony(g).patterns) {
    const auto rep = canonical_representative(p.partition, aut);
    for (const auto& gamma : aut.elements) {
      EXPECT_LE(rep.labels(), p.partition.permuted(gamma.image).labels());
      EXPECT_EQ(canonical_representative(p.partition.permuted(gamma.image), aut), rep);
    }
  }
  const auto singles = conjugacy_group_patterns({Partition::singletons(6)}, aut);
  ASSERT_EQ(singles.size(), 1u);
  EXPECT_EQ(singles[0].representative, Partition::singletons(6));
}
