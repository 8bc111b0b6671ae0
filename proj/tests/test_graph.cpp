#include <gtest/gtest.h>

#include "synclab/fixtures.hpp"
#include "synclab/graph.hpp"
#include "synclab/graph_io.hpp"

using namespace synclab;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

NetworkGraph from_text(const std::string& text) { return parse_graph_text(text); }

}  // namespace

TEST(ParseGraph, SixCycle) {
  const auto g = from_text(R"({"cells":6,"edges":[{"u":1,"v":2,"class":"a"},{"u":2,"v":3,"class":"a"},
    {"u":3,"v":4,"class":"a"},{"u":4,"v":5,"class":"a"},{"u":5,"v":6,"class":"a"},{"u":6,"v":1,"class":"a"}]})");
  EXPECT_EQ(g.n_cells(), 6);
  EXPECT_EQ(g.n_edges(), 6u);
  EXPECT_EQ(g, make_ring(6));
}

TEST(ParseGraph, BothDirectionsCollapse) {
  const auto g = from_text(R"({"cells":2,"edges":[{"u":1,"v":2,"class":"a"},{"u":2,"v":1,"class":"a"}]})");
  EXPECT_EQ(g.n_edges(), 1u);
  EXPECT_EQ(g.arrow_class(0, 1), g.arrow_class(1, 0));
}

TEST(ParseGraph, Errors) {
  EXPECT_EQ(code_of([] { from_text(R"({"cells":3,"edges":[{"u":3,"v":3,"class":"a"}]})"); }), ErrorCode::SelfEdge);
  EXPECT_EQ(code_of([] {
              from_text(R"({"cells":2,"edges":[{"u":1,"v":2,"class":"a"},{"u":2,"v":1,"class":"b"}]})");
            }),
            ErrorCode::ConflictingEdgeClass);
  // class "a" joins p->p on one edge and p->q on another
  EXPECT_EQ(code_of([] {
              from_text(R"({"cells":3,"cell_classes":["p","p","q"],
                 "edges":[{"u":1,"v":2,"class":"a"},{"u":2,"v":3,"class":"a"}]})");
            }),
            ErrorCode::CompatibilityViolation);
  EXPECT_EQ(code_of([] { from_text(R"({"cells":3})"); }), ErrorCode::MalformedDocument);
  EXPECT_EQ(code_of([] { from_text("not json"); }), ErrorCode::MalformedDocument);
  EXPECT_EQ(code_of([] { from_text(R"({"cells":2,"edges":[{"u":1,"v":7,"class":"a"}]})"); }),
            ErrorCode::MalformedDocument);
}

TEST(Generators, Rings) {
  EXPECT_EQ(make_ring(3).n_edges(), 3u);
  EXPECT_EQ(make_ring(6).n_edges(), 6u);
  EXPECT_EQ(code_of([] { make_ring(2); }), ErrorCode::InvalidArgument);
  const auto a = adjacency_matrices(make_ring(3));
  ASSERT_EQ(a.size(), 1u);
  Eigen::Matrix3d expected;
  expected << 0, 1, 1, 1, 0, 1, 1, 1, 0;
  EXPECT_EQ(a[0].entries, Eigen::MatrixXd(expected));
}

TEST(Generators, Circulants) {
  EXPECT_EQ(make_gn(5).n_edges(), 10u);
  EXPECT_EQ(make_gn(6).n_edges(), 12u);
  EXPECT_EQ(make_gn(10).n_edges(), 20u);
  EXPECT_EQ(code_of([] { make_gn(4); }), ErrorCode::InvalidArgument);
  // K5: every pair within distance 2
  const auto k5 = make_gn(5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (i != j) EXPECT_GE(k5.arrow_class(i, j), 0);
  const auto a = adjacency_matrices(make_gn(6))[0].entries;
  const std::vector<double> first{0, 1, 1, 0, 1, 1};
  for (int j = 0; j < 6; ++j) EXPECT_EQ(a(0, j), first[static_cast<std::size_t>(j)]);
  for (int i = 1; i < 6; ++i)
    for (int j = 0; j < 6; ++j) EXPECT_EQ(a(i, j), a(0, (j - i + 6) % 6));
}

TEST(Generators, WorkedExampleGraphs) {
  const auto fig5 = make_paper_graph("fig5");
  EXPECT_EQ(fig5.n_cells(), 6);
  EXPECT_EQ(fig5.n_edges(), 12u);
  EXPECT_EQ(fig5.n_edge_classes(), 2);
  for (int c = 0; c < 6; ++c) {
    const auto sig = input_signature(fig5, c);
    EXPECT_EQ(sig.counts, (std::map<std::string, int>{{"id", 2}, {"sin", 2}}));
  }
  for (const auto& m : adjacency_matrices(fig5))
    for (int i = 0; i < 6; ++i) EXPECT_EQ(m.entries.row(i).sum(), 2.0);
  // x1' = sin(x2-x1) + sin(x3-x1) + x5 + x6 - 2x1
  EXPECT_EQ(fig5.edge_class_name(fig5.arrow_class(1, 0)), "sin");
  EXPECT_EQ(fig5.edge_class_name(fig5.arrow_class(2, 0)), "sin");
  EXPECT_EQ(fig5.edge_class_name(fig5.arrow_class(4, 0)), "id");
  EXPECT_EQ(fig5.edge_class_name(fig5.arrow_class(5, 0)), "id");

  const auto fig2 = make_paper_graph("fig2");
  for (int c : {0, 1, 3, 4}) EXPECT_EQ(fig2.cell_class(c), fig2.cell_class(0));
  EXPECT_NE(fig2.cell_class(2), fig2.cell_class(0));
  EXPECT_EQ(fig2.cell_class(2), fig2.cell_class(5));
  EXPECT_EQ(input_signature(fig2, 2).counts, (std::map<std::string, int>{{"phi", 2}}));
  EXPECT_EQ(input_signature(fig2, 0).counts, (std::map<std::string, int>{{"phi", 1}, {"theta", 2}}));

  const auto fig1 = make_paper_graph("fig1");
  EXPECT_EQ(fig1.n_cells(), 6);
  EXPECT_EQ(fig1.n_edge_classes(), 2);
  EXPECT_EQ(classify(fig1), GraphKind::homogeneous);

  EXPECT_EQ(classify(make_gn(6)), GraphKind::regular);
  EXPECT_EQ(classify(fig5), GraphKind::homogeneous);
  EXPECT_EQ(classify(fig2), GraphKind::nonhomogeneous);
  EXPECT_EQ(code_of([] { make_paper_graph("fig9"); }), ErrorCode::UnknownFixture);
}

TEST(Generators, RegularSignature) {
  const auto g = make_gn(6);
  for (int c = 0; c < 6; ++c) EXPECT_EQ(input_signature(g, c).counts, (std::map<std::string, int>{{"a", 4}}));
}

TEST(Serialize, RingGolden) {
  const std::string expected =
      "{\n"
      "  \"cell_classes\": [\n"
      "    \"p\",\n"
      "    \"p\",\n"
      "    \"p\"\n"
      "  ],\n"
      "  \"cells\": 3,\n"
      "  \"edges\": [\n"
      "    {\n"
      "      \"class\": \"a\",\n"
      "      \"u\": 1,\n"
      "      \"v\": 2\n"
      "    },\n"
      "    {\n"
      "      \"class\": \"a\",\n"
      "      \"u\": 1,\n"
      "      \"v\": 3\n"
      "    },\n"
      "    {\n"
      "      \"class\": \"a\",\n"
      "      \"u\": 2,\n"
      "      \"v\": 3\n"
      "    }\n"
      "  ]\n"
      "}\n";
  EXPECT_EQ(serialize_graph(make_ring(3)), expected);
}

TEST(Serialize, G6EdgesSortedWithUBelowV) {
  const auto doc = json::parse(serialize_graph(make_gn(6)));
  std::vector<std::pair<int, int>> got;
  for (const auto& e : doc.at("edges")) got.emplace_back(e.at("u").get<int>(), e.at("v").get<int>());
  const std::vector<std::pair<int, int>> expected{{1, 2}, {1, 3}, {1, 5}, {1, 6}, {2, 3}, {2, 4},
                                                  {2, 6}, {3, 4}, {3, 5}, {4, 5}, {4, 6}, {5, 6}};
  EXPECT_EQ(got, expected);
}

TEST(Serialize, RoundTrip) {
  for (const char* ref : {"ring4", "g7", "fig1", "fig2", "fig5"}) {
    const auto g = fixture_graph(ref);
    const auto text = serialize_graph(g);
    const auto back = parse_graph_text(text);
    EXPECT_EQ(back, g) << ref;
    EXPECT_EQ(serialize_graph(back), text) << ref;
  }
}

TEST(Serialize, WeightsSurvive) {
  const auto g = from_text(R"({"cells":3,"edges":[{"u":1,"v":2,"class":"a"},{"u":2,"v":3,"class":"a"}],
    "weights":{"1-2":2.5}})");
  EXPECT_DOUBLE_EQ(g.arrow_weight(0, 1), 2.5);
  EXPECT_DOUBLE_EQ(g.arrow_weight(1, 0), 2.5);
  EXPECT_DOUBLE_EQ(g.arrow_weight(1, 2), 1.0);
  EXPECT_EQ(parse_graph_text(serialize_graph(g)), g);
}

TEST(Fixtures, References) {
  EXPECT_EQ(fixture_graph("fixture:g6"), make_gn(6));
  EXPECT_EQ(fixture_graph("ring5"), make_ring(5));
  EXPECT_EQ(code_of([] { fixture_graph("fixture:nope"); }), ErrorCode::UnknownFixture);
  EXPECT_EQ(code_of([] { fixture_system("fixture:nope"); }), ErrorCode::UnknownFixture);
  EXPECT_EQ(code_of([] { resolve_graph("/nonexistent/graph.json"); }), ErrorCode::MalformedDocument);
  EXPECT_EQ(resolve_system("fixture:kuramoto-g6").n(), 6);
}

TEST(Fixtures, SystemDocument) {
  const auto sys = parse_system(json::parse(R"({"graph":"fixture:fig5",
    "couplings":{"sin":{"kind":"sine","amplitude":1.0},"id":{"kind":"linear","slope":1.0}},
    "constants":{"p":0.0}})"));
  const auto ref = fixture_system("g6-tilde");
  Eigen::VectorXd x(6);
  x << 0.1, -0.4, 2.0, 0.3, 1.1, -2.2;
  EXPECT_LT((sys.evaluate(x) - ref.evaluate(x)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(code_of([] { parse_system(json::parse(R"({"graph":"fixture:g6"})")); }), ErrorCode::MalformedDocument);
  EXPECT_EQ(code_of([] {
              parse_system(json::parse(R"({"graph":"fixture:g6","couplings":{"a":{"kind":"tanh"}}})"));
            }),
            ErrorCode::MalformedDocument);
}

TEST(Fixtures, CouplingJsonRoundTrip) {
  for (const auto& c : {OddCoupling::sine(2.0), OddCoupling::linear(-1.5), OddCoupling::odd_polynomial({0, 1, 0, 0.3}),
                        OddCoupling::scaled_sine_sum({{1.0, 1}, {0.25, 2}})}) {
    const auto back = parse_coupling(coupling_to_json(c));
    for (double t : {-2.0, -0.3, 0.7, 1.9}) EXPECT_DOUBLE_EQ(back.value(t), c.value(t)) << c.kind_name();
  }
}
