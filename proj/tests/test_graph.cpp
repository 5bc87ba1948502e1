#include <doctest.h>

#include <cmath>
#include <sstream>

#include "infcen/graph.hpp"
#include "test_support.hpp"

using namespace infcen;

TEST_CASE("undirected loading doubles edges") {
  Graph g = Graph::load_edge_list("0 1\n1 2", Directedness::undirected,
                                  ProbScheme::constant(1.0));
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 4);
  for (const auto& e : g.edges()) CHECK(e.prob == 1.0);
}

TEST_CASE("from-file probabilities survive a round trip") {
  const char* text = "0 1 0.5\n0 2 0.5\n1 0 0.6\n2 0 0.6";
  Graph g = Graph::load_edge_list(text, Directedness::directed,
                                  ProbScheme::from_file());
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 4);

  std::ostringstream out;
  write_edge_list(out, g);
  CHECK(out.str() == "0 1 0.5\n0 2 0.5\n1 0 0.6\n2 0 0.6\n");

  // Reload of the serialization reproduces edges and probabilities exactly.
  Graph g2 = Graph::load_edge_list(out.str(), Directedness::directed,
                                   ProbScheme::from_file());
  REQUIRE(g2.edge_count() == g.edge_count());
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    CHECK(g.edges()[i].source == g2.edges()[i].source);
    CHECK(g.edges()[i].target == g2.edges()[i].target);
    CHECK(g.edges()[i].prob == g2.edges()[i].prob);
  }
}

TEST_CASE("node ids compact in first-appearance order") {
  Graph g = Graph::load_edge_list("banana apple\ncherry banana",
                                  Directedness::directed,
                                  ProbScheme::constant(0.5));
  CHECK(g.label(0) == "banana");
  CHECK(g.label(1) == "apple");
  CHECK(g.label(2) == "cherry");
  CHECK(g.find_label("cherry") == NodeId{2});
  CHECK(!g.find_label("durian"));

  std::ostringstream ids;
  write_id_map(ids, g);
  CHECK(ids.str() == "banana 0\napple 1\ncherry 2\n");
}

TEST_CASE("loader reports malformed input with line numbers") {
  auto load = [](const char* text, auto scheme) {
    return Graph::load_edge_list(text, Directedness::directed, scheme);
  };
  CHECK_THROWS_WITH_AS(load("0 1 0.5\n0", ProbScheme::from_file()),
                       doctest::Contains("line 2"), ParseError);
  CHECK_THROWS_WITH_AS(load("0 1 1.5", ProbScheme::from_file()),
                       doctest::Contains("outside [0,1]"), ParseError);
  CHECK_THROWS_WITH_AS(load("0 1", ProbScheme::from_file()),
                       doctest::Contains("missing probability"), ParseError);
  CHECK_THROWS_WITH_AS(load("0 1\n0 1", ProbScheme::constant(1.0)),
                       doctest::Contains("duplicate"), ParseError);
  CHECK_THROWS_WITH_AS(load("0 0", ProbScheme::constant(1.0)),
                       doctest::Contains("self-loop"), ParseError);
  CHECK_THROWS_WITH_AS(load("0 1 0.5 9", ProbScheme::from_file()),
                       doctest::Contains("trailing"), ParseError);
  // comments, blank lines, and CRLF endings are fine
  Graph g = load("# header\r\n\r\n0 1 0.25\r\n", ProbScheme::from_file());
  CHECK(g.edge_count() == 1);
  CHECK(g.edges()[0].prob == 0.25);
}

TEST_CASE("wc assigns reciprocal in-degrees") {
  SUBCASE("star into a center with 4 in-edges") {
    Graph g = assign_wc(testsupport::make_graph(
        5, {{1, 0, 0}, {2, 0, 0}, {3, 0, 0}, {4, 0, 0}}));
    for (const auto& e : g.edges()) CHECK(e.prob == 0.25);
  }
  SUBCASE("single edge") {
    Graph g = assign_wc(testsupport::make_graph(2, {{0, 1, 0}}));
    CHECK(g.edges()[0].prob == 1.0);
  }
  SUBCASE("two-in-one example") {
    Graph g = Graph::load_edge_list("0 1\n2 1", Directedness::directed,
                                    ProbScheme::wc());
    for (const auto& e : g.edges()) CHECK(e.prob == 0.5);
  }
  SUBCASE("mutual-pair topology") {
    // v->u, w->u, u->v, u->w: u has in-degree 2, v and w have 1.
    Graph g = assign_wc(testsupport::make_graph(
        3, {{1, 0, 0}, {2, 0, 0}, {0, 1, 0}, {0, 2, 0}}));
    CHECK(g.edges()[0].prob == 0.5);
    CHECK(g.edges()[1].prob == 0.5);
    CHECK(g.edges()[2].prob == 1.0);
    CHECK(g.edges()[3].prob == 1.0);
  }
  SUBCASE("incoming probabilities sum to one") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
      Graph g = assign_wc(
          testsupport::random_small_graph(rng, 8, 20, {0.5}));
      for (NodeId v = 0; v < g.node_count(); ++v) {
        if (g.in_degree(v) == 0) continue;
        for (double p : g.in_probs(v))
          CHECK(p == 1.0 / g.in_degree(v));
        std::vector<double> probs(g.in_probs(v).begin(), g.in_probs(v).end());
        CHECK(testsupport::neumaier_sum(probs) ==
              doctest::Approx(1.0).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("pagerank basics") {
  SUBCASE("single node") {
    Graph g = testsupport::make_graph(1, {});
    auto pr = pagerank(g, 0.15, 1e-12, 100);
    CHECK(pr.scores[0] == doctest::Approx(1.0));
    CHECK(pr.converged);
  }
  SUBCASE("symmetric 2-cycle") {
    Graph g = testsupport::make_graph(2, {{0, 1, 1}, {1, 0, 1}});
    auto pr = pagerank(g, 0.15, 1e-14, 500);
    CHECK(pr.scores[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(pr.scores[1] == doctest::Approx(0.5).epsilon(1e-10));
  }
  SUBCASE("3-node chain matches the dense oracle") {
    Graph g = testsupport::make_graph(3, {{0, 1, 1}, {1, 2, 1}});
    auto pr = pagerank(g, 0.15, 1e-15, 2000);
    auto oracle = testsupport::dense_pagerank_oracle(g, 0.15, 2000);
    for (int v = 0; v < 3; ++v)
      CHECK(pr.scores[v] == doctest::Approx(oracle[v]).epsilon(1e-10));
  }
  SUBCASE("random graphs: scores sum to one") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
      Graph g = testsupport::random_small_graph(rng, 10, 30, {1.0});
      auto pr = pagerank(g, 0.15, 1e-13, 1000);
      CHECK(pr.converged);
      double total = 0.0;
      for (double s : pr.scores) {
        CHECK(s >= 0.0);
        total += s;
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
      auto oracle = testsupport::dense_pagerank_oracle(g, 0.15, 3000);
      for (NodeId v = 0; v < g.node_count(); ++v)
        CHECK(pr.scores[v] == doctest::Approx(oracle[v]).epsilon(1e-9));
    }
  }
  SUBCASE("non-convergence sets the flag") {
    Graph g = testsupport::make_graph(3, {{0, 1, 1}, {1, 2, 1}});
    auto pr = pagerank(g, 0.15, 1e-15, 1);
    CHECK(!pr.converged);
  }
}

TEST_CASE("pr scheme scales and clamps") {
  SUBCASE("symmetric 2-cycle gives 0.5 both ways") {
    // n=2, one undirected pair: scale n/(2 mU) = 1, split r/(r+r) = 0.5.
    Graph g = testsupport::make_graph(2, {{0, 1, 0}, {1, 0, 0}});
    Graph assigned = assign_pr(g, 0.15);
    for (const auto& e : assigned.edges())
      CHECK(e.prob == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("3-node chain matches the hand formula") {
    Graph g = testsupport::make_graph(3, {{0, 1, 1}, {1, 2, 1}});
    auto r = testsupport::dense_pagerank_oracle(g, 0.15, 3000);
    Graph assigned = assign_pr(g, 0.15, 1e-15, 3000);
    double scale = 3.0 / (2.0 * 2.0);  // two undirected pairs
    CHECK(assigned.edges()[0].prob ==
          doctest::Approx(std::min(1.0, r[0] / (r[0] + r[1]) * scale))
              .epsilon(1e-9));
    CHECK(assigned.edges()[1].prob ==
          doctest::Approx(std::min(1.0, r[1] / (r[1] + r[2]) * scale))
              .epsilon(1e-9));
  }
  SUBCASE("assigned probabilities stay in (0,1]") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 10; ++trial) {
      Graph g = testsupport::random_small_graph(rng, 8, 20, {1.0});
      std::size_t clamped = 0;
      Graph assigned = assign_pr(g, 0.15, 1e-12, 500, &clamped);
      for (const auto& e : assigned.edges()) {
        CHECK(e.prob > 0.0);
        CHECK(e.prob <= 1.0);
      }
    }
  }
}

TEST_CASE("undirected pair counting") {
  Graph g = testsupport::make_graph(3, {{0, 1, 1}, {1, 0, 1}, {1, 2, 1}});
  CHECK(g.undirected_edge_count() == 2);
}
