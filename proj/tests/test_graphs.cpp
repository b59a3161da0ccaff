#include <random>

#include "doctest.h"

#include "gllm/graphs.hpp"
#include "support.hpp"

using gllm::VarSet;

TEST_SUITE("graphs") {
  TEST_CASE("edge normalization") {
    const gllm::Edge e(3, 1);
    CHECK(e.first == 1);
    CHECK(e.second == 3);
    CHECK_THROWS_AS(gllm::Edge(2, 2), std::invalid_argument);
  }

  TEST_CASE("adding edges") {
    gllm::UndirectedGraph g(support::letters(4));
    g.add_edge("A", "C");
    g.add_edge(2, 0);
    g.add_edge(1, 3);
    CHECK(g.num_edges() == 2);
    CHECK(g.adjacent(2, 0));
    CHECK(g.edges() == std::vector<gllm::Edge>{{0, 2}, {1, 3}});
    CHECK_THROWS(g.add_edge(1, 1));
    CHECK_THROWS(g.add_edge(1, 9));
    CHECK_THROWS(g.add_edge("A", "Z"));
  }

  TEST_CASE("cliques and independent sets of a small graph") {
    // path A-B-C plus isolated D
    gllm::UndirectedGraph g(support::letters(4));
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    CHECK(gllm::maximal_cliques(g) ==
          gllm::VarSetFamily{VarSet::of({0, 1}), VarSet::of({1, 2}), VarSet::of({3})});
    CHECK(gllm::maximal_independent_sets(g) == gllm::VarSetFamily{VarSet::of({0, 2, 3}), VarSet::of({1, 3})});
    CHECK(gllm::complement(gllm::complement(g)) == g);
  }

  TEST_CASE("enumeration matches brute force on every graph up to 5 vertices") {
    for (std::size_t n = 1; n <= 5; ++n) {
      const std::uint64_t graphs = std::uint64_t{1} << (n * (n - 1) / 2);
      for (std::uint64_t code = 0; code < graphs; ++code) {
        const auto g = support::graph_from_code(n, code);
        const auto mis = gllm::maximal_independent_sets(g);
        REQUIRE(support::sorted_bits(mis) == support::brute_force_mis(g));
        REQUIRE(support::sorted_bits(gllm::maximal_cliques(g)) ==
                support::brute_force_mis(gllm::complement(g)));
        REQUIRE(gllm::graph_from_amis(g.vertices(), mis) == g);
        REQUIRE(gllm::is_chordal(g) == support::chordal_by_elimination(g));
      }
    }
  }

  TEST_CASE("enumeration matches brute force on random graphs up to 10 vertices") {
    std::mt19937_64 rng(20241);
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t n = 6 + trial % 5;
      const auto g = support::random_graph(n, 0.2 + 0.6 * ((trial % 7) / 6.0), rng);
      REQUIRE(support::sorted_bits(gllm::maximal_independent_sets(g)) == support::brute_force_mis(g));
      REQUIRE(gllm::is_chordal(g) == support::chordal_by_elimination(g));
    }
  }

  TEST_CASE("AMIS determines the graph on random 8-vertex graphs") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
      const auto g = support::random_graph(8, 0.5, rng);
      const auto mis = gllm::maximal_independent_sets(g);
      REQUIRE(gllm::graph_from_amis(g.vertices(), mis) == g);
    }
  }

  TEST_CASE("graph from the Reinis AMIS") {
    const auto labels = support::letters(6);
    const gllm::VarSetFamily amis = {VarSet::of({0, 1, 5}), VarSet::of({1, 3, 5}), VarSet::of({2, 3, 5}),
                                     VarSet::of({2, 4, 5})};
    const auto g = gllm::graph_from_amis(labels, amis);
    CHECK(g.edges() == std::vector<gllm::Edge>{{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 4}, {3, 4}});
    CHECK(gllm::maximal_cliques(g) == gllm::VarSetFamily{VarSet::of({0, 2}), VarSet::of({0, 3, 4}),
                                                         VarSet::of({1, 2}), VarSet::of({1, 4}), VarSet::of({5})});
    CHECK_FALSE(gllm::is_chordal(g));
    CHECK_THROWS_AS(gllm::graph_from_amis(labels, gllm::VarSetFamily{VarSet::of({0, 1})}), std::invalid_argument);
  }

  TEST_CASE("chordality") {
    gllm::UndirectedGraph square(support::letters(4));
    square.add_edge(0, 1);
    square.add_edge(1, 2);
    square.add_edge(2, 3);
    square.add_edge(3, 0);
    CHECK_FALSE(gllm::is_chordal(square));
    square.add_edge(0, 2);
    CHECK(gllm::is_chordal(square));
    CHECK(gllm::is_chordal(gllm::UndirectedGraph(support::letters(3))));
  }

  TEST_CASE("DOT output") {
    gllm::UndirectedGraph g({"A", "B", "C"});
    g.add_edge(0, 1);
    CHECK(gllm::to_dot(g) == "graph G {\nA;\nB;\nC;\nA -- B;\n}\n");
    gllm::UndirectedGraph named({"smoke", ">=140"});
    named.add_edge(0, 1);
    CHECK(gllm::to_dot(named) == "graph G {\nsmoke;\n\">=140\";\nsmoke -- \">=140\";\n}\n");
  }
}
