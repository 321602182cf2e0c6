#include <doctest.h>

#include <random>

#include "spectra/enumerate.hpp"
#include "spectra/evaluate.hpp"
#include "spectra/parse.hpp"
#include "support/generators.hpp"
#include "support/naive_eval.hpp"
#include "support/oracles.hpp"

using namespace spectra;

TEST_CASE("evaluate basics") {
    Vocabulary vocab({"E"});
    Structure s(3, vocab);
    s.add_pair("E", 1, 2);

    CHECK(evaluate(parse_formula("forall x. x = x", vocab), s));

    Graph g(2);
    g.add_edge(1, 2);
    CHECK(evaluate(parse_formula("exists x. exists y. E(x,y)", vocab), g));

    auto exactly_two =
        parse_formula("exists x. exists y. (~(x = y) & forall z. (z = x | z = y))", vocab);
    Structure three(3, vocab);
    CHECK_FALSE(evaluate(exactly_two, three));
    Structure two(2, vocab);
    CHECK(evaluate(exactly_two, two));
}

TEST_CASE("evaluate errors") {
    Vocabulary vocab({"E"});
    Structure s(2, Vocabulary({"R"}));
    CHECK_THROWS_AS(evaluate(parse_formula("exists x. exists y. E(x,y)", vocab), s), Error);
    CHECK_THROWS_AS(evaluate(mk_atom("E", "x", "y"), s), Error);  // unassigned free vars
}

TEST_CASE("graph evaluation is symmetric in E") {
    Graph g(4);
    g.add_edge(1, 3);
    Evaluator ev(g);
    CHECK(ev.evaluate(mk_atom("E", "x", "y"), {{"x", 1}, {"y", 3}}));
    CHECK(ev.evaluate(mk_atom("E", "x", "y"), {{"x", 3}, {"y", 1}}));
    CHECK_FALSE(ev.evaluate(mk_atom("E", "x", "x"), {{"x", 1}}));
}

TEST_CASE("memoized evaluate agrees with the naive reference") {
    Vocabulary vocab({"R"});
    testing::FormulaGen gen(777, {"R"}, {"x", "y", "z"});
    for (int n = 1; n <= 3; ++n) {
        StructureEnumerator en(vocab, n, false);
        int structures = 0;
        std::vector<Structure> all;
        while (auto s = en.next()) {
            if (++structures > 64) break;  // cap at n=3: deterministic prefix
            all.push_back(*s);
        }
        for (int i = 0; i < 40; ++i) {
            auto f = gen.sentence(4);
            for (const auto& s : all) {
                Evaluator ev(s);
                CAPTURE(print_formula(f));
                CAPTURE(n);
                REQUIRE(ev.evaluate(f) == testing::naive_eval(f, s));
            }
        }
    }
}

TEST_CASE("evaluate respects negation and De Morgan duals") {
    testing::FormulaGen gen(12345, {"R"}, {"x", "y"});
    Vocabulary vocab({"R"});
    std::mt19937_64 rng(99);
    for (int i = 0; i < 60; ++i) {
        auto a = gen.sentence(3);
        auto b = gen.sentence(3);
        Structure s(2 + static_cast<int>(rng() % 2), vocab);
        for (int u = 1; u <= s.size(); ++u)
            for (int v = 1; v <= s.size(); ++v)
                if (rng() % 2) s.add_pair("R", u, v);
        Evaluator ev(s);
        CHECK(ev.evaluate(mk_not(a)) == !ev.evaluate(a));
        CHECK(ev.evaluate(mk_not(mk_and(a, b))) == ev.evaluate(mk_or(mk_not(a), mk_not(b))));
        CHECK(ev.evaluate(mk_not(mk_or(a, b))) == ev.evaluate(mk_and(mk_not(a), mk_not(b))));
    }
}

TEST_CASE("is_bipartite") {
    Graph triangle(3);
    triangle.add_edge(1, 2);
    triangle.add_edge(2, 3);
    triangle.add_edge(1, 3);
    CHECK_FALSE(is_bipartite(triangle));

    Graph even_cycle(4);
    even_cycle.add_edge(1, 2);
    even_cycle.add_edge(2, 3);
    even_cycle.add_edge(3, 4);
    even_cycle.add_edge(4, 1);
    auto part = is_bipartite(even_cycle);
    REQUIRE(part.has_value());
    for (const auto& [a, b] : even_cycle.edges()) CHECK(part->color[a] != part->color[b]);
}

TEST_CASE("graph self-loops are rejected structurally") {
    Graph g(3);
    CHECK_THROWS_AS(g.add_edge(2, 2), Error);
}

TEST_CASE("enumerate_structures counts") {
    {
        StructureEnumerator en(Vocabulary({"R1"}), 2, true);
        CHECK(en.total() == 4);
        int count = 0;
        while (en.next()) ++count;
        CHECK(count == 4);
    }
    {
        StructureEnumerator en(Vocabulary({"R1", "R2", "R3"}), 2, true);
        CHECK(en.total() == 64);
    }
    {
        StructureEnumerator en(Vocabulary({"R1"}), 1, true);
        CHECK(en.total() == 1);
        auto s = en.next();
        REQUIRE(s.has_value());
        CHECK(s->relations().at("R1").empty());
        CHECK_FALSE(en.next().has_value());
    }
}

TEST_CASE("graph_view agrees with direct graph evaluation") {
    std::mt19937_64 rng(4242);
    Vocabulary vocab({"E"});
    testing::FormulaGen gen(031, {"E"}, {"x", "y", "z"});
    for (int i = 0; i < 50; ++i) {
        int n = 2 + static_cast<int>(rng() % 5);
        Graph g = testing::random_graph(rng, n, 0.4);
        Structure view = graph_view(g);
        for (int j = 0; j < 4; ++j) {
            auto f = gen.sentence(3);
            CHECK(evaluate(f, g) == evaluate(f, view));
        }
    }
}

TEST_CASE("structure and graph text formats round-trip") {
    Vocabulary vocab({"R1", "R2", "R3"});
    Structure s(3, vocab);
    s.add_pair("R1", 1, 2);
    s.add_pair("R1", 2, 3);
    s.add_pair("R3", 1, 3);
    Structure back = parse_structure(render_structure(s));
    CHECK(back == s);

    Graph g(5);
    g.add_edge(1, 2);
    g.add_edge(2, 3);
    g.add_edge(3, 4);
    g.add_edge(4, 5);
    g.add_edge(1, 5);
    Graph gback = parse_graph(render_graph(g));
    CHECK(gback == g);

    // whitespace tolerance
    Structure spaced = parse_structure("structure 3\nR1:   (1,2)   (2,3)\nR2:\nR3: (1,3)\n");
    CHECK(spaced == s);
}
