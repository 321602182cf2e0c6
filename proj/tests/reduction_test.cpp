#include <doctest.h>

#include <random>

#include "spectra/encoding.hpp"
#include "spectra/evaluate.hpp"
#include "spectra/reduction.hpp"
#include "support/oracles.hpp"

using namespace spectra;

namespace {

ReductionParams params3() { return ReductionParams(3, {"R1", "R2", "R3"}); }

Structure sample_structure() {
    Structure s(2, Vocabulary({"R1", "R2", "R3"}));
    s.add_pair("R1", 1, 2);
    s.add_pair("R2", 2, 1);
    return s;
}

}  // namespace

TEST_CASE("gadget sizes") {
    for (int m : {3, 5}) {
        RulerGadget c = ruler_gadget(m);
        CHECK(c.graph.size() == 8 * m + 2);
        CHECK(c.graph.edge_count() == static_cast<size_t>(8 * m + 1));
        ElementGadget d = element_gadget(m);
        CHECK(d.graph.size() == m + 3);
        CHECK(d.graph.edge_count() == static_cast<size_t>(m + 2));
    }
    // pendant structure: every line vertex has exactly one degree-1 neighbour
    RulerGadget c = ruler_gadget(3);
    for (int i = 1; i <= 13; ++i) {
        int pendants = 0;
        for (int w : c.graph.neighbors(c.line_vertex(i)))
            pendants += c.graph.degree(w) == 1 ? 1 : 0;
        CHECK(pendants == 1);
    }
    // block degrees: P has m+1, Q has 2, S and each R_l have 1
    ElementGadget d = element_gadget(4);
    CHECK(d.graph.degree(d.vertex(Role::P())) == 5);
    CHECK(d.graph.degree(d.vertex(Role::Q())) == 2);
    CHECK(d.graph.degree(d.vertex(Role::S())) == 1);
    for (int l = 1; l <= 4; ++l) CHECK(d.graph.degree(d.vertex(Role::R(l))) == 1);
}

TEST_CASE("attachment table is reflection-safe and parity-consistent") {
    for (int m : {3, 4, 5, 6}) {
        std::vector<std::string> names;
        for (int l = 1; l <= m; ++l) names.push_back("R" + std::to_string(l));
        ReductionParams params(m, names);  // constructor validates
        for (const auto& role : params.all_roles()) {
            auto positions = params.attach_positions(role);
            CHECK_FALSE(positions.empty());
            for (int pos : positions)
                CHECK(pos % 2 == positions.front() % 2);  // one parity per role
        }
    }
    CHECK_THROWS_AS(ReductionParams(2, {"R1", "R2"}), Error);
}

TEST_CASE("base predicates on the ruler gadget") {
    RulerGadget c = ruler_gadget(3);
    ReductionFormulas formulas(params3());
    Evaluator ev(c.graph);

    auto deg1 = formulas.degree_one("x");
    CHECK(ev.evaluate(deg1, {{"x", c.pendant_vertex(5)}}));
    CHECK_FALSE(ev.evaluate(deg1, {{"x", c.line_vertex(5)}}));

    auto line = formulas.line_vertex("x");
    for (int i = 1; i <= 13; ++i) {
        CHECK(ev.evaluate(line, {{"x", c.line_vertex(i)}}));
        CHECK_FALSE(ev.evaluate(line, {{"x", c.pendant_vertex(i)}}));
    }

    auto end = formulas.line_end("x");
    for (int i = 1; i <= 13; ++i) {
        bool expected = i == 1 || i == 13;
        CHECK(ev.evaluate(end, {{"x", c.line_vertex(i)}}) == expected);
        CHECK_FALSE(ev.evaluate(end, {{"x", c.pendant_vertex(i)}}));
    }
}

TEST_CASE("line vertex formula requires a unique pendant") {
    Graph g(6);
    g.add_edge(2, 3);
    g.add_edge(2, 4);  // two pendants on vertex 2
    g.add_edge(2, 1);
    g.add_edge(1, 5);
    g.add_edge(5, 6);  // one pendant on vertex 5
    ReductionFormulas formulas(params3());
    Evaluator ev(g);
    CHECK_FALSE(ev.evaluate(formulas.line_vertex("x"), {{"x", 2}}));
    CHECK(ev.evaluate(formulas.line_vertex("x"), {{"x", 5}}));
    CHECK_FALSE(ev.evaluate(formulas.line_vertex("x"), {{"x", 1}}));
}

TEST_CASE("distance formulas: identity and full length on the ruler") {
    RulerGadget c = ruler_gadget(3);
    ReductionFormulas formulas(params3());
    Evaluator ev(c.graph);
    using Mode = ReductionFormulas::DistMode;

    auto ex0 = formulas.line_distance(0, Mode::Exactly, "x", "y");
    CHECK(ev.evaluate(ex0, {{"x", c.line_vertex(3)}, {"y", c.line_vertex(3)}}));
    CHECK_FALSE(ev.evaluate(ex0, {{"x", c.line_vertex(3)}, {"y", c.line_vertex(4)}}));

    auto ex12 = formulas.line_distance(12, Mode::Exactly, "x", "y");
    CHECK(ev.evaluate(ex12, {{"x", c.line_vertex(1)}, {"y", c.line_vertex(13)}}));
    CHECK_FALSE(ev.evaluate(ex12, {{"x", c.line_vertex(1)}, {"y", c.line_vertex(12)}}));
}

TEST_CASE("distance formulas agree with a BFS oracle on random graphs") {
    ReductionFormulas formulas(params3());
    using Mode = ReductionFormulas::DistMode;
    std::mt19937_64 rng(20240902);
    for (int i = 0; i < 60; ++i) {
        int n = 4 + static_cast<int>(rng() % 7);
        Graph g = testing::random_graph(rng, n, 0.3);
        auto line = testing::line_set(g);
        Evaluator ev(g);
        for (int a = 1; a <= n; ++a)
            for (int b = 1; b <= n; ++b) {
                int d = testing::line_bfs_distance(g, line, a, b);
                for (int k = 0; k <= 4; ++k) {
                    bool expected = d >= 0 && d == k;
                    bool actual = ev.evaluate(formulas.line_distance(k, Mode::Exactly, "x", "y"),
                                              {{"x", a}, {"y", b}});
                    CAPTURE(n);
                    CAPTURE(a);
                    CAPTURE(b);
                    CAPTURE(k);
                    REQUIRE(actual == expected);
                    bool expected_atmost = d >= 0 && d <= k;
                    REQUIRE(ev.evaluate(formulas.line_distance(k, Mode::AtMost, "x", "y"),
                                        {{"x", a}, {"y", b}}) == expected_atmost);
                }
            }
    }
}

TEST_CASE("walk formulas agree with a reachability oracle") {
    ReductionFormulas formulas(params3());
    std::mt19937_64 rng(555);
    for (int i = 0; i < 40; ++i) {
        int n = 4 + static_cast<int>(rng() % 6);
        Graph g = testing::random_graph(rng, n, 0.35);
        auto line = testing::line_set(g);
        Evaluator ev(g);
        for (int a = 1; a <= n; ++a)
            for (int b = 1; b <= n; ++b)
                for (int k = 0; k <= 5; ++k) {
                    bool expected = testing::line_walk_reachable(g, line, a, b, k);
                    REQUIRE(ev.evaluate(formulas.line_walk(k, "x", "y"),
                                        {{"x", a}, {"y", b}}) == expected);
                }
    }
}

TEST_CASE("structural axioms hold on the ruler and fail on mutations") {
    ReductionFormulas formulas(params3());
    auto axioms = mk_and_all(formulas.structural_axioms());

    RulerGadget c = ruler_gadget(3);
    CHECK(evaluate(axioms, c.graph));

    // deleting a pendant edge shortens the recognized line
    Graph no_pendant = c.graph;
    no_pendant.remove_edge(c.line_vertex(1), c.pendant_vertex(1));
    CHECK_FALSE(evaluate(axioms, no_pendant));

    // a chord duplicates a BFS layer
    Graph chord = c.graph;
    chord.add_edge(c.line_vertex(2), c.line_vertex(4));
    CHECK_FALSE(evaluate(axioms, chord));

    // a ruler for smaller m has the wrong line length
    RulerGadget c2 = ruler_gadget(2);
    CHECK_FALSE(evaluate(axioms, c2.graph));
}

TEST_CASE("ruler recognition matches the graph-side oracle on mutated rulers") {
    // the axioms hold iff degree-1 and line vertices induce a ruler copy
    ReductionFormulas formulas(params3());
    auto axioms = mk_and_all(formulas.structural_axioms());
    std::mt19937_64 rng(909);
    RulerGadget base = ruler_gadget(3);

    auto graph_side = [&](const Graph& g) {
        auto line = testing::line_set(g);
        for (int v = 1; v <= g.size(); ++v)
            if (g.degree(v) == 1 && !line[g.neighbors(v)[0]]) return false;
        std::vector<int> line_vertices;
        for (int v = 1; v <= g.size(); ++v)
            if (line[v]) line_vertices.push_back(v);
        if (line_vertices.size() != 13) return false;
        int ends = 0, start = 0;
        for (int v : line_vertices) {
            int ldeg = 0;
            for (int w : g.neighbors(v)) ldeg += line[w] ? 1 : 0;
            if (ldeg == 1) {
                ++ends;
                start = v;
            } else if (ldeg != 2) {
                return false;
            }
        }
        if (ends != 2) return false;
        int prev = 0, cur = start, visited = 0;
        while (cur != 0) {
            ++visited;
            int next = 0;
            for (int w : g.neighbors(cur))
                if (line[w] && w != prev) next = w;
            prev = cur;
            cur = next;
        }
        return visited == 13;
    };

    int accepted = 0;
    for (int i = 0; i < 60; ++i) {
        Graph g = base.graph;
        int mutations = 1 + static_cast<int>(rng() % 2);
        for (int k = 0; k < mutations; ++k) {
            int a = 1 + static_cast<int>(rng() % g.size());
            int b = 1 + static_cast<int>(rng() % g.size());
            if (a != b) g.toggle_edge(a, b);
        }
        bool formula_side = evaluate(axioms, g);
        CAPTURE(i);
        REQUIRE(formula_side == graph_side(g));
        accepted += formula_side ? 1 : 0;
    }
    CHECK(accepted < 60);  // the mutations do hit failing cases
}

TEST_CASE("role markers pick out exactly the block vertices") {
    auto params = params3();
    ReductionFormulas formulas(params);
    Structure s = sample_structure();
    EncodedGraph enc = encode_structure(s, params);
    Evaluator ev(enc.graph);

    auto roles = params.all_roles();
    for (int element = 1; element <= 2; ++element) {
        for (const auto& role : roles) {
            int v = enc.classification.vertex_of(element, role, params);
            for (const auto& other : roles) {
                bool expected = other == role;
                CAPTURE(element);
                CAPTURE(role.name());
                CAPTURE(other.name());
                REQUIRE(ev.evaluate(formulas.role_marker(other, "x"), {{"x", v}}) == expected);
            }
        }
    }
}

TEST_CASE("every encoded vertex satisfies exactly one classification formula") {
    auto params = params3();
    ReductionFormulas formulas(params);
    Structure s = sample_structure();
    EncodedGraph enc = encode_structure(s, params);
    Evaluator ev(enc.graph);

    std::vector<FormulaPtr> markers = {formulas.degree_one("x"), formulas.line_vertex("x")};
    for (const auto& role : params.all_roles())
        markers.push_back(formulas.role_marker(role, "x"));

    for (int v = 1; v <= enc.graph.size(); ++v) {
        int holds = 0;
        for (const auto& marker : markers) holds += ev.evaluate(marker, {{"x", v}}) ? 1 : 0;
        CAPTURE(v);
        REQUIRE(holds == 1);
    }
}

TEST_CASE("a vertex attached to two adjacent line vertices has no role") {
    auto params = params3();
    RulerGadget c = ruler_gadget(3);
    Graph g(c.graph.size() + 1);
    for (const auto& [a, b] : c.graph.edges()) g.add_edge(a, b);
    int v = g.size();
    g.add_edge(v, c.line_vertex(2));
    g.add_edge(v, c.line_vertex(3));
    ReductionFormulas formulas(params);
    Evaluator ev(g);
    for (const auto& role : params.all_roles())
        CHECK_FALSE(ev.evaluate(formulas.role_marker(role, "x"), {{"x", v}}));
}

TEST_CASE("role pair formulas bridge through the block middle") {
    auto params = params3();
    ReductionFormulas formulas(params);
    Structure s = sample_structure();
    EncodedGraph enc = encode_structure(s, params);
    Evaluator ev(enc.graph);
    auto at = [&](int element, Role role) {
        return enc.classification.vertex_of(element, role, params);
    };

    auto ps = formulas.role_pair(Role::P(), Role::S(), "x", "y");
    CHECK(ev.evaluate(ps, {{"x", at(1, Role::P())}, {"y", at(1, Role::S())}}));
    CHECK_FALSE(ev.evaluate(ps, {{"x", at(1, Role::P())}, {"y", at(2, Role::S())}}));

    auto rq = formulas.role_pair(Role::R(1), Role::Q(), "x", "y");
    CHECK(ev.evaluate(rq, {{"x", at(1, Role::R(1))}, {"y", at(1, Role::Q())}}));

    CHECK_THROWS_AS(formulas.role_pair(Role::P(), Role::Q(), "x", "y"), Error);
}

TEST_CASE("block shape axiom holds on encodes and fails on block mutations") {
    auto params = params3();
    ReductionFormulas formulas(params);
    Structure s = sample_structure();
    EncodedGraph enc = encode_structure(s, params);
    auto shape = formulas.block_shape_axiom();
    CHECK(evaluate(shape, enc.graph));
    auto at = [&](int element, Role role) {
        return enc.classification.vertex_of(element, role, params);
    };

    // an extra Q-R edge inside one block
    Graph extra = enc.graph;
    extra.add_edge(at(1, Role::Q()), at(1, Role::R(1)));
    CHECK_FALSE(evaluate(shape, extra));

    // a missing Q-S edge
    Graph missing = enc.graph;
    missing.remove_edge(at(1, Role::Q()), at(1, Role::S()));
    CHECK_FALSE(evaluate(shape, missing));
}

TEST_CASE("same_block characterizes block membership") {
    auto params = params3();
    ReductionFormulas formulas(params);
    Structure s = sample_structure();
    EncodedGraph enc = encode_structure(s, params);
    Evaluator ev(enc.graph);
    auto at = [&](int element, Role role) {
        return enc.classification.vertex_of(element, role, params);
    };
    auto same = formulas.same_block("x", "y");

    for (int l = 1; l <= 3; ++l) {
        CHECK(ev.evaluate(same, {{"x", at(1, Role::S())}, {"y", at(1, Role::R(l))}}));
        CHECK_FALSE(ev.evaluate(same, {{"x", at(1, Role::S())}, {"y", at(2, Role::R(l))}}));
    }
    CHECK(ev.evaluate(same, {{"x", at(1, Role::P())}, {"y", at(1, Role::P())}}));
    CHECK(ev.evaluate(same, {{"x", at(2, Role::Q())}, {"y", at(2, Role::R(3))}}));
    CHECK_FALSE(ev.evaluate(same, {{"x", at(1, Role::P())}, {"y", at(2, Role::P())}}));
}

TEST_CASE("cross edge axiom allows only R-to-S block links") {
    auto params = params3();
    ReductionFormulas formulas(params);
    Structure s = sample_structure();
    EncodedGraph enc = encode_structure(s, params);
    auto cross = formulas.cross_edge_axiom();
    CHECK(evaluate(cross, enc.graph));
    auto at = [&](int element, Role role) {
        return enc.classification.vertex_of(element, role, params);
    };

    Graph bad = enc.graph;
    bad.add_edge(at(1, Role::P()), at(2, Role::P()));
    CHECK_FALSE(evaluate(cross, bad));

    // a structure with empty relations has no cross edges at all
    Structure empty(2, Vocabulary({"R1", "R2", "R3"}));
    EncodedGraph enc2 = encode_structure(empty, params);
    CHECK(evaluate(cross, enc2.graph));
}

TEST_CASE("encoding axioms: encodes, the bare ruler, and an isolated vertex") {
    auto params = params3();
    ReductionFormulas formulas(params);
    auto axioms = formulas.encoding_axioms();

    EncodedGraph enc = encode_structure(sample_structure(), params);
    CHECK(evaluate(axioms, enc.graph));

    RulerGadget c = ruler_gadget(3);
    CHECK(evaluate(axioms, c.graph));

    Graph isolated(c.graph.size() + 1);
    for (const auto& [a, b] : c.graph.edges()) isolated.add_edge(a, b);
    CHECK_FALSE(evaluate(axioms, isolated));
}

TEST_CASE("gadget exports") {
    RulerGadget c = ruler_gadget(3);
    std::string dot = gadget_dot(c);
    CHECK(dot.find("graph C {") != std::string::npos);
    CHECK(dot.find("label=\"u1\"") != std::string::npos);
    CHECK(dot.find("label=\"w13\"") != std::string::npos);

    ElementGadget d = element_gadget(3);
    std::string ddot = gadget_dot(d);
    CHECK(ddot.find("label=\"dP\"") != std::string::npos);
    CHECK(ddot.find("label=\"dR3\"") != std::string::npos);
    CHECK(gadget_text(d).find("vertices 6, edges 5") != std::string::npos);
}
