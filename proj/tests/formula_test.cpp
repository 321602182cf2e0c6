#include <doctest.h>

#include "spectra/parse.hpp"
#include "support/generators.hpp"

using namespace spectra;

TEST_CASE("parse builds the expected trees") {
    Vocabulary vocab({"R1"});

    auto f = parse_formula("exists x. exists y. ~(x = y)", vocab);
    CHECK(f->kind == Kind::Exists);
    CHECK(f->var1 == "x");
    CHECK(f->left->kind == Kind::Exists);
    CHECK(f->left->left->kind == Kind::Not);
    CHECK(f->left->left->left->kind == Kind::Equality);

    auto g = parse_formula("R1(x,y) & R1(y,x)", vocab);
    CHECK(g->kind == Kind::And);
    CHECK(g->left->rel == "R1");
    CHECK(g->left->var1 == "x");
    CHECK(g->right->var1 == "y");
}

TEST_CASE("parse rejects unknown symbols and bad arity") {
    Vocabulary vocab({"R1"});
    CHECK_THROWS_WITH_AS(parse_formula("R9(x,y)", vocab),
                         doctest::Contains("unknown relation symbol"), ParseError);
    CHECK_THROWS_AS(parse_formula("R1(x)", vocab), ParseError);
    CHECK_THROWS_AS(parse_formula("R1(x,y,z)", vocab), ParseError);
    CHECK_THROWS_AS(parse_formula("exists R1. true", vocab), ParseError);
    CHECK_THROWS_AS(parse_formula("R1(x,y) &", vocab), ParseError);
}

TEST_CASE("parse errors carry positions") {
    Vocabulary vocab({"R1"});
    try {
        parse_formula("R1(x,y) &\n R9(x,y)", vocab);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.column == 2);
    }
}

TEST_CASE("print round-trips simple formulas") {
    Vocabulary vocab({"R1", "R2"});
    auto f = mk_eq("x", "x");
    CHECK(print_formula(f) == "x = x");
    CHECK(structurally_equal(parse_formula(print_formula(f), vocab), f));

    // binding order is preserved
    auto nested = parse_formula("exists x. forall y. R1(x,y)", vocab);
    CHECK(structurally_equal(parse_formula(print_formula(nested), vocab), nested));

    // precedence is made unambiguous
    auto mixed = mk_or(mk_and(mk_atom("R1", "x", "y"), mk_atom("R2", "x", "y")),
                       mk_not(mk_eq("x", "y")));
    CHECK(structurally_equal(parse_formula(print_formula(mixed), vocab), mixed));
}

TEST_CASE("print/parse round-trip holds on random formulas") {
    Vocabulary vocab({"R1", "R2"});
    testing::FormulaGen gen(20240901, {"R1", "R2"}, {"x", "y", "z"});
    for (int i = 0; i < 300; ++i) {
        auto f = gen.formula(5);
        auto back = parse_formula(print_formula(f), vocab);
        CAPTURE(print_formula(f));
        REQUIRE(structurally_equal(back, f));
    }
}

TEST_CASE("variables_used reports first-occurrence order") {
    Vocabulary vocab({"R"});
    auto f = parse_formula("exists x. exists y. R(x,y)", vocab);
    CHECK(variables_used(f) == std::vector<std::string>{"x", "y"});

    auto reuse = parse_formula("exists x. (R(x,x) & exists x. R(x,x))", vocab);
    CHECK(variables_used(reuse) == std::vector<std::string>{"x"});
}

TEST_CASE("free_variables") {
    auto atom = mk_atom("R", "x", "y");
    CHECK(free_variables(atom) == std::set<std::string>{"x", "y"});
    CHECK(free_variables(mk_exists("x", atom)) == std::set<std::string>{"y"});
    CHECK(free_variables(mk_forall("y", mk_exists("x", atom))).empty());
    CHECK(variables_used(mk_exists("x", atom)).size() >= free_variables(mk_exists("x", atom)).size());
}

TEST_CASE("validate_input flags the reduction preconditions") {
    Vocabulary vocab({"R1", "R2", "R3"});
    auto good = parse_formula("forall x. forall y. forall z. true", vocab);
    auto report = validate_input(good, vocab);
    CHECK(report.eligible);
    CHECK(report.is_sentence);
    CHECK(report.variable_count == 3);
    CHECK(report.relation_count == 3);

    auto two_var = parse_formula("forall x. forall y. R1(x,y)", vocab);
    auto r2 = validate_input(two_var, vocab);
    CHECK_FALSE(r2.eligible);
    CHECK(r2.variable_count == 2);
    REQUIRE(r2.issues.size() == 1);
    CHECK(r2.issues[0] == "k < 3");

    auto open = mk_atom("R1", "x", "y");
    auto r3 = validate_input(open, vocab);
    CHECK_FALSE(r3.is_sentence);
    CHECK_FALSE(r3.eligible);
}

TEST_CASE("fo document round-trip") {
    auto doc = parse_fo_document("# comment\nvocab R1 R2\nforall x. forall y. R1(x,y)\n");
    CHECK(doc.vocab.size() == 2);
    auto text = render_fo_document(doc.vocab, doc.formula);
    auto again = parse_fo_document(text);
    CHECK(structurally_equal(again.formula, doc.formula));
}
