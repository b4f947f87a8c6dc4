#include <doctest.h>

#include "hasse/randexpr.hpp"

using namespace hasse;
using K = RandExpr::Kind;

TEST_CASE("parse: single base and within") {
    auto a = parse_rand_expr("A");
    CHECK(a.kind == K::Base);
    CHECK(a.name == "A");

    auto w = parse_rand_expr("Plot[Block]");
    REQUIRE(w.kind == K::Within);
    CHECK(w.children[0].name == "Plot");
    CHECK(w.children[1].name == "Block");
}

TEST_CASE("parse: postfix context binds to the whole chain") {
    auto e = parse_rand_expr("A^B[C]");
    REQUIRE(e.kind == K::Within);
    REQUIRE(e.children[0].kind == K::Combine);
    CHECK(e.children[0].children.size() == 2);
    CHECK(e.children[1].name == "C");
}

TEST_CASE("parse: braces group independent randomisation") {
    auto e = parse_rand_expr("{Bench ⊗ Lyr}[Soil]");
    REQUIRE(e.kind == K::Within);
    REQUIRE(e.children[0].kind == K::Independent);
    CHECK(e.children[0].children[0].name == "Bench");
    CHECK(e.children[0].children[1].name == "Lyr");
    CHECK(e.children[1].name == "Soil");
}

TEST_CASE("parse: ASCII forms for the unicode operators") {
    CHECK(parse_rand_expr("A (x) B") == parse_rand_expr("A ⊗ B"));
    CHECK(parse_rand_expr("A^B") == parse_rand_expr("A ∧ B"));
    CHECK(parse_rand_expr("X -> Y") == parse_rand_expr("X → Y"));
}

TEST_CASE("parse: alias and arrow labels") {
    auto e = parse_rand_expr("Leaf={Bench ⊗ Lyr}[Soil]");
    REQUIRE(e.kind == K::Alias);
    CHECK(e.name == "Leaf");
    CHECK(e.children[0].kind == K::Within);

    auto r = parse_rand_expr("Catal^Conc^Press^Temp → Run");
    REQUIRE(r.kind == K::Arrow);
    CHECK(r.children[0].kind == K::Combine);
    CHECK(r.children[0].children.size() == 4);
    CHECK(r.children[1].name == "Run");
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_rand_expr("A[B"), ParseError);   // unbalanced
    CHECK_THROWS_AS(parse_rand_expr("{A"), ParseError);
    CHECK_THROWS_AS(parse_rand_expr("A^"), ParseError);    // empty operand
    CHECK_THROWS_AS(parse_rand_expr(""), ParseError);
    CHECK_THROWS_AS(parse_rand_expr("A^B ⊗ C"), ParseError); // ambiguous mix
    CHECK_THROWS_AS(parse_rand_expr("A)B"), ParseError);
}

TEST_CASE("format/parse round-trip") {
    for (const char* s : {"A", "Plot[Block]", "A^B[C]", "{A ⊗ B}[C]", "A ⊗ {B[C]}",
                          "A[B ⊗ C]", "A ⊗ B ⊗ C", "Leaf={Bench ⊗ Lyr}[Soil]",
                          "Catal^Conc^Press^Temp → Run", "Soil^Treat"}) {
        auto tree = parse_rand_expr(s);
        auto text = format_rand_expr(tree);
        CHECK(parse_rand_expr(text) == tree);
    }
}

TEST_CASE("randomisation-nest sets: the eight supported forms") {
    auto fmt_all = [](const std::vector<RandExpr>& v) {
        std::vector<std::string> out;
        for (const auto& e : v) out.push_back(format_rand_expr(e));
        return out;
    };
    using V = std::vector<std::string>;
    CHECK(fmt_all(rand_nest_set(parse_rand_expr("A"))) == V{"Mean"});
    CHECK(fmt_all(rand_nest_set(parse_rand_expr("A^B"))) == V{"Mean", "A", "B"});
    CHECK(fmt_all(rand_nest_set(parse_rand_expr("A[B]"))) == V{"Mean", "B"});
    CHECK(fmt_all(rand_nest_set(parse_rand_expr("A ⊗ B"))) == V{"Mean", "A", "B"});
    CHECK(fmt_all(rand_nest_set(parse_rand_expr("{A ⊗ B}[C]"))) ==
          V{"Mean", "A[C]", "B[C]", "C"});
    CHECK(fmt_all(rand_nest_set(parse_rand_expr("A ⊗ {B[C]}"))) ==
          V{"Mean", "A ⊗ C", "B[C]", "A", "C"});
    CHECK(fmt_all(rand_nest_set(parse_rand_expr("A[B ⊗ C]"))) ==
          V{"Mean", "B ⊗ C", "B", "C"});
    CHECK(fmt_all(rand_nest_set(parse_rand_expr("A ⊗ B ⊗ C"))) ==
          V{"Mean", "A", "B", "C", "A ⊗ B", "A ⊗ C", "B ⊗ C"});
}

TEST_CASE("nest set strips a leading alias") {
    auto with_alias = rand_nest_set(parse_rand_expr("Leaf={A ⊗ B}[C]"));
    auto without = rand_nest_set(parse_rand_expr("{A ⊗ B}[C]"));
    CHECK(with_alias == without);
}

TEST_CASE("deeper nesting is rejected, not guessed") {
    CHECK_THROWS_AS(rand_nest_set(parse_rand_expr("A[B[C]]")), Error);
    CHECK_THROWS_AS(rand_nest_set(parse_rand_expr("A^B^C^D")), Error);
    CHECK_THROWS_AS(rand_nest_set(parse_rand_expr("A^B[C]")), Error); // combine under within
    CHECK_THROWS_AS(rand_nest_set(parse_rand_expr("{A ⊗ B}[C ⊗ D]")), Error);
}

TEST_CASE("base_names collects alias names too") {
    auto names = base_names(parse_rand_expr("Leaf={Bench ⊗ Lyr}[Soil]"));
    CHECK(names == std::vector<std::string>{"Leaf", "Bench", "Lyr", "Soil"});
}
