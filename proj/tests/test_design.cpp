#include <doctest.h>

#include "hasse/datasets.hpp"
#include "hasse/design.hpp"

using namespace hasse;

TEST_CASE("load_design recodes levels in first-appearance order") {
    auto t = load_design("A,B\nx,1\ny,2\nx,3\n");
    REQUIRE(t.n_units == 3);
    REQUIRE(t.n_factors() == 2);
    CHECK(t.factors[0].levels == std::vector<std::string>{"x", "y"});
    CHECK(t.cell(0, 0) == 0);
    CHECK(t.cell(1, 0) == 1);
    CHECK(t.cell(2, 0) == 0);
    CHECK(t.factors[1].levels.size() == 3);
    CHECK_FALSE(t.factors[0].is_random);
}

TEST_CASE("load_design minimal one-column design") {
    auto t = load_design("F\na\n");
    CHECK(t.n_units == 1);
    CHECK(t.factors[0].levels.size() == 1);
}

TEST_CASE("load_design split-plot fixture shape") {
    auto fx = splitplot_design();
    const auto& t = fx.table;
    REQUIRE(t.n_units == 36);
    REQUIRE(t.n_factors() == 6);
    CHECK(t.factors[0].levels.size() == 3);  // Bench
    CHECK(t.factors[1].levels.size() == 12); // Plant
    CHECK(t.factors[2].levels.size() == 3);  // Lyr
    CHECK(t.factors[3].levels.size() == 4);  // Soil
    CHECK(t.factors[4].levels.size() == 3);  // Treat
    CHECK(t.factors[5].levels.size() == 36); // Leaf
}

TEST_CASE("load_design error paths") {
    CHECK_THROWS_AS(load_design("A,B\n1\n"), Error);           // ragged
    CHECK_THROWS_AS(load_design("A,A\n1,2\n"), Error);         // duplicate names
    CHECK_THROWS_AS(load_design("A,B\n"), Error);              // empty body
    CHECK_THROWS_AS(load_design("A,B\n1,\n"), Error);          // missing cell
    std::vector<bool> flags{true};
    CHECK_THROWS_AS(load_design("A,B\n1,2\n", flags), Error);  // flags length
}

TEST_CASE("level labels are trimmed but otherwise exact") {
    auto t = load_design("A\n 1 \n01\n1\n");
    CHECK(t.factors[0].levels == std::vector<std::string>{"1", "01"});
    CHECK(t.cell(0, 0) == t.cell(2, 0));
}

TEST_CASE("quoted CSV fields") {
    auto t = load_design("A,B\n\"x, y\",\"say \"\"hi\"\"\"\n");
    CHECK(t.factors[0].levels[0] == "x, y");
    CHECK(t.factors[1].levels[0] == "say \"hi\"");
}

TEST_CASE("partition_of basics") {
    auto t = load_design("A,B\n1,1\n1,2\n2,1\n2,2\n");
    CHECK(partition_of(t, {}).n_classes == 1);
    CHECK(partition_of(t, {0}).n_classes == 2);
    CHECK(partition_of(t, {0, 1}).n_classes == 4);
    CHECK_THROWS_AS(partition_of(t, {7}), Error);
}

TEST_CASE("partition_of matches the paper's split-plot counts") {
    auto t = splitplot_design().table;
    CHECK(partition_of(t, {0, 3}).n_classes == 12); // Bench^Soil
    CHECK(partition_of(t, {0, 2, 4}).n_classes == 19); // Bench^Lyr^Treat
    CHECK(partition_of(t, {3}).n_classes == 4);
}

TEST_CASE("partition_of is monotone in the subset") {
    auto t = crossover_design().table;
    auto p1 = partition_of(t, {0});
    auto p2 = partition_of(t, {0, 2});
    CHECK(p2.n_classes >= p1.n_classes);
    // finer partition refines the coarser
    std::vector<int> img(p2.n_classes, -1);
    bool ok = true;
    for (int u = 0; u < t.n_units; ++u) {
        int c = p2.class_of[u];
        if (img[c] == -1) img[c] = p1.class_of[u];
        ok = ok && img[c] == p1.class_of[u];
    }
    CHECK(ok);
}

TEST_CASE("recoding invariance: permuting level labels keeps partitions") {
    auto a = load_design("A\nx\ny\nx\nz\n");
    auto b = load_design("A\nq\nw\nq\ne\n");
    CHECK(partition_of(a, {0}) == partition_of(b, {0}));
}

TEST_CASE("check_design diagnostics") {
    auto run_warns = [](const DesignTable& t, const std::string& needle) {
        for (const auto& d : check_design(t))
            if (d.message.find(needle) != std::string::npos) return true;
        return false;
    };
    auto fx = factorial_2p4().table;
    CHECK(run_warns(fx, "'Run'"));
    CHECK(run_warns(fx, "observational-unit"));

    auto constant = load_design("A,K\n1,c\n2,c\n");
    CHECK(run_warns(constant, "single level"));

    auto twins = load_design("A,B\n1,x\n2,y\n1,x\n");
    CHECK(run_warns(twins, "identical"));

    auto sp = splitplot_design().table;
    bool single = false;
    for (const auto& d : check_design(sp))
        single = single || d.message.find("single level") != std::string::npos;
    CHECK_FALSE(single);
}
