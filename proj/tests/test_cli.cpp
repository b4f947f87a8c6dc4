#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hasse/datasets.hpp"

using namespace hasse;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int status;
    std::string out;
};

CliResult cli(const std::string& args) {
    std::string cmd = std::string(HASSE_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
    int rc = pclose(pipe);
    return {WEXITSTATUS(rc), out};
}

fs::path sandbox() {
    auto dir = fs::temp_directory_path() / "hasse_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

} // namespace

TEST_CASE("cli: missing input exits nonzero and writes nothing") {
    auto dir = sandbox() / "missing";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto r = cli("layout " + (dir / "nosuch.csv").string() + " --out-dir " + dir.string() +
                 " --name x");
    CHECK(r.status != 0);
    CHECK(fs::is_empty(dir));
}

TEST_CASE("cli: layout writes requested formats and is byte-deterministic") {
    auto dir = sandbox() / "det";
    fs::remove_all(dir);
    cli("datasets export splitplot --out-dir " + dir.string());
    std::string base = "layout " + (dir / "splitplot.csv").string() + " --flags " +
                       (dir / "splitplot.flags").string() + " --out-dir " + dir.string() +
                       " --format both --name run1";
    CHECK(cli(base).status == 0);
    auto svg1 = slurp(dir / "run1.svg");
    auto dot1 = slurp(dir / "run1.dot");
    CHECK(cli(base).status == 0);
    CHECK(slurp(dir / "run1.svg") == svg1);
    CHECK(slurp(dir / "run1.dot") == dot1);
    CHECK(svg1.find("<svg") != std::string::npos);
    CHECK(dot1.find("digraph") != std::string::npos);
}

TEST_CASE("cli: defaults mirror the documented switches") {
    auto dir = sandbox() / "defaults";
    fs::remove_all(dir);
    cli("datasets export splitplot --out-dir " + dir.string());
    std::string in = (dir / "splitplot.csv").string() + " --flags " +
                     (dir / "splitplot.flags").string() + " --out-dir " + dir.string();
    auto r = cli("layout " + in + " --name d");
    CHECK(r.status == 0);
    // table-out defaults off, so stdout carries only the confound report
    CHECK(r.out.find("relationships between the factors") == std::string::npos);
    CHECK(r.out.find("confounded degrees of freedom") != std::string::npos);
    auto svg = slurp(dir / "d.svg");
    CHECK(svg.find("class=\"partial\"") != std::string::npos);   // show-partial on
    CHECK(svg.find("class=\"df\"") != std::string::npos);        // show-df on
    CHECK(svg.find("class=\"maxlevels\"") != std::string::npos); // max-levels on
    CHECK(svg.find("mediumblue") != std::string::npos);          // coloured by default

    auto r2 = cli("layout " + in + " --name d2 --no-partial --no-df --no-max-levels --bw");
    CHECK(r2.status == 0);
    auto svg2 = slurp(dir / "d2.svg");
    CHECK(svg2.find("class=\"partial\"") == std::string::npos);
    CHECK(svg2.find("class=\"df\"") == std::string::npos);
    CHECK(svg2.find("class=\"maxlevels\"") == std::string::npos);
    CHECK(svg2.find("mediumblue") == std::string::npos);
}

TEST_CASE("cli: disabling the confound check changes no other output") {
    auto dir = sandbox() / "conf";
    fs::remove_all(dir);
    cli("datasets export splitplot --out-dir " + dir.string());
    std::string in = (dir / "splitplot.csv").string() + " --flags " +
                     (dir / "splitplot.flags").string() + " --out-dir " + dir.string();
    auto with = cli("layout " + in + " --name a --table-out");
    auto without = cli("layout " + in + " --name b --table-out --no-confound-check");
    CHECK(with.status == 0);
    CHECK(without.status == 0);
    CHECK(slurp(dir / "a.svg") == slurp(dir / "b.svg"));
    // stdout with the check = stdout without it + the appended report
    CHECK(with.out.substr(0, without.out.size()) == without.out);
    CHECK(with.out.find("There are 6 confounded degrees of freedom") != std::string::npos);
    CHECK(without.out.find("confounded") == std::string::npos);
}

TEST_CASE("cli: factorial with --no-partial has no dotted edges") {
    auto dir = sandbox() / "fact";
    fs::remove_all(dir);
    cli("datasets export factorial --out-dir " + dir.string());
    auto r = cli("layout " + (dir / "factorial.csv").string() + " --out-dir " + dir.string() +
                 " --name f --no-partial");
    CHECK(r.status == 0);
    CHECK(slurp(dir / "f.svg").find("class=\"partial\"") == std::string::npos);
}

TEST_CASE("cli: objects prints the numbered list and writes the template") {
    auto dir = sandbox() / "objects";
    fs::remove_all(dir);
    cli("datasets export bibd --out-dir " + dir.string());
    auto r = cli("objects " + (dir / "bibd.csv").string() + " --plan-out " +
                 (dir / "plan.csv").string());
    CHECK(r.status == 0);
    CHECK(r.out.find("[1] Mean") != std::string::npos);
    CHECK(r.out.find("[4] Blocks^Varieties") != std::string::npos);
    CHECK(slurp(dir / "plan.csv") ==
          "structural_object,randomisation_object\n"
          "Mean,Mean\n"
          "Blocks,NULL\n"
          "Varieties,NULL\n"
          "Blocks^Varieties,NULL\n");
}

TEST_CASE("cli: full BIBD rls run with the paper's index arrow") {
    auto dir = sandbox() / "rls";
    fs::remove_all(dir);
    cli("datasets export bibd --out-dir " + dir.string());
    write(dir / "plan.csv",
          "structural_object,randomisation_object\nMean,Mean\nBlocks,Blocks\n"
          "Varieties,Varieties\nBlocks^Varieties,Plot[Block]\n");
    write(dir / "arrows.csv", "from,to\n3,4\n");
    auto r = cli("rls " + (dir / "bibd.csv").string() + " --plan " + (dir / "plan.csv").string() +
                 " --arrows " + (dir / "arrows.csv").string() +
                 " --table-out --equation-out --format both --out-dir " + dir.string() +
                 " --name w");
    CHECK(r.status == 0);
    CHECK(r.out.find("The suggested mixed model to be fitted is:") != std::string::npos);
    CHECK(r.out.find("Response ~ Blocks + Varieties + Blocks:Varieties") != std::string::npos);
    CHECK(r.out.find("Plot[Block]") != std::string::npos); // rls table header
    auto svg = slurp(dir / "w_rls.svg");
    size_t arrows = 0;
    for (size_t at = svg.find("class=\"arrow\""); at != std::string::npos;
         at = svg.find("class=\"arrow\"", at + 1))
        ++arrows;
    CHECK(arrows == 1);

    // upward index arrow is rejected before anything is written
    write(dir / "bad.csv", "from,to\n4,3\n");
    auto bad = cli("rls " + (dir / "bibd.csv").string() + " --plan " + (dir / "plan.csv").string() +
                   " --arrows " + (dir / "bad.csv").string() + " --out-dir " + dir.string() +
                   " --name broken");
    CHECK(bad.status != 0);
    CHECK_FALSE(fs::exists(dir / "broken_rls.svg"));
}

TEST_CASE("cli: suggest prints a proposal and leaves the plan file alone") {
    auto dir = sandbox() / "suggest";
    fs::remove_all(dir);
    cli("datasets export crossover --out-dir " + dir.string());
    write(dir / "arrows.csv", "from,to\nSequence,Subject\nTreatment,Period^Sequence\n");
    std::string planbody = "untouched";
    write(dir / "plan.csv", planbody);
    auto r = cli("rls " + (dir / "crossover.csv").string() + " --flags " +
                 (dir / "crossover.flags").string() + " --arrows " + (dir / "arrows.csv").string() +
                 " --suggest");
    CHECK(r.status == 0);
    CHECK(r.out.find("Period^Treatment,NULL") != std::string::npos); // rule 4 keeps it out
    CHECK(r.out.find("Subject,Subject") != std::string::npos);
    CHECK(slurp(dir / "plan.csv") == planbody);
}

TEST_CASE("cli: labels with ASCII operators come back as canonical unicode") {
    auto dir = sandbox() / "canon";
    fs::remove_all(dir);
    cli("datasets export splitplot --out-dir " + dir.string());
    write(dir / "plan.csv",
          "structural_object,randomisation_object\n"
          "Mean,Mean\nBench,Bench\nLyr,NULL\nSoil,Soil\nTreat,Treat\nBench^Lyr,NULL\n"
          "Bench^Soil,Plant[Bench]\nBench^Treat,NULL\nLyr^Soil,Lyr[Soil]\nLyr^Treat,NULL\n"
          "Soil^Treat,Soil^Treat\nBench^Lyr^Treat,NULL\n"
          "Bench^Lyr^Soil^Treat,\"Leaf={Bench (x) Lyr}[Soil]\"\n");
    auto r = cli("rls " + (dir / "splitplot.csv").string() + " --flags " +
                 (dir / "splitplot.flags").string() + " --plan " + (dir / "plan.csv").string() +
                 " --table-out --out-dir " + dir.string() + " --name c");
    CHECK(r.status == 0);
    CHECK(r.out.find("Leaf={Bench ⊗ Lyr}[Soil]") != std::string::npos);
    auto svg = slurp(dir / "c_rls.svg");
    CHECK(svg.find("Leaf={Bench ⊗ Lyr}[Soil]") != std::string::npos);
    // the five NULL rows leave an eight-node restricted structure
    size_t labels = 0;
    for (size_t at = svg.find("class=\"object-label\""); at != std::string::npos;
         at = svg.find("class=\"object-label\"", at + 1))
        ++labels;
    CHECK(labels == 8);
}

TEST_CASE("cli: layout --json exports the structure") {
    auto dir = sandbox() / "json";
    fs::remove_all(dir);
    cli("datasets export bibd --out-dir " + dir.string());
    auto r = cli("layout " + (dir / "bibd.csv").string() + " --out-dir " + dir.string() +
                 " --name j --json " + (dir / "j.json").string());
    CHECK(r.status == 0);
    auto js = slurp(dir / "j.json");
    CHECK(js.find("\"display_label\": \"Plots=Bl^Va\"") != std::string::npos);
    CHECK(js.find("\"cover_edges\"") != std::string::npos);
}

TEST_CASE("cli: datasets export round-trips through layout") {
    for (const auto& name : fixture_names()) {
        auto dir = sandbox() / ("ds_" + name);
        fs::remove_all(dir);
        auto r = cli("datasets export " + name + " --out-dir " + dir.string());
        CHECK(r.status == 0);
        auto run = cli("layout " + (dir / (name + ".csv")).string() + " --flags " +
                       (dir / (name + ".flags")).string() + " --out-dir " + dir.string() +
                       " --name t");
        CHECK(run.status == 0);
        CHECK(fs::exists(dir / "t.svg"));
    }
    CHECK(cli("datasets export nosuch").status != 0);
}
