#include "hasse/datasets.hpp"

#include <array>
#include <sstream>

namespace hasse {

namespace {

DesignTable from_columns(const std::vector<std::string>& names,
                         const std::vector<std::vector<std::string>>& columns,
                         const std::vector<bool>& random_flags) {
    std::ostringstream csv;
    for (size_t f = 0; f < names.size(); ++f) csv << (f ? "," : "") << names[f];
    csv << "\n";
    for (size_t u = 0; u < columns[0].size(); ++u) {
        for (size_t f = 0; f < names.size(); ++f) csv << (f ? "," : "") << columns[f][u];
        csv << "\n";
    }
    return load_design(csv.str(), random_flags);
}

} // namespace

FixtureDesign splitplot_design() {
    static const int bench[36] = {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2,
                                  2, 2, 2, 2, 2, 2, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3};
    static const int plant[36] = {1, 1, 1, 2, 2, 2, 3, 3, 3, 4,  4,  4,  5,  5,  5,  6,  6,  6,
                                  7, 7, 7, 8, 8, 8, 9, 9, 9, 10, 10, 10, 11, 11, 11, 12, 12, 12};
    static const char* lyr3[3] = {"Top", "Middle", "Bottom"};
    static const int soil[36] = {3, 3, 3, 2, 2, 2, 1, 1, 1, 0, 0, 0, 0, 0, 0, 2, 2, 2,
                                 1, 1, 1, 3, 3, 3, 3, 3, 3, 0, 0, 0, 2, 2, 2, 1, 1, 1};
    static const int treat[36] = {2, 0, 1, 1, 0, 2, 0, 1, 2, 1, 0, 2, 0, 2, 1, 0, 2, 1,
                                  1, 2, 0, 1, 2, 0, 0, 1, 2, 2, 1, 0, 2, 1, 0, 2, 0, 1};
    std::vector<std::vector<std::string>> cols(6);
    for (int u = 0; u < 36; ++u) {
        cols[0].push_back(std::to_string(bench[u]));
        cols[1].push_back(std::to_string(plant[u]));
        cols[2].push_back(lyr3[u % 3]);
        cols[3].push_back(std::to_string(soil[u]));
        cols[4].push_back(std::to_string(treat[u]));
        cols[5].push_back(std::to_string(u + 1));
    }
    return {"splitplot",
            from_columns({"Bench", "Plant", "Lyr", "Soil", "Treat", "Leaf"}, cols,
                         {true, true, true, false, false, true}),
            "full split-plot in a row-column design, 36 leaves on 12 plants over 3 benches"};
}

FixtureDesign factorial_2p4() {
    static const char* cat[2] = {"10", "15"};
    static const char* temp[2] = {"220", "240"};
    static const char* press[2] = {"50", "80"};
    static const char* conc[2] = {"10", "12"};
    std::vector<std::vector<std::string>> cols(5);
    int run = 1;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) {
                    cols[0].push_back(cat[a]);
                    cols[1].push_back(temp[b]);
                    cols[2].push_back(press[c]);
                    cols[3].push_back(conc[d]);
                    cols[4].push_back(std::to_string(run++));
                }
    return {"factorial",
            from_columns({"Catalyst", "Temperature", "Pressure", "Concentration", "Run"}, cols,
                         {false, false, false, false, false}),
            "single replicate of a 2^4 process-development factorial, 16 runs"};
}

FixtureDesign bibd_6_10_3() {
    // 2-(6,3,2) design: every variety in 5 blocks, every pair together twice
    static const std::array<std::array<int, 3>, 10> blocks = {{{1, 2, 3},
                                                               {1, 2, 4},
                                                               {1, 3, 5},
                                                               {1, 4, 6},
                                                               {1, 5, 6},
                                                               {2, 3, 6},
                                                               {2, 4, 5},
                                                               {2, 5, 6},
                                                               {3, 4, 5},
                                                               {3, 4, 6}}};
    std::vector<std::vector<std::string>> cols(3);
    int plot = 1;
    for (size_t b = 0; b < blocks.size(); ++b)
        for (int v : blocks[b]) {
            cols[0].push_back(std::to_string(b + 1));
            cols[1].push_back(std::to_string(v));
            cols[2].push_back(std::to_string(plot++));
        }
    return {"bibd",
            from_columns({"Blocks", "Varieties", "Plots"}, cols, {false, false, false}),
            "wheat-variety BIBD: 6 varieties in 10 blocks of 3 plots"};
}

FixtureDesign crossover_design() {
    // all six treatment orders; every ordered carry-over pair occurs twice
    static const std::array<std::array<const char*, 3>, 6> seqs = {{
        {"CHX1", "CHX2", "saline"},
        {"CHX2", "saline", "CHX1"},
        {"saline", "CHX1", "CHX2"},
        {"saline", "CHX2", "CHX1"},
        {"CHX2", "CHX1", "saline"},
        {"CHX1", "saline", "CHX2"},
    }};
    std::vector<std::vector<std::string>> cols(5);
    int obs = 1;
    for (int subject = 1; subject <= 24; ++subject) {
        int seq = (subject - 1) / 4;
        for (int period = 1; period <= 3; ++period) {
            cols[0].push_back(std::to_string(seq + 1));
            cols[1].push_back(std::to_string(subject));
            cols[2].push_back(std::to_string(period));
            cols[3].push_back(seqs[seq][period - 1]);
            cols[4].push_back(std::to_string(obs++));
        }
    }
    return {"crossover",
            from_columns({"Sequence", "Subject", "Period", "Treatment", "Observation"}, cols,
                         {false, true, false, false, false}),
            "dental-rinse crossover: 24 subjects, 6 Williams sequences, 3 periods"};
}

std::vector<std::string> fixture_names() { return {"splitplot", "factorial", "bibd", "crossover"}; }

FixtureDesign fixture_by_name(const std::string& name) {
    if (name == "splitplot") return splitplot_design();
    if (name == "factorial") return factorial_2p4();
    if (name == "bibd") return bibd_6_10_3();
    if (name == "crossover") return crossover_design();
    throw Error("unknown dataset '" + name + "' (available: splitplot, factorial, bibd, crossover)");
}

std::string design_csv(const DesignTable& table) {
    std::ostringstream out;
    for (int f = 0; f < table.n_factors(); ++f) out << (f ? "," : "") << table.factors[f].name;
    out << "\n";
    for (int u = 0; u < table.n_units; ++u) {
        for (int f = 0; f < table.n_factors(); ++f)
            out << (f ? "," : "") << table.factors[f].levels[table.cell(u, f)];
        out << "\n";
    }
    return out.str();
}

std::string flags_sidecar(const DesignTable& table) {
    std::ostringstream out;
    for (const auto& f : table.factors) out << f.name << "=" << (f.is_random ? 1 : 0) << "\n";
    return out.str();
}

std::vector<bool> parse_flags_sidecar(const DesignTable& table, std::string_view text) {
    std::vector<bool> flags(table.n_factors(), false);
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("flags line " + std::to_string(lineno) + ": expected name=0|1");
        std::string name = line.substr(0, eq), val = line.substr(eq + 1);
        int f = -1;
        for (int g = 0; g < table.n_factors(); ++g)
            if (table.factors[g].name == name) f = g;
        if (f < 0) throw Error("flags line " + std::to_string(lineno) + ": unknown factor '" + name + "'");
        if (val != "0" && val != "1")
            throw Error("flags line " + std::to_string(lineno) + ": value must be 0 or 1");
        flags[f] = val == "1";
    }
    return flags;
}

} // namespace hasse
