#include "hasse/layout.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hasse {

std::string abbreviate(const std::string& name) {
    // first two code points, not bytes
    size_t i = 0;
    int taken = 0;
    while (i < name.size() && taken < 2) {
        size_t step = 1;
        unsigned char c = static_cast<unsigned char>(name[i]);
        if (c >= 0xF0)
            step = 4;
        else if (c >= 0xE0)
            step = 3;
        else if (c >= 0xC0)
            step = 2;
        i = std::min(name.size(), i + step);
        ++taken;
    }
    return name.substr(0, i);
}

const StructuralObject* LayoutStructure::find_object(const Partition& p) const {
    for (const auto& o : objects)
        if (o.partition == p) return &o;
    return nullptr;
}

std::string LayoutStructure::relation_entry(int row, int col) const {
    if (row == col) return " ";
    if (strictly_finer[row][col]) return "1";
    auto rel = classify(objects[row].partition, objects[col].partition);
    return rel == Relationship::FullyCrossed ? "0" : "(0)";
}

namespace {

std::string join_names(const DesignTable& t, const std::vector<int>& fs, const char* sep,
                       bool abbrev) {
    std::string out;
    for (size_t i = 0; i < fs.size(); ++i) {
        if (i) out += sep;
        out += abbrev ? abbreviate(t.factors[fs[i]].name) : t.factors[fs[i]].name;
    }
    return out;
}

std::string make_display_label(const DesignTable& t, const StructuralObject& o) {
    if (o.factor_set.empty()) return "Mean";
    std::vector<int> carriers = o.carriers;
    std::sort(carriers.begin(), carriers.end(),
              [&](int a, int b) { return t.factors[a].name < t.factors[b].name; });
    if (o.factor_set.size() == 1) {
        std::string out = t.factors[o.factor_set[0]].name;
        for (int c : carriers) out += "=" + t.factors[c].name;
        return out;
    }
    std::string out;
    for (int c : carriers) out += t.factors[c].name + "=";
    out += join_names(t, o.factor_set, "^", true);
    return out;
}

} // namespace

LayoutStructure build_layout_structure(const DesignTable& table, const LayoutOptions& opts) {
    const int k = table.n_factors();
    if (k > opts.max_factors)
        throw Error("design has " + std::to_string(k) + " factors, above the enumeration cap of " +
                    std::to_string(opts.max_factors));

    LayoutStructure ls;
    ls.table = table;

    std::vector<Partition> fpart(k);
    for (int f = 0; f < k; ++f) fpart[f] = partition_of(table, {f});

    // A factor already reproducible from its strictly-coarser factors carries a
    // name for an existing generalised factor instead of generating subsets.
    std::vector<bool> redundant(k, false);
    for (int f = 0; f < k; ++f) {
        std::vector<int> coarser;
        for (int g = 0; g < k; ++g)
            if (g != f && fpart[f] != fpart[g] && refines(fpart[f], fpart[g]))
                coarser.push_back(g);
        redundant[f] = partition_of(table, coarser) == fpart[f];
    }

    std::vector<int> gens;
    for (int f = 0; f < k; ++f)
        if (!redundant[f]) gens.push_back(f);
    std::sort(gens.begin(), gens.end(),
              [&](int a, int b) { return table.factors[a].name < table.factors[b].name; });
    const int ng = static_cast<int>(gens.size());

    std::vector<std::vector<bool>> comparable(ng, std::vector<bool>(ng, false));
    for (int a = 0; a < ng; ++a)
        for (int b = 0; b < ng; ++b)
            if (a != b)
                comparable[a][b] =
                    refines(fpart[gens[a]], fpart[gens[b]]) || refines(fpart[gens[b]], fpart[gens[a]]);

    // Enumerate antichain subsets of the generators in (size, lex) order;
    // equivalent subsets collapse onto their union.
    struct Entry {
        std::vector<int> subset; // generator positions
        Partition part;
    };
    std::vector<Entry> classes; // one per distinct partition; subset = running union
    classes.push_back({{}, partition_of(table, {})});

    std::vector<int> combo;
    auto visit = [&](const std::vector<int>& pos) {
        std::vector<int> fsubset;
        for (int p : pos) fsubset.push_back(gens[p]);
        Partition part = partition_of(table, fsubset);
        for (auto& e : classes) {
            if (e.part == part) {
                std::vector<int> u;
                std::set_union(e.subset.begin(), e.subset.end(), pos.begin(), pos.end(),
                               std::back_inserter(u));
                e.subset = std::move(u);
                return;
            }
        }
        classes.push_back({pos, std::move(part)});
    };
    // iterative combinations by size
    for (int size = 1; size <= ng; ++size) {
        combo.assign(size, 0);
        std::iota(combo.begin(), combo.end(), 0);
        while (true) {
            bool antichain = true;
            for (int i = 0; i < size && antichain; ++i)
                for (int j = i + 1; j < size; ++j)
                    if (comparable[combo[i]][combo[j]]) {
                        antichain = false;
                        break;
                    }
            if (antichain) visit(combo);
            int i = size - 1;
            while (i >= 0 && combo[i] == ng - size + i) --i;
            if (i < 0) break;
            ++combo[i];
            for (int j = i + 1; j < size; ++j) combo[j] = combo[j - 1] + 1;
        }
    }

    std::stable_sort(classes.begin(), classes.end(), [](const Entry& a, const Entry& b) {
        if (a.subset.size() != b.subset.size()) return a.subset.size() < b.subset.size();
        return a.subset < b.subset;
    });

    for (auto& e : classes) {
        StructuralObject o;
        o.id = static_cast<int>(ls.objects.size());
        for (int p : e.subset) o.factor_set.push_back(gens[p]);
        o.partition = std::move(e.part);
        o.n_levels = o.partition.n_classes;
        ls.objects.push_back(std::move(o));
    }

    // attach redundant factors to the object sharing their partition
    for (int f = 0; f < k; ++f) {
        if (!redundant[f]) continue;
        bool placed = false;
        for (auto& o : ls.objects)
            if (o.partition == fpart[f]) {
                o.carriers.push_back(f);
                placed = true;
                break;
            }
        if (!placed)
            throw Error("internal: no structural object for factor '" + table.factors[f].name + "'");
    }

    const int n = ls.n_objects();
    for (auto& o : ls.objects) {
        o.name = o.factor_set.empty() ? "Mean" : join_names(table, o.factor_set, "^", false);
        o.display_label = make_display_label(table, o);
        if (o.order() >= 2) {
            long long prod = 1;
            for (int f : o.factor_set) prod *= static_cast<long long>(table.factors[f].levels.size());
            o.potential_max_levels = prod;
        }
        bool rnd = false;
        for (int f : o.factor_set) rnd = rnd || table.factors[f].is_random;
        for (int f : o.carriers) rnd = rnd || table.factors[f].is_random;
        o.is_random = rnd;
    }

    // a fixed factor merged into a random object is reclassified
    for (int f = 0; f < k; ++f) {
        if (table.factors[f].is_random) continue;
        for (const auto& o : ls.objects) {
            if (o.partition == fpart[f] && o.is_random) {
                ls.diagnostics.push_back(
                    {"factor '" + table.factors[f].name +
                     "' was defined as fixed but is equivalent to a generalised factor containing "
                     "random factors; it is declared random"});
                break;
            }
        }
    }

    ls.strictly_finer.assign(n, std::vector<bool>(n, false));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b && refines(ls.objects[a].partition, ls.objects[b].partition))
                ls.strictly_finer[a][b] = true;

    // transitive reduction; the strict order has no cycles so the triple test suffices
    for (int b = 0; b < n; ++b)
        for (int a = 0; a < n; ++a) {
            if (!ls.strictly_finer[a][b]) continue;
            bool direct = true;
            for (int m = 0; m < n && direct; ++m)
                if (ls.strictly_finer[a][m] && ls.strictly_finer[m][b]) direct = false;
            if (direct) ls.cover_edges.emplace_back(b, a);
        }
    std::sort(ls.cover_edges.begin(), ls.cover_edges.end());

    ls.finest_id = -1;
    for (int a = 0; a < n; ++a) {
        bool all = true;
        for (int b = 0; b < n; ++b)
            if (b != a && !ls.strictly_finer[a][b]) all = false;
        if (all) {
            ls.finest_id = a;
            break;
        }
    }
    if (ls.finest_id < 0) throw Error("internal: refinement order has no unique finest object");

    // subtraction method, evaluated coarse to fine
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return ls.objects[a].partition.n_classes < ls.objects[b].partition.n_classes;
    });
    for (int idx : order) {
        int df = ls.objects[idx].n_levels;
        for (int b = 0; b < n; ++b)
            if (ls.strictly_finer[idx][b]) df -= ls.objects[b].df;
        ls.objects[idx].df = df;
    }

    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& [coarse, fine] : ls.cover_edges)
            if (ls.objects[fine].tier < ls.objects[coarse].tier + 1) {
                ls.objects[fine].tier = ls.objects[coarse].tier + 1;
                changed = true;
            }
    }
    return ls;
}

std::string relation_table(const LayoutStructure& ls) {
    const int n = ls.n_objects();
    std::vector<std::string> rows(n), headers(n);
    std::vector<std::vector<std::string>> cells(n, std::vector<std::string>(n));
    for (int i = 0; i < n; ++i) {
        rows[i] = ls.objects[i].name;
        headers[i] = ls.objects[i].display_label;
        for (int j = 0; j < n; ++j) cells[i][j] = "\"" + ls.relation_entry(i, j) + "\"";
    }
    size_t wname = 0;
    for (auto& r : rows) wname = std::max(wname, r.size());
    std::vector<size_t> w(n);
    for (int j = 0; j < n; ++j) {
        w[j] = headers[j].size();
        for (int i = 0; i < n; ++i) w[j] = std::max(w[j], cells[i][j].size());
    }
    std::ostringstream out;
    out << "The following table shows the relationships between the factors and generalised "
           "factors in the Layout Structure\n";
    out << std::string(wname + 1, ' ');
    for (int j = 0; j < n; ++j) {
        out << headers[j] << std::string(w[j] - headers[j].size(), ' ');
        if (j + 1 < n) out << ' ';
    }
    out << '\n';
    for (int i = 0; i < n; ++i) {
        out << rows[i] << std::string(wname - rows[i].size() + 1, ' ');
        for (int j = 0; j < n; ++j) {
            out << cells[i][j] << std::string(w[j] - cells[i][j].size(), ' ');
            if (j + 1 < n) out << ' ';
        }
        out << '\n';
    }
    return out.str();
}

std::string layout_to_json(const LayoutStructure& ls) {
    nlohmann::ordered_json j;
    j["objects"] = nlohmann::ordered_json::array();
    for (const auto& o : ls.objects) {
        nlohmann::ordered_json jo;
        jo["id"] = o.id + 1;
        jo["name"] = o.name;
        jo["display_label"] = o.display_label;
        auto names = nlohmann::ordered_json::array();
        for (int f : o.factor_set) names.push_back(ls.table.factors[f].name);
        jo["factors"] = names;
        auto cs = nlohmann::ordered_json::array();
        for (int f : o.carriers) cs.push_back(ls.table.factors[f].name);
        jo["carriers"] = cs;
        jo["levels"] = o.n_levels;
        if (o.order() >= 2)
            jo["potential_max_levels"] = o.potential_max_levels;
        else
            jo["potential_max_levels"] = nullptr;
        jo["random"] = o.is_random;
        jo["df"] = o.df;
        jo["tier"] = o.tier;
        j["objects"].push_back(std::move(jo));
    }
    j["cover_edges"] = nlohmann::ordered_json::array();
    for (auto& [a, b] : ls.cover_edges) j["cover_edges"].push_back({a + 1, b + 1});
    j["relation_matrix"] = nlohmann::ordered_json::array();
    for (int i = 0; i < ls.n_objects(); ++i) {
        auto row = nlohmann::ordered_json::array();
        for (int jj = 0; jj < ls.n_objects(); ++jj) row.push_back(ls.relation_entry(i, jj));
        j["relation_matrix"].push_back(std::move(row));
    }
    j["diagnostics"] = nlohmann::ordered_json::array();
    for (const auto& d : ls.diagnostics) j["diagnostics"].push_back(d.message);
    return j.dump(2) + "\n";
}

} // namespace hasse
