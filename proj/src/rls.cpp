#include "hasse/rls.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace hasse {

bool RestrictedLayoutStructure::contains(int object_id) const {
    return std::binary_search(included.begin(), included.end(), object_id);
}

const std::string& RestrictedLayoutStructure::label_of(int object_id) const {
    auto it = std::lower_bound(included.begin(), included.end(), object_id);
    if (it == included.end() || *it != object_id)
        throw Error("object " + std::to_string(object_id + 1) + " is not in the restricted layout");
    return labels[it - included.begin()];
}

int resolve_factor(const DesignTable& table, const std::string& name) {
    for (int f = 0; f < table.n_factors(); ++f)
        if (table.factors[f].name == name) return f;
    int hit = -1;
    for (int f = 0; f < table.n_factors(); ++f) {
        if (table.factors[f].name.starts_with(name)) {
            if (hit >= 0)
                throw Error("factor name '" + name + "' is ambiguous ('" +
                            table.factors[hit].name + "' vs '" + table.factors[f].name + "')");
            hit = f;
        }
    }
    if (hit < 0) throw Error("unknown base-factor name '" + name + "'");
    return hit;
}

namespace {

std::vector<int> expr_factors(const DesignTable& table, const RandExpr& e) {
    std::set<int> fs;
    for (const auto& n : base_names(e)) fs.insert(resolve_factor(table, n));
    return {fs.begin(), fs.end()};
}

int object_of_factors(const LayoutStructure& ls, const std::vector<int>& fs) {
    Partition p = partition_of(ls.table, fs);
    const StructuralObject* o = ls.find_object(p);
    if (!o) throw Error("internal: expression maps to no structural object");
    return o->id;
}

// Within contexts must be coarser than the object the expression names.
void check_structure(const LayoutStructure& ls, const RandExpr& e, const Partition& whole) {
    if (e.kind == RandExpr::Kind::Within) {
        Partition ctx = partition_of(ls.table, expr_factors(ls.table, e.children[1]));
        if (!(refines(whole, ctx) && !(whole == ctx)))
            throw Error("context '" + format_rand_expr(e.children[1]) + "' in '" +
                        format_rand_expr(e) + "' is not coarser than the object it qualifies");
    }
    if (e.kind == RandExpr::Kind::Alias) {
        int f = resolve_factor(ls.table, e.name);
        Partition own = partition_of(ls.table, {f});
        if (!(own == whole))
            throw Error("alias '" + e.name + "' is not equivalent to '" +
                        format_rand_expr(e.children[0]) + "'");
    }
    for (const auto& c : e.children) check_structure(ls, c, whole);
}

} // namespace

int resolve_expr_object(const LayoutStructure& ls, const RandExpr& e) {
    if (e.kind == RandExpr::Kind::Arrow) {
        int a = resolve_expr_object(ls, e.children[0]);
        int b = resolve_expr_object(ls, e.children[1]);
        if (a != b)
            throw Error("the two sides of '" + format_rand_expr(e) +
                        "' name different structural objects");
        return a;
    }
    auto fs = expr_factors(ls.table, e);
    int id = object_of_factors(ls, fs);
    check_structure(ls, e, ls.objects[id].partition);
    return id;
}

std::string plan_template_csv(const LayoutStructure& ls) {
    std::ostringstream out;
    out << "structural_object,randomisation_object\n";
    for (const auto& o : ls.objects)
        out << o.name << "," << (o.id == 0 ? "Mean" : "NULL") << "\n";
    return out.str();
}

RandomisationPlan read_plan_csv(const LayoutStructure& ls, std::string_view csv) {
    auto rows = parse_csv(csv);
    if (rows.empty()) throw Error("empty plan file");
    size_t r0 = 0;
    if (rows[0].size() >= 1 && rows[0][0] == "structural_object") r0 = 1;
    if (rows.size() - r0 != static_cast<size_t>(ls.n_objects()))
        throw Error("plan has " + std::to_string(rows.size() - r0) + " rows; the layout has " +
                    std::to_string(ls.n_objects()) + " structural objects");
    RandomisationPlan plan;
    plan.labels.resize(ls.n_objects());
    for (size_t r = r0; r < rows.size(); ++r) {
        if (rows[r].size() != 2)
            throw Error("plan row " + std::to_string(r + 1) + ": expected 2 columns");
        int i = static_cast<int>(r - r0);
        if (rows[r][0] != ls.objects[i].name)
            throw Error("plan row " + std::to_string(r + 1) + ": structural object '" +
                        rows[r][0] + "' does not match '" + ls.objects[i].name + "'");
        const std::string& label = rows[r][1];
        if (label != "NULL" && !label.empty()) plan.labels[i] = label;
    }
    return plan;
}

std::vector<std::pair<int, int>> read_arrows_csv(const LayoutStructure& ls, std::string_view csv) {
    auto rows = parse_csv(csv);
    std::vector<std::pair<int, int>> arrows;
    size_t r0 = 0;
    if (!rows.empty() && rows[0].size() >= 2 && rows[0][0] == "from") r0 = 1;
    auto is_int = [](const std::string& s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
            return std::isdigit(c);
        });
    };
    for (size_t r = r0; r < rows.size(); ++r) {
        if (rows[r].size() != 2)
            throw Error("arrows row " + std::to_string(r + 1) + ": expected 2 columns");
        const std::string &from = rows[r][0], &to = rows[r][1];
        int a, b;
        if (is_int(from) && is_int(to)) {
            a = std::stoi(from) - 1;
            b = std::stoi(to) - 1;
            if (a < 0 || b < 0 || a >= ls.n_objects() || b >= ls.n_objects())
                throw Error("arrow (" + from + ", " + to + ") is out of range: the layout has " +
                            std::to_string(ls.n_objects()) + " objects");
            if (b <= a)
                throw Error("arrow (" + from + ", " + to +
                            "): randomisation arrows must point downwards, so the second entry "
                            "must be larger than the first");
        } else {
            a = resolve_expr_object(ls, parse_rand_expr(from));
            b = resolve_expr_object(ls, parse_rand_expr(to));
        }
        arrows.emplace_back(a, b);
    }
    return arrows;
}

std::vector<Diagnostic> validate_plan(const LayoutStructure& ls, const RandomisationPlan& plan) {
    if (plan.labels.size() != static_cast<size_t>(ls.n_objects()))
        throw Error("plan covers " + std::to_string(plan.labels.size()) + " objects; expected " +
                    std::to_string(ls.n_objects()));
    std::vector<Diagnostic> warnings;
    for (int i = 0; i < ls.n_objects(); ++i) {
        if (!plan.labels[i]) continue;
        if (i == 0) continue; // the Mean row's label is plain text
        RandExpr e;
        try {
            e = parse_rand_expr(*plan.labels[i]);
        } catch (const ParseError& err) {
            throw Error("label '" + *plan.labels[i] + "' for '" + ls.objects[i].name +
                        "' does not parse: " + err.what());
        }
        int id = resolve_expr_object(ls, e);
        if (id != i)
            throw Error("label '" + *plan.labels[i] + "' resolves to structural object '" +
                        ls.objects[id].name + "', not to its row '" + ls.objects[i].name + "'");
    }
    for (auto [a, b] : plan.arrows) {
        if (a < 0 || b < 0 || a >= ls.n_objects() || b >= ls.n_objects())
            throw Error("arrow endpoint out of range");
        if (!plan.labels[a] || !plan.labels[b])
            throw Error("arrow (" + std::to_string(a + 1) + ", " + std::to_string(b + 1) +
                        ") touches an object left as NULL; randomisation objects must be "
                        "specified before they can carry arrows");
        if (a != b && !ls.strictly_finer[b][a])
            throw Error("arrow (" + std::to_string(a + 1) + ", " + std::to_string(b + 1) +
                        ") does not point downwards: '" + ls.objects[b].name +
                        "' is not strictly finer than '" + ls.objects[a].name + "'");
    }
    if (!plan.labels[0]) warnings.push_back({"the Mean is left as NULL; it is always included"});
    if (!plan.labels[ls.finest_id])
        warnings.push_back({"the observational-unit object '" + ls.objects[ls.finest_id].name +
                            "' is left as NULL; it is always included"});
    bool any = false;
    for (int i = 1; i < ls.n_objects(); ++i) any = any || plan.labels[i].has_value();
    if (!any) throw Error("no randomisation objects besides the Mean are defined");
    return warnings;
}

RestrictedLayoutStructure build_rls(const LayoutStructure& ls, const RandomisationPlan& plan) {
    validate_plan(ls, plan);
    RestrictedLayoutStructure rls;
    for (int i = 0; i < ls.n_objects(); ++i) {
        bool in = plan.labels[i].has_value() || i == 0 || i == ls.finest_id;
        if (!in) continue;
        rls.included.push_back(i);
        if (!plan.labels[i])
            rls.labels.push_back(i == 0 ? "Mean" : ls.objects[i].name);
        else if (i == 0)
            rls.labels.push_back(*plan.labels[i]);
        else // canonicalise the ASCII operator spellings on output
            rls.labels.push_back(format_rand_expr(parse_rand_expr(*plan.labels[i])));
    }
    rls.arrows = plan.arrows;
    return rls;
}

std::map<int, std::string> suggest_rls_objects(
    const LayoutStructure& ls, const std::vector<std::pair<RandExpr, RandExpr>>& arrows) {
    std::map<int, std::string> out;
    auto add = [&](int id, const std::string& label) { out.emplace(id, label); };

    std::set<int> randomised_factors; // base factors that appear as arrow sources
    for (const auto& [from, to] : arrows) {
        int a = resolve_expr_object(ls, from);
        int b = resolve_expr_object(ls, to);
        if (a != b && !ls.strictly_finer[b][a])
            throw Error("arrow '" + format_rand_expr(from) + "' -> '" + format_rand_expr(to) +
                        "' points towards a coarser object; randomisation arrows point downwards");
        // rule 1: both endpoints
        add(a, format_rand_expr(from));
        add(b, format_rand_expr(to));
        for (const auto& n : base_names(from)) randomised_factors.insert(resolve_factor(ls.table, n));
        // rule 2: everything that randomisation-nests the endpoints
        for (const RandExpr& end : {from, to}) {
            for (const auto& nest : rand_nest_set(end)) {
                if (nest.kind == RandExpr::Kind::Base && nest.name == "Mean") {
                    add(0, "Mean");
                    continue;
                }
                add(resolve_expr_object(ls, nest), format_rand_expr(nest));
            }
        }
    }
    // rule 3: the Mean and the observational-unit object
    add(0, "Mean");
    add(ls.finest_id, ls.objects[ls.finest_id].name);
    // rule 4: fixed generalised factors whose constituent fixed factors are
    // all randomised to other objects
    for (const auto& o : ls.objects) {
        if (o.order() < 2 || o.is_random) continue;
        bool all = true;
        for (int f : o.factor_set) all = all && randomised_factors.count(f) > 0;
        if (all) add(o.id, o.name);
    }
    return out;
}

ModelEquation model_equation(const LayoutStructure& ls, const RestrictedLayoutStructure& rls) {
    ModelEquation eq;
    for (int id : rls.included) {
        if (id == 0) continue;
        const auto& o = ls.objects[id];
        std::string term;
        for (size_t i = 0; i < o.factor_set.size(); ++i) {
            if (i) term += ":";
            term += ls.table.factors[o.factor_set[i]].name;
        }
        (o.is_random ? eq.random : eq.fixed).push_back(term);
    }
    std::string rhs;
    for (const auto& t : eq.fixed) {
        if (!rhs.empty()) rhs += " + ";
        rhs += t;
    }
    if (rhs.empty()) rhs = "1";
    for (const auto& t : eq.random) rhs += " + (1|" + t + ")";
    eq.text = "Response ~ " + rhs;
    return eq;
}

std::string rls_relation_table(const LayoutStructure& ls, const RestrictedLayoutStructure& rls) {
    const int n = static_cast<int>(rls.included.size());
    // code-point width; labels may carry multibyte operators
    auto dw = [](const std::string& s) {
        size_t w = 0;
        for (unsigned char c : s)
            if ((c & 0xC0) != 0x80) ++w;
        return w;
    };
    std::vector<std::vector<std::string>> cells(n, std::vector<std::string>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            cells[i][j] = "\"" + ls.relation_entry(rls.included[i], rls.included[j]) + "\"";
    size_t wname = 0;
    for (const auto& l : rls.labels) wname = std::max(wname, dw(l));
    std::vector<size_t> w(n);
    for (int j = 0; j < n; ++j) {
        w[j] = dw(rls.labels[j]);
        for (int i = 0; i < n; ++i) w[j] = std::max(w[j], cells[i][j].size());
    }
    std::ostringstream out;
    out << "The following table shows the relationships between the randomisation objects in the "
           "Restricted Layout Structure\n";
    out << std::string(wname + 1, ' ');
    for (int j = 0; j < n; ++j) {
        out << rls.labels[j] << std::string(w[j] - dw(rls.labels[j]), ' ');
        if (j + 1 < n) out << ' ';
    }
    out << '\n';
    for (int i = 0; i < n; ++i) {
        out << rls.labels[i] << std::string(wname - dw(rls.labels[i]) + 1, ' ');
        for (int j = 0; j < n; ++j) {
            out << cells[i][j] << std::string(w[j] - cells[i][j].size(), ' ');
            if (j + 1 < n) out << ' ';
        }
        out << '\n';
    }
    return out.str();
}

} // namespace hasse
