#include "hasse/confound.hpp"
#include "hasse/datasets.hpp"
#include "hasse/layout.hpp"
#include "hasse/render.hpp"
#include "hasse/rls.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace hasse;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("cannot read '" + p.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write '" + p.string() + "'");
    out << text;
    if (!out) throw Error("write failed for '" + p.string() + "'");
}

struct CommonOpts {
    std::string input;
    std::string flags_path;
    std::string outdir = ".";
    std::string name = "example";
    std::string format = "svg";
    bool table_out = false;
    bool no_partial = false, no_df = false, no_max_levels = false, no_confound = false;
    bool bw = false;
    int max_factors = 16;
    StyleConfig style;
};

void add_style_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--structural-colour", o.style.structural_colour, "Structural line colour");
    cmd->add_option("--structural-width", o.style.structural_width, "Structural line width");
    cmd->add_option("--partial-colour", o.style.partial_colour, "Partial-crossing line colour");
    cmd->add_option("--partial-width", o.style.partial_width, "Partial-crossing line width");
    cmd->add_option("--objects-colour", o.style.object_colour, "Object label colour");
    cmd->add_option("--df-colour", o.style.df_colour, "Degrees-of-freedom label colour");
    cmd->add_option("--arrow-colour", o.style.arrow_colour, "Randomisation arrow colour");
    cmd->add_option("--arrow-width", o.style.arrow_width, "Randomisation arrow width");
    cmd->add_option("--arrow-pos", o.style.arrow_pos,
                    "Arrow position; larger values give shorter arrows");
    cmd->add_option("--font", o.style.font_family, "Font family for diagram text");
    cmd->add_option("--larger-font-mult", o.style.larger_font_multiplier,
                    "Multiplier for tiers with four or fewer objects");
    cmd->add_option("--middle-font-mult", o.style.middle_font_multiplier,
                    "Multiplier for merged-equivalence labels");
    cmd->add_option("--smaller-font-mult", o.style.smaller_font_multiplier,
                    "Multiplier for tiers with five or more objects");
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_outputs) {
    cmd->add_option("design", o.input, "Design CSV (header row of factor names)")->required();
    cmd->add_option("--flags", o.flags_path, "Random-factor sidecar (name=0|1 per line)");
    cmd->add_option("--max-factors", o.max_factors, "Subset-enumeration cap (default 16)");
    if (with_outputs) {
        cmd->add_option("--out-dir", o.outdir, "Output directory (default .)");
        cmd->add_option("--name", o.name, "Output base name (default example)")
            ->check([](const std::string& s) {
                return s.empty() ? std::string("output name must be non-empty") : std::string();
            });
        cmd->add_option("--format", o.format, "svg, dot or both (default svg)")
            ->check(CLI::IsMember({"svg", "dot", "both"}));
        cmd->add_flag("--table-out", o.table_out, "Print the relation table");
        cmd->add_flag("--no-partial", o.no_partial, "Hide partial-crossing dotted lines");
        cmd->add_flag("--no-df", o.no_df, "Hide degrees-of-freedom labels");
        cmd->add_flag("--no-max-levels", o.no_max_levels, "Hide potential maximum levels");
        cmd->add_flag("--no-confound-check", o.no_confound, "Skip the confounded-df check");
        cmd->add_flag("--bw", o.bw, "Black-and-white output");
        add_style_options(cmd, o);
    }
}

DesignTable load_input(const CommonOpts& o) {
    std::string csv = read_file(o.input);
    DesignTable t = load_design(csv);
    if (!o.flags_path.empty()) {
        auto flags = parse_flags_sidecar(t, read_file(o.flags_path));
        for (int f = 0; f < t.n_factors(); ++f) t.factors[f].is_random = flags[f];
    }
    return t;
}

StyleConfig effective_style(const CommonOpts& o) {
    StyleConfig st = o.style;
    st.show_partial = !o.no_partial;
    st.show_df = !o.no_df;
    st.show_max_levels = !o.no_max_levels;
    st.monochrome = o.bw;
    st.validate();
    return st;
}

void write_diagram(const CommonOpts& o, const DiagramSpec& spec, const StyleConfig& st,
                   const std::string& suffix) {
    fs::path dir(o.outdir);
    if (!dir.empty()) fs::create_directories(dir);
    if (o.format == "svg" || o.format == "both")
        write_file(dir / (o.name + suffix + ".svg"), emit_svg(spec, st));
    if (o.format == "dot" || o.format == "both")
        write_file(dir / (o.name + suffix + ".dot"), emit_dot(spec));
}

int cmd_layout(const CommonOpts& o, const std::string& json_path) {
    DesignTable table = load_input(o);
    for (const auto& d : check_design(table)) std::cerr << "warning: " << d.message << "\n";
    LayoutStructure ls = build_layout_structure(table, {o.max_factors});
    for (const auto& d : ls.diagnostics) std::cerr << "warning: " << d.message << "\n";
    StyleConfig st = effective_style(o);

    if (o.table_out) std::cout << relation_table(ls);
    if (!o.no_confound) {
        ConfoundReport rep = detect_confounding(ls);
        for (const auto& d : rep.diagnostics) std::cerr << "warning: " << d.message << "\n";
        if (rep.total_confounded_df > 0) std::cout << confound_report_text(ls, rep);
    }
    DiagramSpec spec = layout_diagram(ls, st);
    write_diagram(o, spec, st, "");
    if (!json_path.empty()) write_file(json_path, layout_to_json(ls));
    return 0;
}

int cmd_objects(const CommonOpts& o, const std::string& plan_out) {
    DesignTable table = load_input(o);
    LayoutStructure ls = build_layout_structure(table, {o.max_factors});
    for (const auto& d : ls.diagnostics) std::cerr << "warning: " << d.message << "\n";
    std::cout << "Structural objects of the layout structure:\n";
    for (const auto& obj : ls.objects)
        std::cout << "[" << obj.id + 1 << "] " << obj.name << "\n";
    std::string path = plan_out.empty() ? o.name + "_plan.csv" : plan_out;
    write_file(path, plan_template_csv(ls));
    std::cout << "Plan template written to " << path
              << "; replace NULL with randomisation-object labels to include objects in the "
                 "restricted layout structure.\n";
    return 0;
}

int cmd_rls(const CommonOpts& o, const std::string& plan_path, const std::string& arrows_path,
            bool suggest, bool equation_out) {
    DesignTable table = load_input(o);
    LayoutStructure ls = build_layout_structure(table, {o.max_factors});
    for (const auto& d : ls.diagnostics) std::cerr << "warning: " << d.message << "\n";
    StyleConfig st = effective_style(o);

    std::vector<std::pair<int, int>> arrows;
    if (!arrows_path.empty()) arrows = read_arrows_csv(ls, read_file(arrows_path));

    if (suggest) {
        if (arrows_path.empty())
            throw Error("--suggest needs an arrows file describing the randomisations performed");
        // arrows given in label form keep the user's notation; index pairs
        // fall back to the structural-object name
        auto rows = parse_csv(read_file(arrows_path));
        size_t r0 = !rows.empty() && rows[0].size() >= 2 && rows[0][0] == "from" ? 1 : 0;
        std::vector<std::pair<RandExpr, RandExpr>> arrow_exprs;
        for (size_t r = r0; r < rows.size(); ++r) {
            auto parse_side = [&](const std::string& s) {
                bool numeric = !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
                if (numeric) {
                    int id = std::stoi(s) - 1;
                    if (id < 0 || id >= ls.n_objects())
                        throw Error("arrow index " + s + " is out of range");
                    return parse_rand_expr(ls.objects[id].name);
                }
                return parse_rand_expr(s);
            };
            arrow_exprs.emplace_back(parse_side(rows[r][0]), parse_side(rows[r][1]));
        }
        std::map<int, std::string> suggested;
        try {
            suggested = suggest_rls_objects(ls, arrow_exprs);
        } catch (const Error& e) {
            throw Error(std::string(e.what()) +
                        "\nhint: give --suggest arrows in randomisation notation (for example "
                        "\"Treat,{Bench (x) Lyr}[Soil]\") so the nesting closure is defined");
        }
        std::cout << "Suggested randomisation objects (rules 1-4):\n";
        std::cout << "structural_object,randomisation_object\n";
        for (const auto& obj : ls.objects) {
            auto it = suggested.find(obj.id);
            std::cout << obj.name << "," << (it == suggested.end() ? "NULL" : it->second) << "\n";
        }
        if (plan_path.empty()) return 0;
    }

    if (plan_path.empty()) throw Error("an rls run needs --plan (see the objects subcommand)");
    RandomisationPlan plan = read_plan_csv(ls, read_file(plan_path));
    plan.arrows = arrows;
    for (const auto& d : validate_plan(ls, plan)) std::cerr << "warning: " << d.message << "\n";
    RestrictedLayoutStructure rls = build_rls(ls, plan);

    if (o.table_out) std::cout << rls_relation_table(ls, rls);
    if (equation_out) {
        ModelEquation eq = model_equation(ls, rls);
        std::cout << "The suggested mixed model to be fitted is:\n " << eq.text << "\n";
    }
    DiagramSpec spec = layout_diagram(ls, rls, st);
    write_diagram(o, spec, st, "_rls");
    return 0;
}

int cmd_datasets_export(const std::string& name, const std::string& outdir) {
    FixtureDesign fx = fixture_by_name(name);
    fs::path dir(outdir);
    if (!dir.empty()) fs::create_directories(dir);
    write_file(dir / (fx.name + ".csv"), design_csv(fx.table));
    write_file(dir / (fx.name + ".flags"), flags_sidecar(fx.table));
    std::cout << "wrote " << (dir / (fx.name + ".csv")).string() << " and "
              << (dir / (fx.name + ".flags")).string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hasse diagrams of layout and restricted layout structures"};
    app.require_subcommand(1);

    CommonOpts lo;
    std::string json_path;
    auto* layout = app.add_subcommand("layout", "Analyse a design and draw its layout structure");
    add_common(layout, lo, true);
    layout->add_option("--json", json_path, "Also write the structure as JSON");

    CommonOpts oo;
    std::string plan_out;
    auto* objects =
        app.add_subcommand("objects", "List structural objects and write a plan template");
    add_common(objects, oo, false);
    objects->add_option("--plan-out", plan_out, "Template path (default <name>_plan.csv)");
    objects->add_option("--name", oo.name, "Base name for the default template path");

    CommonOpts ro;
    std::string plan_path, arrows_path;
    bool suggest = false, equation_out = false;
    auto* rls = app.add_subcommand("rls", "Draw the restricted layout structure from a plan");
    add_common(rls, ro, true);
    rls->add_option("--plan", plan_path, "Filled-in plan CSV");
    rls->add_option("--arrows", arrows_path, "Randomisation arrows CSV (from,to)");
    rls->add_flag("--suggest", suggest, "Print the rules 1-4 suggestion and exit");
    rls->add_flag("--equation-out", equation_out, "Print the suggested mixed model");

    auto* datasets = app.add_subcommand("datasets", "Bundled example designs");
    std::string ds_name, ds_outdir = ".";
    auto* ds_export = datasets->add_subcommand("export", "Write a bundled design as CSV + flags");
    ds_export->add_option("dataset", ds_name, "splitplot, factorial, bibd or crossover")->required();
    ds_export->add_option("--out-dir", ds_outdir, "Output directory (default .)");
    datasets->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(layout)) return cmd_layout(lo, json_path);
        if (app.got_subcommand(objects)) return cmd_objects(oo, plan_out);
        if (app.got_subcommand(rls))
            return cmd_rls(ro, plan_path, arrows_path, suggest, equation_out);
        if (app.got_subcommand(datasets)) return cmd_datasets_export(ds_name, ds_outdir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
