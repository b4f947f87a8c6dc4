#include "hasse/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace hasse {

void StyleConfig::validate() const {
    auto pos = [](double v, const char* what) {
        if (!(v > 0)) throw Error(std::string(what) + " must be positive");
    };
    pos(structural_width, "structural width");
    pos(partial_width, "partial width");
    pos(arrow_width, "arrow width");
    pos(arrow_pos, "arrow position");
    pos(larger_font_multiplier, "larger font multiplier");
    pos(middle_font_multiplier, "middle font multiplier");
    pos(smaller_font_multiplier, "smaller font multiplier");
}

namespace {

constexpr double kNodeW = 150, kNodeH = 56, kHGap = 36, kVGap = 64, kMargin = 40;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

struct NodeSource {
    int object_id;
    std::string title;
    bool underline;
    bool merged; // label involves a factor equivalent to a generalised factor
    std::string levels_text, max_text, df_text;
};

DiagramSpec assemble(const LayoutStructure& ls, const std::vector<int>& ids,
                     const std::vector<NodeSource>& sources,
                     const std::vector<std::pair<int, int>>& arrows, const StyleConfig& style) {
    const int n = static_cast<int>(ids.size());
    std::map<int, int> node_of; // object id -> node index
    for (int i = 0; i < n; ++i) node_of[ids[i]] = i;

    // restricted strict order + its transitive reduction
    std::vector<std::vector<bool>> finer(n, std::vector<bool>(n, false));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b) finer[a][b] = ls.strictly_finer[ids[a]][ids[b]];
    DiagramSpec spec;
    for (int b = 0; b < n; ++b)
        for (int a = 0; a < n; ++a) {
            if (!finer[a][b]) continue;
            bool direct = true;
            for (int m = 0; m < n && direct; ++m)
                if (finer[a][m] && finer[m][b]) direct = false;
            if (direct) spec.solid_edges.emplace_back(b, a);
        }
    std::sort(spec.solid_edges.begin(), spec.solid_edges.end());

    std::vector<int> tier(n, 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& [c, f] : spec.solid_edges)
            if (tier[f] < tier[c] + 1) {
                tier[f] = tier[c] + 1;
                changed = true;
            }
    }
    int ntiers = 0;
    for (int t : tier) ntiers = std::max(ntiers, t + 1);
    std::vector<std::vector<int>> rows(ntiers);
    for (int i = 0; i < n; ++i) rows[tier[i]].push_back(i); // id order within a tier
    size_t widest = 1;
    for (auto& r : rows) widest = std::max(widest, r.size());

    spec.node_w = kNodeW;
    spec.node_h = kNodeH;
    spec.width = widest * (kNodeW + kHGap) - kHGap + 2 * kMargin;
    spec.height = ntiers * (kNodeH + kVGap) - kVGap + 2 * kMargin;

    spec.nodes.resize(n);
    for (int t = 0; t < ntiers; ++t) {
        const auto& row = rows[t];
        for (size_t s = 0; s < row.size(); ++s) {
            DiagramNode& nd = spec.nodes[row[s]];
            const NodeSource& src = sources[row[s]];
            nd.object_id = src.object_id;
            nd.title = src.title;
            nd.underline = src.underline;
            nd.levels_text = src.levels_text;
            nd.max_text = src.max_text;
            nd.df_text = src.df_text;
            nd.tier = t;
            nd.font = src.merged          ? FontClass::Middle
                      : row.size() <= 4   ? FontClass::Larger
                                          : FontClass::Smaller;
            nd.x = spec.width / 2 + (static_cast<double>(s) - (row.size() - 1) / 2.0) * (kNodeW + kHGap);
            nd.y = kMargin + t * (kNodeH + kVGap) + kNodeH / 2;
        }
    }

    if (style.show_partial) {
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
                if (finer[a][b] || finer[b][a]) continue;
                if (classify(ls.objects[ids[a]].partition, ls.objects[ids[b]].partition) ==
                    Relationship::PartiallyCrossed)
                    spec.dotted_edges.emplace_back(a, b);
            }
    }

    for (auto& [from, to] : arrows) {
        if (from == to) continue; // shown inside the node label instead
        spec.arrows.emplace_back(node_of.at(from), node_of.at(to));
    }
    return spec;
}

std::string levels_line(const StructuralObject& o) { return std::to_string(o.n_levels); }

std::string max_suffix(const StructuralObject& o) {
    if (o.order() < 2) return {};
    return " (" + std::to_string(o.potential_max_levels) + ")";
}

} // namespace

DiagramSpec layout_diagram(const LayoutStructure& ls, const StyleConfig& style) {
    style.validate();
    std::vector<int> ids;
    std::vector<NodeSource> src;
    for (const auto& o : ls.objects) {
        ids.push_back(o.id);
        src.push_back({o.id, o.display_label, o.is_random, !o.carriers.empty(), levels_line(o),
                       max_suffix(o), "df " + std::to_string(o.df)});
    }
    return assemble(ls, ids, src, {}, style);
}

DiagramSpec layout_diagram(const LayoutStructure& ls, const RestrictedLayoutStructure& rls,
                           const StyleConfig& style) {
    style.validate();
    std::vector<NodeSource> src;
    for (size_t i = 0; i < rls.included.size(); ++i) {
        const auto& o = ls.objects[rls.included[i]];
        bool merged = rls.labels[i].find('=') != std::string::npos ||
                      rls.labels[i].find("→") != std::string::npos;
        src.push_back({o.id, rls.labels[i], o.is_random, merged, levels_line(o), max_suffix(o),
                       "df " + std::to_string(o.df)});
    }
    return assemble(ls, rls.included, src, rls.arrows, style);
}

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Palette {
    std::string structural, partial, object, df, arrow;
};

Palette palette(const StyleConfig& st) {
    if (st.monochrome) return {"black", "black", "black", "black", "black"};
    return {st.structural_colour, st.partial_colour, st.object_colour, st.df_colour,
            st.arrow_colour};
}

double font_size(const StyleConfig& st, FontClass fc) {
    const double base = 13.0;
    switch (fc) {
    case FontClass::Larger: return base * st.larger_font_multiplier;
    case FontClass::Middle: return base * st.middle_font_multiplier;
    case FontClass::Smaller: return base * st.smaller_font_multiplier;
    }
    return base;
}

} // namespace

std::string emit_svg(const DiagramSpec& spec, const StyleConfig& style) {
    style.validate();
    Palette pal = palette(style);
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(spec.width) << "\" height=\""
        << fmt(spec.height) << "\" viewBox=\"0 0 " << fmt(spec.width) << " " << fmt(spec.height)
        << "\">\n";
    out << "<defs><marker id=\"arrowhead\" markerWidth=\"10\" markerHeight=\"8\" refX=\"9\" "
           "refY=\"4\" orient=\"auto\"><path d=\"M0,0 L10,4 L0,8 Z\" fill=\""
        << xml_escape(pal.arrow) << "\"/></marker></defs>\n";

    auto top = [&](const DiagramNode& n) { return n.y - spec.node_h / 2; };
    auto bottom = [&](const DiagramNode& n) { return n.y + spec.node_h / 2; };

    for (auto& [c, f] : spec.solid_edges) {
        const auto &a = spec.nodes[c], &b = spec.nodes[f];
        out << "<line class=\"structural\" x1=\"" << fmt(a.x) << "\" y1=\"" << fmt(bottom(a))
            << "\" x2=\"" << fmt(b.x) << "\" y2=\"" << fmt(top(b)) << "\" stroke=\""
            << xml_escape(pal.structural) << "\" stroke-width=\"" << fmt(style.structural_width)
            << "\"/>\n";
    }
    for (auto& [i, j] : spec.dotted_edges) {
        const auto &a = spec.nodes[i], &b = spec.nodes[j];
        out << "<line class=\"partial\" x1=\"" << fmt(a.x) << "\" y1=\"" << fmt(a.y) << "\" x2=\""
            << fmt(b.x) << "\" y2=\"" << fmt(b.y) << "\" stroke=\"" << xml_escape(pal.partial)
            << "\" stroke-width=\"" << fmt(style.partial_width)
            << "\" stroke-dasharray=\"4 4\"/>\n";
    }
    for (auto& [i, j] : spec.arrows) {
        const auto &a = spec.nodes[i], &b = spec.nodes[j];
        // the head stops short of the target; higher arrow_pos, shorter arrow
        double x1 = a.x + 14, y1 = bottom(a);
        double x2 = b.x + 14, y2 = top(b);
        double dx = x2 - x1, dy = y2 - y1;
        double len = std::hypot(dx, dy);
        double gap = std::min(4.0 * style.arrow_pos, len * 0.45);
        x2 -= dx / len * gap;
        y2 -= dy / len * gap;
        out << "<line class=\"arrow\" x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\""
            << fmt(x2) << "\" y2=\"" << fmt(y2) << "\" stroke=\"" << xml_escape(pal.arrow)
            << "\" stroke-width=\"" << fmt(style.arrow_width)
            << "\" marker-end=\"url(#arrowhead)\"/>\n";
    }
    for (const auto& n : spec.nodes) {
        double fs = font_size(style, n.font);
        out << "<text class=\"object-label\" x=\"" << fmt(n.x) << "\" y=\"" << fmt(n.y - 8)
            << "\" text-anchor=\"middle\" font-family=\"" << xml_escape(style.font_family)
            << "\" font-size=\"" << fmt(fs) << "\" fill=\"" << xml_escape(pal.object) << "\"";
        if (n.underline) out << " text-decoration=\"underline\"";
        out << ">" << xml_escape(n.title) << "</text>\n";
        out << "<text class=\"levels\" x=\"" << fmt(n.x) << "\" y=\"" << fmt(n.y + 8)
            << "\" text-anchor=\"middle\" font-family=\"" << xml_escape(style.font_family)
            << "\" font-size=\"" << fmt(fs * 0.85) << "\" fill=\"" << xml_escape(pal.object) << "\">"
            << xml_escape(n.levels_text);
        if (style.show_max_levels && !n.max_text.empty())
            out << "<tspan class=\"maxlevels\">" << xml_escape(n.max_text) << "</tspan>";
        out << "</text>\n";
        if (style.show_df)
            out << "<text class=\"df\" x=\"" << fmt(n.x) << "\" y=\"" << fmt(n.y + 22)
                << "\" text-anchor=\"middle\" font-family=\"" << xml_escape(style.font_family)
                << "\" font-size=\"" << fmt(fs * 0.85) << "\" fill=\"" << xml_escape(pal.df) << "\">"
                << xml_escape(n.df_text) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string emit_dot(const DiagramSpec& spec) {
    std::ostringstream out;
    out << "digraph hasse {\n  rankdir=TB;\n  node [shape=plaintext];\n";
    std::map<int, std::vector<int>> tiers;
    for (size_t i = 0; i < spec.nodes.size(); ++i)
        tiers[spec.nodes[i].tier].push_back(static_cast<int>(i));
    for (auto& [t, idx] : tiers) {
        out << "  { rank=same;";
        for (int i : idx) out << " n" << i << ";";
        out << " }\n";
    }
    auto dot_escape = [](const std::string& s) {
        std::string r;
        for (char c : s) {
            if (c == '"' || c == '\\') r += '\\';
            r += c;
        }
        return r;
    };
    for (size_t i = 0; i < spec.nodes.size(); ++i) {
        const auto& n = spec.nodes[i];
        out << "  n" << i << " [label=\"" << dot_escape(n.title) << "\\n"
            << dot_escape(n.levels_text + n.max_text);
        if (!n.df_text.empty()) out << "\\n" << dot_escape(n.df_text);
        out << "\"];\n";
    }
    for (auto& [c, f] : spec.solid_edges)
        out << "  n" << c << " -> n" << f << " [dir=none, class=structural];\n";
    for (auto& [a, b] : spec.dotted_edges)
        out << "  n" << a << " -> n" << b << " [dir=none, style=dotted, constraint=false, class=partial];\n";
    for (auto& [a, b] : spec.arrows)
        out << "  n" << a << " -> n" << b << " [style=bold, class=arrow];\n";
    out << "}\n";
    return out.str();
}

} // namespace hasse
