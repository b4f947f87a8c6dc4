#ifndef HASSE_RENDER_HPP
#define HASSE_RENDER_HPP

#include "hasse/layout.hpp"
#include "hasse/rls.hpp"

namespace hasse {

struct StyleConfig {
    bool show_partial = true;
    bool show_df = true;
    bool show_max_levels = true;
    bool monochrome = false;
    std::string structural_colour = "grey";
    std::string partial_colour = "orange";
    std::string object_colour = "mediumblue";
    std::string df_colour = "red";
    std::string arrow_colour = "mediumblue";
    double structural_width = 2.0;
    double partial_width = 1.5;
    double arrow_width = 1.5;
    double arrow_pos = 7.5; // larger values shorten the arrows
    std::string font_family = "sans-serif";
    double larger_font_multiplier = 1.0;
    double middle_font_multiplier = 1.0;
    double smaller_font_multiplier = 1.0;

    void validate() const; // widths and multipliers must be positive
};

enum class FontClass { Larger, Middle, Smaller };

struct DiagramNode {
    int object_id = 0;
    std::string title;
    bool underline = false; // random objects
    std::string levels_text;
    std::string max_text; // suffix shown when show_max_levels is on
    std::string df_text;
    FontClass font = FontClass::Larger;
    int tier = 0;
    double x = 0, y = 0;
};

struct DiagramSpec {
    std::vector<DiagramNode> nodes;
    std::vector<std::pair<int, int>> solid_edges;  // node indices, cover relations
    std::vector<std::pair<int, int>> dotted_edges; // partially crossed pairs
    std::vector<std::pair<int, int>> arrows;       // randomisation, excludes self-loops
    double width = 0, height = 0;
    double node_w = 0, node_h = 0;
};

/// Deterministic tiered geometry for the layout structure.
DiagramSpec layout_diagram(const LayoutStructure& ls, const StyleConfig& style);

/// Same for a restricted layout structure: nodes carry the randomisation
/// labels, tiers come from the restricted cover order.
DiagramSpec layout_diagram(const LayoutStructure& ls, const RestrictedLayoutStructure& rls,
                           const StyleConfig& style);

std::string emit_svg(const DiagramSpec& spec, const StyleConfig& style);
std::string emit_dot(const DiagramSpec& spec);

} // namespace hasse

#endif
