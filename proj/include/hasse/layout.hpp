#ifndef HASSE_LAYOUT_HPP
#define HASSE_LAYOUT_HPP

#include "hasse/design.hpp"
#include "hasse/relations.hpp"

#include <utility>

namespace hasse {

/// A node of the layout structure: a factor or generalised factor after
/// equivalence merging.
struct StructuralObject {
    int id = 0;                    // position in LayoutStructure::objects
    std::vector<int> factor_set;   // canonical generator subset; empty = Mean
    std::vector<int> carriers;     // base factors merged into this object
    Partition partition;
    std::string name;              // "Mean" or full factor names joined with '^'
    std::string display_label;     // merged diagram/header label, e.g. "Plant=Be^So"
    int n_levels = 0;
    long long potential_max_levels = 0; // meaningful only for order >= 2
    bool is_random = false;
    int df = 0;
    int tier = 0;                  // longest chain from Mean over cover edges

    int order() const { return static_cast<int>(factor_set.size()); }
};

struct LayoutStructure {
    DesignTable table;
    std::vector<StructuralObject> objects; // coarse-to-fine, Mean first
    // strictly_finer[a][b]: objects[a]'s partition strictly refines objects[b]'s
    std::vector<std::vector<bool>> strictly_finer;
    std::vector<std::pair<int, int>> cover_edges; // (coarser id, finer id), sorted
    int finest_id = 0;
    std::vector<Diagnostic> diagnostics;

    int n_objects() const { return static_cast<int>(objects.size()); }
    bool coarser_than(int coarse, int fine) const { return strictly_finer[fine][coarse]; }
    const StructuralObject* find_object(const Partition& p) const;

    /// Relation-matrix entry for (row, col): " " on the diagonal, "1" when the
    /// row object refines the column object, "0" when fully crossed, "(0)" otherwise.
    std::string relation_entry(int row, int col) const;
};

struct LayoutOptions {
    int max_factors = 16;
};

/// Run the whole pipeline: object enumeration with equivalence merging,
/// randomness reclassification, refinement order, cover edges, subtraction df,
/// tiers.
LayoutStructure build_layout_structure(const DesignTable& table, const LayoutOptions& opts = {});

/// The printable relation table (title line + fixed-width matrix).
std::string relation_table(const LayoutStructure& ls);

/// Stable JSON export of objects, cover edges, df and the relation matrix.
std::string layout_to_json(const LayoutStructure& ls);

/// Two-letter abbreviation used in generalised-factor labels (UTF-8 aware).
std::string abbreviate(const std::string& name);

} // namespace hasse

#endif
