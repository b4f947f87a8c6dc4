#ifndef HASSE_RLS_HPP
#define HASSE_RLS_HPP

#include "hasse/layout.hpp"
#include "hasse/randexpr.hpp"

#include <map>
#include <optional>
#include <utility>

namespace hasse {

/// User mapping from structural objects to randomisation-object labels.
/// labels[i] is empty (NULL in the file) when object i is excluded.
struct RandomisationPlan {
    std::vector<std::optional<std::string>> labels;
    std::vector<std::pair<int, int>> arrows; // 0-based object-id pairs, from -> to
};

struct RestrictedLayoutStructure {
    std::vector<int> included;       // object ids, ascending
    std::vector<std::string> labels; // parallel to included
    std::vector<std::pair<int, int>> arrows;

    bool contains(int object_id) const;
    const std::string& label_of(int object_id) const;
};

struct ModelEquation {
    std::vector<std::string> fixed;
    std::vector<std::string> random;
    std::string text; // "Response ~ ..."
};

/// Resolve an expression to the structural object whose partition equals the
/// partition of the expression's base factors. Names match exactly or by
/// unique prefix. Checks structural compatibility of Within contexts.
int resolve_expr_object(const LayoutStructure& ls, const RandExpr& e);

/// Resolve a single factor name (exact, then unique prefix).
int resolve_factor(const DesignTable& table, const std::string& name);

/// The editable two-column template, "Mean" prefilled and "NULL" elsewhere.
std::string plan_template_csv(const LayoutStructure& ls);

/// Read a filled-in template. Column 1 must match the structural objects in
/// layout order.
RandomisationPlan read_plan_csv(const LayoutStructure& ls, std::string_view csv);

/// Read arrows as either 1-based object indices (compatibility form; the
/// second entry must be larger) or structural labels / expressions.
std::vector<std::pair<int, int>> read_arrows_csv(const LayoutStructure& ls, std::string_view csv);

/// Warnings for a structurally valid plan; throws Error on fatal problems
/// (upward arrows, arrows into excluded objects, unparseable or misplaced
/// labels).
std::vector<Diagnostic> validate_plan(const LayoutStructure& ls, const RandomisationPlan& plan);

/// Build the restricted layout structure. Mean and the finest object are
/// always included.
RestrictedLayoutStructure build_rls(const LayoutStructure& ls, const RandomisationPlan& plan);

/// Rules 1-4: endpoints, randomisation-nest closure, Mean + observational
/// unit, fixed generalised factors whose constituents are all randomised.
std::map<int, std::string> suggest_rls_objects(
    const LayoutStructure& ls, const std::vector<std::pair<RandExpr, RandExpr>>& arrows);

/// One model term per included non-Mean object, random objects listed as
/// random effects.
ModelEquation model_equation(const LayoutStructure& ls, const RestrictedLayoutStructure& rls);

/// Relation table restricted to the included objects, labelled with the
/// randomisation-object names.
std::string rls_relation_table(const LayoutStructure& ls, const RestrictedLayoutStructure& rls);

} // namespace hasse

#endif
