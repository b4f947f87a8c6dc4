#ifndef HASSE_RANDEXPR_HPP
#define HASSE_RANDEXPR_HPP

#include "hasse/design.hpp"

namespace hasse {

/// Randomisation-object expression tree.
///   Base          factor name
///   Combine       A^B (also accepts the U+2227 wedge)
///   Independent   A ⊗ B (also accepts the "(x)" ASCII form)
///   Within        inner[context]; children = {inner, context}
///   Alias         Name=expr; e.g. "Leaf={Bench ⊗ Lyr}[Soil]"
///   Arrow         lhs → rhs inside a single label (equivalent-object
///                 self-randomisation, e.g. "Catal^Conc^Press^Temp → Run")
struct RandExpr {
    enum class Kind { Base, Combine, Independent, Within, Alias, Arrow };
    Kind kind = Kind::Base;
    std::string name; // Base and Alias
    std::vector<RandExpr> children;

    static RandExpr base(std::string n) { return {Kind::Base, std::move(n), {}}; }
};

struct ParseError : Error {
    using Error::Error;
};

/// Parse a label. The postfix [context] binds to the entire preceding chain,
/// so "A^B[C]" is Within(Combine(A,B), C); braces group.
RandExpr parse_rand_expr(std::string_view label);

/// Canonical rendering: "^" for Combine, " ⊗ " for Independent, braces only
/// where reparsing needs them. format(parse(s)) reparses to the same tree.
std::string format_rand_expr(const RandExpr& e);

/// The randomisation objects that randomisation-nest the given expression.
/// Covers single factors plus the eight supported compound forms; anything
/// deeper is rejected rather than guessed.
std::vector<RandExpr> rand_nest_set(const RandExpr& e);

/// All base-factor names mentioned, including alias names, in tree order.
std::vector<std::string> base_names(const RandExpr& e);

bool operator==(const RandExpr& a, const RandExpr& b);

} // namespace hasse

#endif
