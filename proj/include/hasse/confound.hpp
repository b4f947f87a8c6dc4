#ifndef HASSE_CONFOUND_HPP
#define HASSE_CONFOUND_HPP

#include "hasse/layout.hpp"

#include <Eigen/Dense>

namespace hasse {

/// Orthonormal basis of an object's indicator column space after removing the
/// span of every strictly coarser object.
struct ResidualSpace {
    int object_id = 0;
    Eigen::MatrixXd basis; // n_units x df_rank
    int df_rank = 0;
    // a singular value fell within a factor of 10 of the rank cutoff
    bool near_tolerance = false;
};

struct ConfoundRow {
    int object_id = 0;
    int n_levels = 0;
    int df_subtraction = 0;
    int df_rank = 0;
    bool flagged = false;
};

struct ConfoundReport {
    std::vector<ConfoundRow> rows; // all objects except Mean, in layout order
    int total_confounded_df = 0;
    std::vector<Diagnostic> diagnostics;
};

/// Relative singular-value cutoff for all rank decisions.
inline constexpr double kRankRelTol = 1e-8;

/// n_units x n_levels one-hot indicator matrix of a partition.
Eigen::MatrixXd indicator_matrix(const Partition& p);

ResidualSpace residual_df_rank(const LayoutStructure& ls, int object_id);

ConfoundReport detect_confounding(const LayoutStructure& ls);

/// The printable report: "There are N confounded degrees of freedom" plus the
/// per-object table (Actual levels / DF by Subtraction / Potential Confounded DF).
std::string confound_report_text(const LayoutStructure& ls, const ConfoundReport& report);

} // namespace hasse

#endif
