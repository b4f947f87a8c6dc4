#include "hasse/confound.hpp"

#include <sstream>

namespace hasse {

Eigen::MatrixXd indicator_matrix(const Partition& p) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p.n_units(), p.n_classes);
    for (int u = 0; u < p.n_units(); ++u) m(u, p.class_of[u]) = 1.0;
    return m;
}

namespace {

struct RankResult {
    Eigen::MatrixXd basis;
    int rank = 0;
    bool near_tolerance = false;
};

RankResult orth_basis(const Eigen::MatrixXd& m) {
    RankResult out;
    if (m.cols() == 0 || m.rows() == 0) {
        out.basis = Eigen::MatrixXd::Zero(m.rows(), 0);
        return out;
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    double smax = sv.size() ? sv(0) : 0.0;
    if (smax <= 0.0) {
        out.basis = Eigen::MatrixXd::Zero(m.rows(), 0);
        return out;
    }
    double cut = kRankRelTol * smax;
    int r = 0;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv(i) > cut) ++r;
        if (sv(i) > cut / 10.0 && sv(i) < cut * 10.0) out.near_tolerance = true;
    }
    out.rank = r;
    out.basis = svd.matrixU().leftCols(r);
    return out;
}

int rank_of(const Eigen::MatrixXd& m) { return orth_basis(m).rank; }

Eigen::MatrixXd hcat(const std::vector<Eigen::MatrixXd>& parts, int rows) {
    Eigen::Index cols = 0;
    for (const auto& p : parts) cols += p.cols();
    Eigen::MatrixXd out(rows, cols);
    Eigen::Index at = 0;
    for (const auto& p : parts) {
        out.middleCols(at, p.cols()) = p;
        at += p.cols();
    }
    return out;
}

} // namespace

ResidualSpace residual_df_rank(const LayoutStructure& ls, int object_id) {
    const int n = ls.n_objects();
    std::vector<Eigen::MatrixXd> anc;
    for (int j = 0; j < n; ++j)
        if (ls.strictly_finer[object_id][j]) anc.push_back(indicator_matrix(ls.objects[j].partition));
    Eigen::MatrixXd x = indicator_matrix(ls.objects[object_id].partition);
    ResidualSpace out;
    out.object_id = object_id;
    if (anc.empty()) {
        auto b = orth_basis(x);
        out.basis = std::move(b.basis);
        out.df_rank = b.rank;
        out.near_tolerance = b.near_tolerance;
        return out;
    }
    auto qa = orth_basis(hcat(anc, ls.table.n_units));
    Eigen::MatrixXd resid = x - qa.basis * (qa.basis.transpose() * x);
    auto b = orth_basis(resid);
    out.basis = std::move(b.basis);
    out.df_rank = b.rank;
    out.near_tolerance = qa.near_tolerance || b.near_tolerance;
    return out;
}

ConfoundReport detect_confounding(const LayoutStructure& ls) {
    const int n = ls.n_objects();
    const int units = ls.table.n_units;
    ConfoundReport rep;

    std::vector<Eigen::MatrixXd> resid(n);
    std::vector<int> rank(n, 0);
    bool near_tol = false;
    for (int i = 0; i < n; ++i) {
        auto rs = residual_df_rank(ls, i);
        resid[i] = std::move(rs.basis);
        rank[i] = rs.df_rank;
        near_tol = near_tol || rs.near_tolerance;
    }

    const int finest = ls.finest_id;
    // Degrees of freedom claimed by the non-finest objects beyond the space
    // they actually span; equals df_rank(finest) - df_subtraction(finest).
    rep.total_confounded_df = rank[finest] - ls.objects[finest].df;

    for (int i = 0; i < n; ++i) {
        if (i == 0) continue; // Mean is never listed
        ConfoundRow row;
        row.object_id = i;
        row.n_levels = ls.objects[i].n_levels;
        row.df_subtraction = ls.objects[i].df;
        row.df_rank = rank[i];
        row.flagged = false;
        if (i != finest) {
            if (rank[i] != ls.objects[i].df) {
                row.flagged = true;
            } else {
                std::vector<Eigen::MatrixXd> inc;
                for (int j = 0; j < n; ++j)
                    if (j != i && !ls.strictly_finer[i][j] && !ls.strictly_finer[j][i])
                        inc.push_back(resid[j]);
                if (!inc.empty()) {
                    Eigen::MatrixXd span = hcat(inc, units);
                    int rs = rank_of(span);
                    Eigen::MatrixXd joint = hcat({resid[i], span}, units);
                    int overlap = rank[i] + rs - rank_of(joint);
                    row.flagged = overlap > 0;
                }
            }
        }
        rep.rows.push_back(row);
    }

    {
        // recheck singular values near the cutoff across the full span once
        std::vector<Eigen::MatrixXd> all;
        for (int i = 0; i < n; ++i) all.push_back(indicator_matrix(ls.objects[i].partition));
        Eigen::BDCSVD<Eigen::MatrixXd> svd(hcat(all, units));
        const auto& sv = svd.singularValues();
        if (sv.size()) {
            double cut = kRankRelTol * sv(0);
            for (int i = 0; i < sv.size(); ++i)
                if (sv(i) > cut / 10.0 && sv(i) < cut * 10.0) near_tol = true;
        }
    }
    if (near_tol)
        rep.diagnostics.push_back(
            {"a singular value lies within a factor of 10 of the rank cutoff; rank decisions may "
             "be sensitive to the tolerance"});
    return rep;
}

std::string confound_report_text(const LayoutStructure& ls, const ConfoundReport& report) {
    std::ostringstream out;
    out << "There are " << report.total_confounded_df << " confounded degrees of freedom\n";
    static const char* h1 = "Actual levels";
    static const char* h2 = "DF by Subtraction";
    static const char* h3 = "Potential Confounded DF";
    size_t wname = 0;
    for (const auto& r : report.rows) wname = std::max(wname, ls.objects[r.object_id].name.size());
    auto rjust = [](const std::string& s, size_t w) {
        return std::string(w > s.size() ? w - s.size() : 0, ' ') + s;
    };
    out << std::string(wname + 1, ' ') << h1 << ' ' << h2 << ' ' << h3 << '\n';
    for (const auto& r : report.rows) {
        const auto& name = ls.objects[r.object_id].name;
        out << name << std::string(wname - name.size() + 1, ' ')
            << rjust(std::to_string(r.n_levels), std::string(h1).size()) << ' '
            << rjust(std::to_string(r.df_subtraction), std::string(h2).size()) << ' '
            << rjust(r.flagged ? "Yes" : "No", std::string(h3).size()) << '\n';
    }
    return out.str();
}

} // namespace hasse
