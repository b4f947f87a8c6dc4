#ifndef HASSE_DESIGN_HPP
#define HASSE_DESIGN_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hasse {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Diagnostic {
    std::string message;
};

/// A categorical design factor. Levels are kept in first-appearance order.
struct Factor {
    std::string name;
    std::vector<std::string> levels;
    bool is_random = false;
};

/// An experimental design table: observational units (rows) by factors
/// (columns), cells recoded to dense level indices at load time.
struct DesignTable {
    std::vector<Factor> factors;
    int n_units = 0;
    std::vector<int> cells; // row-major, n_units x factors.size()

    int cell(int unit, int factor) const {
        return cells[static_cast<size_t>(unit) * factors.size() + factor];
    }
    int n_factors() const { return static_cast<int>(factors.size()); }
};

/// Grouping of units induced by a factor subset. Class ids are contiguous
/// and numbered by first occurrence, so equal groupings compare equal.
struct Partition {
    std::vector<int> class_of;
    int n_classes = 0;

    int n_units() const { return static_cast<int>(class_of.size()); }
    bool operator==(const Partition&) const = default;
};

/// Parse a CSV design (header row of factor names, one row per unit).
/// random_flags, when given, must have one entry per column; absent means
/// all factors fixed. Level labels are trimmed and compared exactly.
DesignTable load_design(std::string_view csv_text,
                        const std::optional<std::vector<bool>>& random_flags = std::nullopt);

/// Partition of the units by the combination of the given factors.
/// The empty subset is the Mean (a single class).
Partition partition_of(const DesignTable& table, const std::vector<int>& subset);

/// Non-fatal sanity checks: single-level factors, duplicate partitions,
/// factors that index the observational units.
std::vector<Diagnostic> check_design(const DesignTable& table);

/// Split one CSV record per RFC-4180-ish rules (quotes, "" escape).
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

} // namespace hasse

#endif
