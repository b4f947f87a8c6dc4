#include "hasse/design.hpp"

#include <algorithm>
#include <unordered_map>

namespace hasse {

namespace {

std::string trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

} // namespace

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    size_t i = 0;
    auto end_field = [&] {
        row.push_back(quoted ? field : trim(field));
        field.clear();
        quoted = false;
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
        any = false;
    };
    while (i < text.size()) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    i += 2;
                    continue;
                }
                quoted = false; // closing quote; trailing junk until delimiter is kept
                ++i;
                continue;
            }
            field += c;
            ++i;
            continue;
        }
        switch (c) {
        case '"':
            if (field.empty() || trim(field).empty()) {
                quoted = true;
                field.clear();
            } else {
                field += c;
            }
            ++i;
            break;
        case ',':
            end_field();
            any = true;
            ++i;
            break;
        case '\r':
            ++i;
            break;
        case '\n':
            end_row();
            ++i;
            break;
        default:
            field += c;
            any = true;
            ++i;
            break;
        }
    }
    if (any || !field.empty() || !row.empty()) end_row();
    if (quoted) throw Error("unterminated quoted field in CSV input");
    return rows;
}

DesignTable load_design(std::string_view csv_text,
                        const std::optional<std::vector<bool>>& random_flags) {
    auto rows = parse_csv(csv_text);
    if (rows.empty()) throw Error("empty design: no header row");
    const auto& header = rows[0];
    if (header.empty() || (header.size() == 1 && header[0].empty()))
        throw Error("empty design: no factor columns");
    const size_t k = header.size();

    DesignTable t;
    t.factors.resize(k);
    for (size_t f = 0; f < k; ++f) {
        if (header[f].empty()) throw Error("empty column name in header");
        for (size_t g = 0; g < f; ++g)
            if (header[g] == header[f])
                throw Error("duplicate column name '" + header[f] + "'");
        t.factors[f].name = header[f];
    }
    if (random_flags) {
        if (random_flags->size() != k)
            throw Error("random flags length " + std::to_string(random_flags->size()) +
                        " does not match factor count " + std::to_string(k));
        for (size_t f = 0; f < k; ++f) t.factors[f].is_random = (*random_flags)[f];
    }

    if (rows.size() < 2) throw Error("empty design body: no unit rows");
    std::vector<std::unordered_map<std::string, int>> codes(k);
    for (size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != k)
            throw Error("ragged row " + std::to_string(r + 1) + ": expected " +
                        std::to_string(k) + " fields, got " + std::to_string(row.size()));
        for (size_t f = 0; f < k; ++f) {
            const std::string& label = row[f];
            if (label.empty())
                throw Error("missing value at row " + std::to_string(r + 1) + ", column '" +
                            t.factors[f].name + "'");
            auto [it, fresh] = codes[f].try_emplace(label, static_cast<int>(codes[f].size()));
            if (fresh) t.factors[f].levels.push_back(label);
            t.cells.push_back(it->second);
        }
        ++t.n_units;
    }
    return t;
}

Partition partition_of(const DesignTable& table, const std::vector<int>& subset) {
    for (int f : subset)
        if (f < 0 || f >= table.n_factors())
            throw Error("factor index " + std::to_string(f) + " out of range");
    Partition p;
    p.class_of.resize(table.n_units);
    if (subset.empty()) {
        p.n_classes = table.n_units > 0 ? 1 : 0;
        return p;
    }
    // key units by their level combination, numbering classes by first occurrence
    std::unordered_map<std::string, int> seen;
    std::string key;
    for (int u = 0; u < table.n_units; ++u) {
        key.clear();
        for (int f : subset) {
            key += std::to_string(table.cell(u, f));
            key += ',';
        }
        auto [it, fresh] = seen.try_emplace(key, static_cast<int>(seen.size()));
        p.class_of[u] = it->second;
    }
    p.n_classes = static_cast<int>(seen.size());
    return p;
}

std::vector<Diagnostic> check_design(const DesignTable& table) {
    std::vector<Diagnostic> out;
    const int k = table.n_factors();
    std::vector<Partition> parts(k);
    for (int f = 0; f < k; ++f) parts[f] = partition_of(table, {f});

    for (int f = 0; f < k; ++f)
        if (parts[f].n_classes == 1)
            out.push_back({"factor '" + table.factors[f].name +
                           "' has a single level; it behaves as the Mean"});
    for (int f = 0; f < k; ++f)
        for (int g = f + 1; g < k; ++g)
            if (parts[f] == parts[g])
                out.push_back({"factors '" + table.factors[f].name + "' and '" +
                               table.factors[g].name +
                               "' induce identical partitions; they are equivalent"});
    for (int f = 0; f < k; ++f)
        if (parts[f].n_classes == table.n_units && table.n_units > 1)
            out.push_back({"factor '" + table.factors[f].name +
                           "' has one unit per level; it looks like the observational-unit index"});
    return out;
}

} // namespace hasse
