#ifndef HASSE_DATASETS_HPP
#define HASSE_DATASETS_HPP

#include "hasse/design.hpp"

namespace hasse {

struct FixtureDesign {
    std::string name;
    DesignTable table;
    std::string provenance;
};

/// The 36-run split-plot in a row-column design (Bench, Plant, Lyr, Soil,
/// Treat, Leaf); Bench/Plant/Lyr/Leaf random.
FixtureDesign splitplot_design();

/// Single replicate of a 2^4 factorial plus a Run index; all fixed.
FixtureDesign factorial_2p4();

/// A (6,10,3,5,2) balanced incomplete block design (Blocks, Varieties,
/// Plots); all fixed.
FixtureDesign bibd_6_10_3();

/// Three-period crossover: 6 Williams sequences x 4 subjects, 72 observations;
/// Subject random.
FixtureDesign crossover_design();

std::vector<std::string> fixture_names();
FixtureDesign fixture_by_name(const std::string& name);

/// CSV round-trip surface for the fixtures and the CLI exporter.
std::string design_csv(const DesignTable& table);
std::string flags_sidecar(const DesignTable& table);

/// Parse a "name=0|1" per-line sidecar into per-column random flags.
std::vector<bool> parse_flags_sidecar(const DesignTable& table, std::string_view text);

} // namespace hasse

#endif
