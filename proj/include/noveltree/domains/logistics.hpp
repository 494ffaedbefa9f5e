#pragma once

#include "noveltree/pddl/defs.hpp"

#include <cstdint>

namespace noveltree::domains {

struct LogisticsSpec {
    int n_cities = 2;
    // Places per city including its airport.
    int locations_per_city = 2;
    int n_packages = 1;
    // Defaults to one per city when negative.
    int n_trucks = -1;
    int n_airplanes = 1;

    int trucks() const { return n_trucks < 0 ? n_cities : n_trucks; }
    // Throws ConfigError when a size is out of range.
    void validate() const;
};

// Packages start and end at uniformly drawn places (never the same one).
// Unsolvable draws are regenerated, at most kMaxRedraws times.
pddl::ProblemDef logistics_generate(const LogisticsSpec &spec, std::uint64_t seed);

} // namespace noveltree::domains
