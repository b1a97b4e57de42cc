#pragma once

#include <array>
#include <string>

#include "parrep/model.hpp"

namespace parrep {

/// Two-region decomposition of the state space by a coordinate threshold
/// (the separatrix).  Every state belongs to exactly one region.
struct RegionMap {
    int coordinate = 0;
    double threshold = 0.0;
    bool lower_is_region0 = true;
    std::array<std::string, 2> labels{"low", "high"};

    int region_of(const State& x) const {
        const bool lower = static_cast<double>(x[coordinate]) <= threshold;
        return (lower == lower_is_region0) ? 0 : 1;
    }
};

/// Separatrix used in the Schlogl experiments: the unstable RRE root times V.
inline RegionMap schlogl_region_map() {
    return RegionMap{0, 25.9649, true, {"low", "high"}};
}

/// Horizontal line through the saddle of the genetic-switch RRE
/// (protein coordinate).
inline RegionMap genetic_switch_region_map() {
    return RegionMap{3, 511.2865, true, {"low", "high"}};
}

}  // namespace parrep
