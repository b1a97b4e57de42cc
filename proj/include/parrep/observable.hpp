#pragma once

#include <string>
#include <vector>

#include "parrep/model.hpp"
#include "parrep/region.hpp"

namespace parrep {

/// Pure function of the state: a species population, an indicator of a
/// region, or a constant.
struct Observable {
    enum class Kind { Population, RegionIndicator, Constant };

    std::string label;
    Kind kind = Kind::Constant;
    int species = 0;
    RegionMap region_map;
    int region = 0;
    double value = 1.0;

    double operator()(const State& x) const {
        switch (kind) {
            case Kind::Population:
                return static_cast<double>(x[species]);
            case Kind::RegionIndicator:
                return region_map.region_of(x) == region ? 1.0 : 0.0;
            case Kind::Constant:
                return value;
        }
        return 0.0;
    }

    static Observable population(std::string label, int species) {
        Observable f;
        f.label = std::move(label);
        f.kind = Kind::Population;
        f.species = species;
        return f;
    }
    static Observable indicator(std::string label, RegionMap map, int region) {
        Observable f;
        f.label = std::move(label);
        f.kind = Kind::RegionIndicator;
        f.region_map = map;
        f.region = region;
        return f;
    }
    static Observable constant(std::string label, double value) {
        Observable f;
        f.label = std::move(label);
        f.value = value;
        return f;
    }
};

}  // namespace parrep
