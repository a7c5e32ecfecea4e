#pragma once

#include <string>
#include <vector>

#include "tnt/rng.hpp"

namespace tnt {

/// Axis-aligned box domain: one (name, lower, upper) triple per dimension.
struct SearchSpace {
    std::vector<std::string> names;
    std::vector<double> lower;
    std::vector<double> upper;

    int dims() const { return static_cast<int>(lower.size()); }
    double range(int j) const { return upper[j] - lower[j]; }
    double volume() const;

    bool contains(const std::vector<double>& x) const;
    std::vector<double> sample(Rng& rng) const;
    /// affine map into the unit box (clustering feature scaling)
    std::vector<double> to_unit(const std::vector<double>& x) const;

    /// throws ConfigError if bounds are inverted, empty or inconsistent
    void validate() const;
};

SearchSpace make_space(std::vector<std::string> names, std::vector<double> lower,
                       std::vector<double> upper);

} // namespace tnt
