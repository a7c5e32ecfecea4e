#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace tnt {

inline double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

/// population (divide-by-n) variance
inline double population_variance(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size());
}

inline double norm_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }

inline double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// log N(x | mean, variance); caller is responsible for variance > 0
inline double gaussian_log_density(double x, double mean, double variance) {
    const double d = x - mean;
    return -0.5 * std::log(2.0 * M_PI * variance) - d * d / (2.0 * variance);
}

} // namespace tnt
