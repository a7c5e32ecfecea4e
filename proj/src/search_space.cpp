#include "tnt/search_space.hpp"

#include "tnt/errors.hpp"

namespace tnt {

double SearchSpace::volume() const {
    double v = 1.0;
    for (int j = 0; j < dims(); ++j) v *= range(j);
    return v;
}

bool SearchSpace::contains(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != dims()) return false;
    for (int j = 0; j < dims(); ++j) {
        if (x[j] < lower[j] || x[j] > upper[j]) return false;
    }
    return true;
}

std::vector<double> SearchSpace::sample(Rng& rng) const {
    std::vector<double> x(dims());
    for (int j = 0; j < dims(); ++j) x[j] = rng.uniform(lower[j], upper[j]);
    return x;
}

std::vector<double> SearchSpace::to_unit(const std::vector<double>& x) const {
    std::vector<double> u(dims());
    for (int j = 0; j < dims(); ++j) {
        const double r = range(j);
        u[j] = r > 0.0 ? (x[j] - lower[j]) / r : 0.0;
    }
    return u;
}

void SearchSpace::validate() const {
    if (lower.empty()) throw ConfigError("search space must have at least one dimension");
    if (lower.size() != upper.size() || lower.size() != names.size()) {
        throw ConfigError("search space bounds/names length mismatch");
    }
    for (int j = 0; j < dims(); ++j) {
        if (!(lower[j] < upper[j])) {
            throw ConfigError("search space dimension '" + names[j] + "' has lower >= upper");
        }
    }
}

SearchSpace make_space(std::vector<std::string> names, std::vector<double> lower,
                       std::vector<double> upper) {
    SearchSpace s{std::move(names), std::move(lower), std::move(upper)};
    s.validate();
    return s;
}

} // namespace tnt
