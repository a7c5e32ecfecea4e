#include "tnt/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tnt/errors.hpp"
#include "tnt/rng.hpp"

namespace tnt {

namespace {

void normalize_mean(ExplanationDataset& d) {
    const auto [lo_it, hi_it] = std::minmax_element(d.mean.begin(), d.mean.end());
    const double lo = *lo_it, hi = *hi_it;
    d.mean_normalized.resize(d.mean.size());
    if (hi > lo) {
        for (std::size_t i = 0; i < d.mean.size(); ++i) {
            d.mean_normalized[i] = (d.mean[i] - lo) / (hi - lo);
        }
    } else {
        std::fill(d.mean_normalized.begin(), d.mean_normalized.end(), 0.0);
    }
}

} // namespace

ExplanationDataset generate_dataset(const GpModel& model, const SearchSpace& space, int n,
                                    std::uint64_t seed) {
    if (n < 10) throw ConfigError("explanation dataset needs at least 10 samples");
    ExplanationDataset d;
    d.space = space;
    d.inputs.reserve(n);
    Rng rng(seed, rng_stream::kExplanationDataset);
    for (int i = 0; i < n; ++i) d.inputs.push_back(space.sample(rng));
    Posterior post = model.predict(d.inputs);
    d.mean = std::move(post.mean);
    d.std = std::move(post.std);
    normalize_mean(d);
    return d;
}

ExplanationDataset dataset_from_values(std::vector<std::vector<double>> inputs,
                                       std::vector<double> values, SearchSpace space) {
    if (inputs.size() != values.size()) {
        throw ConfigError("dataset inputs and values differ in length");
    }
    if (inputs.empty()) throw ConfigError("dataset must not be empty");
    ExplanationDataset d;
    d.space = std::move(space);
    d.inputs = std::move(inputs);
    d.mean = std::move(values);
    d.std.assign(d.mean.size(), 0.0);
    normalize_mean(d);
    return d;
}

std::vector<std::vector<double>> clustering_features(const ExplanationDataset& dataset,
                                                     bool inputs_only) {
    const std::size_t n = dataset.size();
    const double max_std = dataset.std.empty()
                               ? 0.0
                               : *std::max_element(dataset.std.begin(), dataset.std.end());
    std::vector<std::vector<double>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        rows[i] = dataset.space.to_unit(dataset.inputs[i]);
        if (!inputs_only) {
            rows[i].push_back(dataset.mean_normalized[i]);
            rows[i].push_back(max_std > 0.0 ? dataset.std[i] / max_std : 0.0);
        }
    }
    return rows;
}

void write_dataset_csv(const ExplanationDataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out.precision(17);
    for (std::size_t j = 0; j < dataset.dims(); ++j) out << 'x' << (j + 1) << ',';
    out << "mu,sigma\n";
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        for (double v : dataset.inputs[i]) out << v << ',';
        out << dataset.mean[i] << ',' << dataset.std[i] << '\n';
    }
}

ExplanationDataset read_dataset_csv(const std::string& path, SearchSpace space) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty dataset file: " + path);
    ExplanationDataset d;
    d.space = std::move(space);
    const std::size_t dims = d.space.dims();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> fields;
        while (std::getline(ss, cell, ',')) fields.push_back(std::stod(cell));
        if (fields.size() != dims + 2) {
            throw ConfigError("dataset row has wrong column count in " + path);
        }
        d.inputs.emplace_back(fields.begin(), fields.begin() + dims);
        d.mean.push_back(fields[dims]);
        d.std.push_back(fields[dims + 1]);
    }
    if (d.inputs.empty()) throw ConfigError("dataset file has no rows: " + path);
    normalize_mean(d);
    return d;
}

} // namespace tnt
