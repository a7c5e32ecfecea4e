#include "tnt/sensitivity.hpp"

#include <cmath>
#include <sstream>

#include "tnt/errors.hpp"

namespace tnt {

SensitivityReport sensitivity(const Rule& rule, const GpModel& model,
                              const ExplanationDataset& dataset) {
    const std::size_t d = dataset.dims();
    std::vector<std::vector<double>> covered;
    for (const auto& x : dataset.inputs) {
        if (rule.antecedent_contains(x)) covered.push_back(x);
    }
    if (covered.empty()) throw ConfigError("sensitivity needs a rule covering at least one point");

    // batched probes: for every covered point, +/- step along every dimension
    std::vector<double> step(d);
    for (std::size_t j = 0; j < d; ++j) step[j] = 1e-4 * dataset.space.range(j);
    std::vector<std::vector<double>> probes;
    probes.reserve(covered.size() * 2 * d);
    for (const auto& x : covered) {
        for (std::size_t j = 0; j < d; ++j) {
            std::vector<double> hi = x, lo = x;
            hi[j] += step[j];
            lo[j] -= step[j];
            probes.push_back(std::move(hi));
            probes.push_back(std::move(lo));
        }
    }
    const Posterior post = model.predict(probes);

    SensitivityReport report;
    report.scores.assign(d, 0.0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < covered.size(); ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const double hi = post.mean[k++];
            const double lo = post.mean[k++];
            report.scores[j] += std::abs(hi - lo) / (2.0 * step[j]);
        }
    }
    double total = 0.0;
    for (double& s : report.scores) {
        s /= static_cast<double>(covered.size());
        total += s;
    }
    if (total > 0.0) {
        for (double& s : report.scores) s /= total;
    }
    const double threshold = 0.5 / static_cast<double>(d);
    report.tune.resize(d);
    report.suggested = rule.antecedent;
    for (std::size_t j = 0; j < d; ++j) report.tune[j] = report.scores[j] >= threshold;
    return report;
}

std::string sensitivity_to_text(const SensitivityReport& report, const SearchSpace& space) {
    std::ostringstream out;
    out.precision(6);
    out << "TUNE:";
    bool any = false;
    for (std::size_t j = 0; j < report.tune.size(); ++j) {
        if (!report.tune[j]) continue;
        out << (any ? ", " : " ") << space.names[j] << " in [" << report.suggested[j].lower
            << ", " << report.suggested[j].upper << "]";
        any = true;
    }
    if (!any) out << " (none)";
    out << " | NOTUNE:";
    any = false;
    for (std::size_t j = 0; j < report.tune.size(); ++j) {
        if (report.tune[j]) continue;
        out << (any ? ", " : " ") << space.names[j];
        any = true;
    }
    if (!any) out << " (none)";
    return out.str();
}

} // namespace tnt
