#include "tnt/bo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tnt/stats.hpp"

namespace tnt {

double expected_improvement(double mean, double std, double f_best) {
    const double improvement = f_best - mean;
    if (std <= 0.0) return std::max(improvement, 0.0);
    const double z = improvement / std;
    return improvement * norm_cdf(z) + std * norm_pdf(z);
}

double expected_improvement(const GpModel& model, const std::vector<double>& x, double f_best) {
    const Posterior p = model.predict_one(x);
    return expected_improvement(p.mean[0], p.std[0], f_best);
}

std::vector<std::vector<double>> latin_hypercube(const SearchSpace& space, int n, Rng& rng) {
    const std::size_t d = space.dims();
    std::vector<std::vector<double>> points(n, std::vector<double>(d));
    std::vector<int> strata(n);
    for (std::size_t j = 0; j < d; ++j) {
        std::iota(strata.begin(), strata.end(), 0);
        rng.shuffle(strata);
        for (int i = 0; i < n; ++i) {
            const double u = (strata[i] + rng.uniform01()) / n;
            points[i][j] = space.lower[j] + u * space.range(j);
        }
    }
    return points;
}

namespace {

struct FitSchedule {
    // Hyperparameter re-optimization gets cheaper as the training set grows;
    // the factorization itself is rebuilt every iteration regardless.
    static bool full_fit_due(int iter) { return iter % 50 == 0; }
    static bool polish_due(int iter, std::size_t n) {
        if (n <= 120) return true;
        if (n <= 320) return iter % 5 == 0;
        return iter % 25 == 0;
    }
};

} // namespace

BoTrace run_bo(const Objective& objective, const BoOptions& opts) {
    const SearchSpace& space = objective.space();
    const std::size_t d = space.dims();
    BoTrace trace;
    trace.initial_design_size = std::max(5, static_cast<int>(2 * d));

    auto record = [&](std::vector<double> x, double value) {
        trace.evaluations.push_back({std::move(x), value});
        if (trace.evaluations.size() == 1 || value < trace.incumbent_value) {
            trace.incumbent_value = value;
            trace.incumbent_x = trace.evaluations.back().x;
        }
        trace.incumbent_history.push_back(trace.incumbent_value);
    };

    Rng design_rng(opts.seed, rng_stream::kInitialDesign);
    for (auto& x : latin_hypercube(space, trace.initial_design_size, design_rng)) {
        const double value = objective(x);
        if (!std::isfinite(value)) {
            trace.aborted = true;
            trace.abort_reason = "objective returned a non-finite value during the initial design";
            return trace;
        }
        record(std::move(x), value);
    }

    auto inputs_of = [&] {
        std::vector<std::vector<double>> xs;
        xs.reserve(trace.evaluations.size());
        for (const auto& e : trace.evaluations) xs.push_back(e.x);
        return xs;
    };
    auto targets_of = [&] {
        std::vector<double> ys;
        ys.reserve(trace.evaluations.size());
        for (const auto& e : trace.evaluations) ys.push_back(e.value);
        return ys;
    };

    GpFitOptions full_fit;
    full_fit.seed = opts.seed;
    full_fit.dim_ranges.resize(d);
    for (std::size_t j = 0; j < d; ++j) full_fit.dim_ranges[j] = space.range(j);

    GpFitOptions polish = full_fit;
    polish.restarts = 0;
    polish.warm_start = true;
    polish.max_evals_per_restart = 40;

    trace.model.fit(inputs_of(), targets_of(), full_fit);

    Rng acq_rng(opts.seed, rng_stream::kAcquisition);
    for (int iter = 1; iter <= opts.iterations; ++iter) {
        // 1. propose: best EI over uniform candidates, then coordinate refinement
        const double f_best = trace.incumbent_value;
        std::vector<std::vector<double>> candidates(opts.acquisition_candidates);
        for (auto& c : candidates) c = space.sample(acq_rng);
        const Posterior post = trace.model.predict(candidates);
        std::vector<std::pair<double, int>> scored(candidates.size());
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            scored[i] = {expected_improvement(post.mean[i], post.std[i], f_best),
                         static_cast<int>(i)};
        }
        const int keep = std::min<int>(opts.refine_top, static_cast<int>(scored.size()));
        std::partial_sort(scored.begin(), scored.begin() + keep, scored.end(),
                          [](const auto& a, const auto& b) { return a.first > b.first; });

        std::vector<double> best_x = candidates[scored[0].second];
        double best_ei = scored[0].first;
        for (int t = 0; t < keep; ++t) {
            std::vector<double> x = candidates[scored[t].second];
            double ei = scored[t].first;
            std::vector<double> step(d);
            for (std::size_t j = 0; j < d; ++j) step[j] = 0.1 * space.range(j);
            for (int s = 0; s < opts.refine_steps; ++s) {
                const std::size_t j = s % d;
                bool moved = false;
                for (double dir : {+1.0, -1.0}) {
                    std::vector<double> probe = x;
                    probe[j] = std::clamp(probe[j] + dir * step[j], space.lower[j], space.upper[j]);
                    const double e = expected_improvement(trace.model, probe, f_best);
                    if (e > ei) {
                        ei = e;
                        x = std::move(probe);
                        moved = true;
                        break;
                    }
                }
                if (!moved) step[j] *= 0.5;
            }
            if (ei > best_ei) {
                best_ei = ei;
                best_x = std::move(x);
            }
        }

        // 2. evaluate
        const double value = objective(best_x);
        if (!std::isfinite(value)) {
            trace.aborted = true;
            trace.abort_reason = "objective returned a non-finite value at iteration " +
                                 std::to_string(iter);
            break;
        }
        record(std::move(best_x), value);
        trace.iterations = iter;

        // 3. refit the surrogate on the grown training set
        const std::size_t n = trace.evaluations.size();
        if (FitSchedule::full_fit_due(iter)) {
            trace.model.fit(inputs_of(), targets_of(), full_fit);
        } else if (FitSchedule::polish_due(iter, n)) {
            trace.model.fit(inputs_of(), targets_of(), polish);
        } else {
            trace.model.refit_with_current_kernel(inputs_of(), targets_of());
        }
    }

    // final model: one thorough hyperparameter fit over everything observed
    trace.model.fit(inputs_of(), targets_of(), full_fit);
    return trace;
}

} // namespace tnt
