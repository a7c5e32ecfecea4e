#include "tnt/nsga2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tnt/errors.hpp"
#include "tnt/rng.hpp"

namespace tnt {

bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
    bool strictly_better = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return false;
        if (a[i] > b[i]) strictly_better = true;
    }
    return strictly_better;
}

std::vector<std::vector<int>> non_dominated_sort(
    const std::vector<std::vector<double>>& objectives) {
    const int n = static_cast<int>(objectives.size());
    std::vector<std::vector<int>> dominated_by(static_cast<std::size_t>(n));
    std::vector<int> domination_count(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<int>> fronts(1);
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            if (p == q) continue;
            if (dominates(objectives[p], objectives[q])) {
                dominated_by[p].push_back(q);
            } else if (dominates(objectives[q], objectives[p])) {
                ++domination_count[p];
            }
        }
        if (domination_count[p] == 0) fronts[0].push_back(p);
    }
    std::size_t f = 0;
    while (f < fronts.size() && !fronts[f].empty()) {
        std::vector<int> next;
        for (int p : fronts[f]) {
            for (int q : dominated_by[p]) {
                if (--domination_count[q] == 0) next.push_back(q);
            }
        }
        if (!next.empty()) fronts.push_back(std::move(next));
        ++f;
    }
    return fronts;
}

std::vector<double> crowding_distances(const std::vector<std::vector<double>>& objectives,
                                       const std::vector<int>& front) {
    const std::size_t m = front.size();
    std::vector<double> crowd(m, 0.0);
    if (m == 0) return crowd;
    const std::size_t n_obj = objectives[static_cast<std::size_t>(front[0])].size();
    std::vector<std::size_t> order(m);
    for (std::size_t obj = 0; obj < n_obj; ++obj) {
        for (std::size_t i = 0; i < m; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return objectives[static_cast<std::size_t>(front[a])][obj] <
                   objectives[static_cast<std::size_t>(front[b])][obj];
        });
        const double lo = objectives[static_cast<std::size_t>(front[order.front()])][obj];
        const double hi = objectives[static_cast<std::size_t>(front[order.back()])][obj];
        crowd[order.front()] = std::numeric_limits<double>::infinity();
        crowd[order.back()] = std::numeric_limits<double>::infinity();
        if (hi <= lo) continue;
        for (std::size_t i = 1; i + 1 < m; ++i) {
            const double below = objectives[static_cast<std::size_t>(front[order[i - 1]])][obj];
            const double above = objectives[static_cast<std::size_t>(front[order[i + 1]])][obj];
            crowd[order[i]] += (above - below) / (hi - lo);
        }
    }
    return crowd;
}

namespace {

void sbx_crossover(std::vector<double>& c1, std::vector<double>& c2,
                   const std::vector<double>& lower, const std::vector<double>& upper, double eta,
                   Rng& rng) {
    for (std::size_t j = 0; j < c1.size(); ++j) {
        if (rng.uniform01() > 0.5) continue;
        double y1 = std::min(c1[j], c2[j]);
        double y2 = std::max(c1[j], c2[j]);
        if (y2 - y1 < 1e-14) continue;
        const double u = rng.uniform01();
        auto child = [&](double beta_bound, bool lower_child) {
            const double alpha = 2.0 - std::pow(beta_bound, -(eta + 1.0));
            const double betaq = (u <= 1.0 / alpha)
                                     ? std::pow(u * alpha, 1.0 / (eta + 1.0))
                                     : std::pow(1.0 / (2.0 - u * alpha), 1.0 / (eta + 1.0));
            const double sign = lower_child ? -1.0 : 1.0;
            return 0.5 * ((y1 + y2) + sign * betaq * (y2 - y1));
        };
        double v1 = child(1.0 + 2.0 * (y1 - lower[j]) / (y2 - y1), true);
        double v2 = child(1.0 + 2.0 * (upper[j] - y2) / (y2 - y1), false);
        v1 = std::clamp(v1, lower[j], upper[j]);
        v2 = std::clamp(v2, lower[j], upper[j]);
        if (rng.uniform01() < 0.5) std::swap(v1, v2);
        c1[j] = v1;
        c2[j] = v2;
    }
}

void polynomial_mutation(std::vector<double>& genes, const std::vector<double>& lower,
                         const std::vector<double>& upper, double eta, double rate, Rng& rng) {
    for (std::size_t j = 0; j < genes.size(); ++j) {
        if (rng.uniform01() >= rate) continue;
        const double range = upper[j] - lower[j];
        if (range <= 0.0) continue;
        const double y = genes[j];
        const double d1 = (y - lower[j]) / range;
        const double d2 = (upper[j] - y) / range;
        const double u = rng.uniform01();
        const double mut_pow = 1.0 / (eta + 1.0);
        double deltaq;
        if (u < 0.5) {
            const double xy = 1.0 - d1;
            const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(xy, eta + 1.0);
            deltaq = std::pow(val, mut_pow) - 1.0;
        } else {
            const double xy = 1.0 - d2;
            const double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(xy, eta + 1.0);
            deltaq = 1.0 - std::pow(val, mut_pow);
        }
        genes[j] = std::clamp(y + deltaq * range, lower[j], upper[j]);
    }
}

int tournament(const std::vector<Nsga2Individual>& pop, Rng& rng) {
    const int a = static_cast<int>(rng.index(pop.size()));
    const int b = static_cast<int>(rng.index(pop.size()));
    if (pop[a].rank != pop[b].rank) return pop[a].rank < pop[b].rank ? a : b;
    if (pop[a].crowding != pop[b].crowding) return pop[a].crowding > pop[b].crowding ? a : b;
    return a;
}

void assign_ranks(std::vector<Nsga2Individual>& pop) {
    std::vector<std::vector<double>> objs(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) objs[i] = pop[i].objectives;
    const auto fronts = non_dominated_sort(objs);
    for (std::size_t f = 0; f < fronts.size(); ++f) {
        const auto crowd = crowding_distances(objs, fronts[f]);
        for (std::size_t i = 0; i < fronts[f].size(); ++i) {
            pop[static_cast<std::size_t>(fronts[f][i])].rank = static_cast<int>(f);
            pop[static_cast<std::size_t>(fronts[f][i])].crowding = crowd[i];
        }
    }
}

} // namespace

std::vector<Nsga2Individual> nsga2_maximize(
    const std::function<std::vector<double>(const std::vector<double>&)>& evaluate,
    const std::vector<double>& lower, const std::vector<double>& upper,
    const Nsga2Options& opts) {
    if (opts.population < 4 || opts.population % 2 != 0) {
        throw ConfigError("NSGA-II population must be even and at least 4");
    }
    if (lower.size() != upper.size() || lower.empty()) {
        throw ConfigError("NSGA-II bounds are inconsistent");
    }
    const std::size_t n_genes = lower.size();
    const double rate = opts.mutation_rate > 0.0 ? opts.mutation_rate
                                                 : 1.0 / static_cast<double>(n_genes);
    Rng rng(opts.seed, rng_stream::kTuner);

    std::vector<Nsga2Individual> pop(static_cast<std::size_t>(opts.population));
    for (auto& ind : pop) {
        ind.genes.resize(n_genes);
        for (std::size_t j = 0; j < n_genes; ++j) ind.genes[j] = rng.uniform(lower[j], upper[j]);
        ind.objectives = evaluate(ind.genes);
    }
    assign_ranks(pop);

    for (int gen = 0; gen < opts.generations; ++gen) {
        std::vector<Nsga2Individual> offspring;
        offspring.reserve(pop.size());
        while (offspring.size() < pop.size()) {
            const Nsga2Individual& p1 = pop[static_cast<std::size_t>(tournament(pop, rng))];
            const Nsga2Individual& p2 = pop[static_cast<std::size_t>(tournament(pop, rng))];
            std::vector<double> c1 = p1.genes, c2 = p2.genes;
            if (rng.uniform01() < opts.crossover_prob) {
                sbx_crossover(c1, c2, lower, upper, opts.crossover_eta, rng);
            }
            for (auto* genes : {&c1, &c2}) {
                polynomial_mutation(*genes, lower, upper, opts.mutation_eta, rate, rng);
                Nsga2Individual child;
                child.genes = *genes;
                child.objectives = evaluate(child.genes);
                offspring.push_back(std::move(child));
                if (offspring.size() == pop.size()) break;
            }
        }

        std::vector<Nsga2Individual> combined = std::move(pop);
        combined.insert(combined.end(), std::make_move_iterator(offspring.begin()),
                        std::make_move_iterator(offspring.end()));
        std::vector<std::vector<double>> objs(combined.size());
        for (std::size_t i = 0; i < combined.size(); ++i) objs[i] = combined[i].objectives;
        const auto fronts = non_dominated_sort(objs);

        pop.clear();
        for (const auto& front : fronts) {
            const auto crowd = crowding_distances(objs, front);
            if (pop.size() + front.size() <= static_cast<std::size_t>(opts.population)) {
                for (std::size_t i = 0; i < front.size(); ++i) {
                    combined[static_cast<std::size_t>(front[i])].crowding = crowd[i];
                    pop.push_back(std::move(combined[static_cast<std::size_t>(front[i])]));
                }
            } else {
                std::vector<std::size_t> order(front.size());
                for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
                std::sort(order.begin(), order.end(),
                          [&](std::size_t a, std::size_t b) { return crowd[a] > crowd[b]; });
                for (std::size_t i = 0; pop.size() < static_cast<std::size_t>(opts.population);
                     ++i) {
                    combined[static_cast<std::size_t>(front[order[i]])].crowding = crowd[order[i]];
                    pop.push_back(std::move(combined[static_cast<std::size_t>(front[order[i]])]));
                }
            }
            if (pop.size() == static_cast<std::size_t>(opts.population)) break;
        }
        assign_ranks(pop);
    }

    std::vector<Nsga2Individual> front;
    for (const auto& ind : pop) {
        if (ind.rank == 0) front.push_back(ind);
    }
    return front;
}

} // namespace tnt
