#include "tnt/problems.hpp"

#include <cmath>
#include <stdexcept>

#include "tnt/errors.hpp"
#include "tnt/rng.hpp"

namespace tnt {

Objective::Objective(std::string name, SearchSpace space,
                     std::function<double(const std::vector<double>&)> fn,
                     std::vector<KnownMinimum> minima, bool cheap_ground_truth)
    : name_(std::move(name)),
      space_(std::move(space)),
      fn_(std::move(fn)),
      minima_(std::move(minima)),
      cheap_ground_truth_(cheap_ground_truth) {
    space_.validate();
    for (const auto& m : minima_) {
        if (!space_.contains(m.location)) {
            throw ConfigError("known minimum of '" + name_ + "' lies outside its search space");
        }
    }
}

double Objective::operator()(const std::vector<double>& x) const {
    if (!space_.contains(x)) {
        throw std::domain_error("point outside the search space of '" + name_ + "'");
    }
    return fn_(x);
}

namespace {

void require_in_box(const std::vector<double>& x, std::size_t d, double lo, double hi,
                    const char* what) {
    if (x.size() != d) throw std::domain_error(std::string(what) + ": wrong dimension");
    for (double v : x) {
        if (v < lo || v > hi) throw std::domain_error(std::string(what) + ": input out of bounds");
    }
}

} // namespace

double eval_booth(const std::vector<double>& x) {
    require_in_box(x, 2, -10.0, 10.0, "booth");
    const double a = x[0] + 2.0 * x[1] - 7.0;
    const double b = 2.0 * x[0] + x[1] - 5.0;
    return a * a + b * b;
}

double eval_matyas(const std::vector<double>& x) {
    require_in_box(x, 2, -10.0, 10.0, "matyas");
    return 0.26 * (x[0] * x[0] + x[1] * x[1]) - 0.48 * x[0] * x[1];
}

double eval_himmelblau(const std::vector<double>& x) {
    require_in_box(x, 2, -5.0, 5.0, "himmelblau");
    const double a = x[0] * x[0] + x[1] - 11.0;
    const double b = x[0] + x[1] * x[1] - 7.0;
    return a * a + b * b;
}

double eval_holder_table(const std::vector<double>& x) {
    require_in_box(x, 2, -10.0, 10.0, "holder");
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1]);
    return -std::abs(std::sin(x[0]) * std::cos(x[1]) * std::exp(std::abs(1.0 - r / M_PI)));
}

double eval_cross_in_tray(const std::vector<double>& x) {
    require_in_box(x, 2, -10.0, 10.0, "cross");
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1]);
    const double inner = std::abs(std::sin(x[0]) * std::sin(x[1]) * std::exp(std::abs(100.0 - r / M_PI)));
    return -0.0001 * std::pow(inner + 1.0, 0.1);
}

// ---------------------------------------------------------------------------
// Toy HPO objective: a fixed synthetic binary classification task and a tiny
// two-layer network trained with SGD. Everything is seeded by constants so
// the loss is a deterministic function of the hyperparameters alone.
// ---------------------------------------------------------------------------

namespace {

constexpr int kToySamples = 500;
constexpr int kToyFeatures = 8;
constexpr int kToyTrain = 350;
constexpr std::uint64_t kToyDataSeed = 0x7a11ed5eedULL;

struct ToyData {
    // row-major [kToySamples x kToyFeatures]
    std::vector<double> x;
    std::vector<double> y;
};

const ToyData& toy_data() {
    static const ToyData data = [] {
        ToyData d;
        d.x.resize(static_cast<std::size_t>(kToySamples) * kToyFeatures);
        d.y.resize(kToySamples);
        Rng rng(kToyDataSeed);
        for (int i = 0; i < kToySamples; ++i) {
            const double z1 = rng.normal();
            const double z2 = rng.normal();
            // nonlinear boundary so the hidden layer actually matters
            d.y[i] = (z1 + 0.7 * z2 * z2 - 0.5 > 0.0) ? 1.0 : 0.0;
            double* row = &d.x[static_cast<std::size_t>(i) * kToyFeatures];
            row[0] = z1 + 0.3 * rng.normal();
            row[1] = z2 + 0.3 * rng.normal();
            row[2] = z1 - z2 + 0.3 * rng.normal();
            for (int j = 3; j < kToyFeatures; ++j) row[j] = rng.normal();
        }
        return d;
    }();
    return data;
}

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

} // namespace

double eval_toy_hpo(const std::vector<double>& h) {
    if (h.size() != 6) throw std::domain_error("toy-hpo: expected 6 hyperparameters");
    auto in = [&](int j, double lo, double hi) {
        if (h[j] < lo || h[j] > hi) throw std::domain_error("toy-hpo: hyperparameter out of bounds");
    };
    in(0, -4.0, -1.0);   // log10 learning rate
    in(1, 4.0, 64.0);    // hidden units
    in(2, 5.0, 50.0);    // epochs
    in(3, 0.05, 1.0);    // batch fraction
    in(4, -6.0, -2.0);   // log10 L2
    in(5, 0.0, 0.99);    // momentum

    const double lr = std::pow(10.0, h[0]);
    const int hidden = static_cast<int>(std::lround(h[1]));
    const int epochs = static_cast<int>(std::lround(h[2]));
    const int batch = std::max(1, static_cast<int>(std::lround(h[3] * kToyTrain)));
    const double l2 = std::pow(10.0, h[4]);
    const double momentum = h[5];

    const ToyData& data = toy_data();
    const int n_in = kToyFeatures;

    // weights: W1[hidden x n_in], b1[hidden], W2[hidden], b2
    std::vector<double> w1(static_cast<std::size_t>(hidden) * n_in), b1(hidden, 0.0);
    std::vector<double> w2(hidden), v_w1(w1.size(), 0.0), v_b1(hidden, 0.0), v_w2(hidden, 0.0);
    double b2 = 0.0, v_b2 = 0.0;
    Rng init_rng(kToyDataSeed, 1);
    const double s1 = std::sqrt(2.0 / n_in), s2 = std::sqrt(2.0 / hidden);
    for (auto& w : w1) w = s1 * init_rng.normal();
    for (auto& w : w2) w = s2 * init_rng.normal();

    std::vector<int> order(kToyTrain);
    for (int i = 0; i < kToyTrain; ++i) order[i] = i;
    Rng shuffle_rng(kToyDataSeed, 2);

    std::vector<double> hid(hidden), delta_hid(hidden);
    std::vector<double> g_w1(w1.size()), g_b1(hidden), g_w2(hidden);

    for (int epoch = 0; epoch < epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        for (int start = 0; start < kToyTrain; start += batch) {
            const int end = std::min(start + batch, kToyTrain);
            const double inv = 1.0 / (end - start);
            std::fill(g_w1.begin(), g_w1.end(), 0.0);
            std::fill(g_b1.begin(), g_b1.end(), 0.0);
            std::fill(g_w2.begin(), g_w2.end(), 0.0);
            double g_b2 = 0.0;
            for (int s = start; s < end; ++s) {
                const double* row = &data.x[static_cast<std::size_t>(order[s]) * n_in];
                double logit = b2;
                for (int k = 0; k < hidden; ++k) {
                    double a = b1[k];
                    const double* wk = &w1[static_cast<std::size_t>(k) * n_in];
                    for (int j = 0; j < n_in; ++j) a += wk[j] * row[j];
                    hid[k] = std::tanh(a);
                    logit += w2[k] * hid[k];
                }
                const double p = sigmoid(std::clamp(logit, -30.0, 30.0));
                const double err = p - data.y[order[s]];
                g_b2 += err;
                for (int k = 0; k < hidden; ++k) {
                    g_w2[k] += err * hid[k];
                    delta_hid[k] = err * w2[k] * (1.0 - hid[k] * hid[k]);
                    g_b1[k] += delta_hid[k];
                    double* gk = &g_w1[static_cast<std::size_t>(k) * n_in];
                    for (int j = 0; j < n_in; ++j) gk[j] += delta_hid[k] * row[j];
                }
            }
            auto step = [&](double& w, double& v, double g) {
                v = momentum * v - lr * (g + l2 * w);
                w += v;
            };
            for (std::size_t i = 0; i < w1.size(); ++i) step(w1[i], v_w1[i], g_w1[i] * inv);
            for (int k = 0; k < hidden; ++k) {
                step(b1[k], v_b1[k], g_b1[k] * inv);
                step(w2[k], v_w2[k], g_w2[k] * inv);
            }
            step(b2, v_b2, g_b2 * inv);
        }
    }

    // validation binary cross-entropy
    double loss = 0.0;
    int n_val = 0;
    for (int i = kToyTrain; i < kToySamples; ++i, ++n_val) {
        const double* row = &data.x[static_cast<std::size_t>(i) * n_in];
        double logit = b2;
        for (int k = 0; k < hidden; ++k) {
            double a = b1[k];
            const double* wk = &w1[static_cast<std::size_t>(k) * n_in];
            for (int j = 0; j < n_in; ++j) a += wk[j] * row[j];
            logit += w2[k] * std::tanh(a);
        }
        const double p = sigmoid(std::clamp(logit, -30.0, 30.0));
        const double y = data.y[i];
        loss -= y * std::log(std::max(p, 1e-12)) + (1.0 - y) * std::log(std::max(1.0 - p, 1e-12));
    }
    loss /= n_val;
    if (!std::isfinite(loss)) loss = 30.0;  // divergence guard; keeps the objective finite
    return loss;
}

Objective make_objective(const std::string& name) {
    if (name == "booth") {
        return Objective(name, make_space({"x1", "x2"}, {-10, -10}, {10, 10}), eval_booth,
                         {{{1.0, 3.0}, 0.0}});
    }
    if (name == "matyas") {
        return Objective(name, make_space({"x1", "x2"}, {-10, -10}, {10, 10}), eval_matyas,
                         {{{0.0, 0.0}, 0.0}});
    }
    if (name == "himmelblau") {
        return Objective(name, make_space({"x1", "x2"}, {-5, -5}, {5, 5}), eval_himmelblau,
                         {{{3.0, 2.0}, 0.0},
                          {{-2.805118086952745, 3.131312518250573}, 0.0},
                          {{-3.779310253377747, -3.283185991286170}, 0.0},
                          {{3.584428340330492, -1.848126526964404}, 0.0}});
    }
    if (name == "holder") {
        const double v = -19.20850256788675;
        return Objective(name, make_space({"x1", "x2"}, {-10, -10}, {10, 10}), eval_holder_table,
                         {{{8.05502347605272, 9.66459002316199}, v},
                          {{-8.05502347605272, 9.66459002316199}, v},
                          {{8.05502347605272, -9.66459002316199}, v},
                          {{-8.05502347605272, -9.66459002316199}, v}});
    }
    if (name == "cross") {
        const double v = -2.062611870822739;
        const double c = 1.349406608602084;
        return Objective(name, make_space({"x1", "x2"}, {-10, -10}, {10, 10}), eval_cross_in_tray,
                         {{{c, c}, v}, {{-c, c}, v}, {{c, -c}, v}, {{-c, -c}, v}});
    }
    if (name == "toy-hpo") {
        return Objective(name,
                         make_space({"log10_lr", "hidden_units", "epochs", "batch_frac",
                                     "log10_l2", "momentum"},
                                    {-4.0, 4.0, 5.0, 0.05, -6.0, 0.0},
                                    {-1.0, 64.0, 50.0, 1.0, -2.0, 0.99}),
                         eval_toy_hpo, {}, /*cheap_ground_truth=*/false);
    }
    throw ConfigError("unknown problem '" + name + "'");
}

std::vector<std::string> problem_names() {
    return {"booth", "matyas", "himmelblau", "holder", "cross", "toy-hpo"};
}

} // namespace tnt
