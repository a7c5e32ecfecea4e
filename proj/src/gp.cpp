#include "tnt/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tnt/errors.hpp"
#include "tnt/nelder_mead.hpp"
#include "tnt/rng.hpp"
#include "tnt/stats.hpp"

namespace tnt {

namespace {

constexpr double kJitterLadder[] = {0.0, 1e-10, 1e-8, 1e-6, 1e-4};
constexpr double kVarianceFloor = 1e-12;

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw NumericError("GP fit requires at least one training point");
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto d = static_cast<Eigen::Index>(rows.front().size());
    Eigen::MatrixXd m(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != d) {
            throw NumericError("GP training rows have inconsistent dimensions");
        }
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

/// Scaled squared distance between rows of X under per-dimension lengthscales.
Eigen::MatrixXd scaled_sqdist(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                              const std::vector<double>& ls) {
    Eigen::MatrixXd as = a, bs = b;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        as.col(j) /= ls[static_cast<std::size_t>(j)];
        bs.col(j) /= ls[static_cast<std::size_t>(j)];
    }
    Eigen::VectorXd an = as.rowwise().squaredNorm();
    Eigen::VectorXd bn = bs.rowwise().squaredNorm();
    Eigen::MatrixXd d = -2.0 * as * bs.transpose();
    d.colwise() += an;
    d.rowwise() += bn.transpose();
    return d.cwiseMax(0.0);
}

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                              const Kernel& k) {
    return k.signal_variance * (-0.5 * scaled_sqdist(a, b, k.lengthscales).array()).exp().matrix();
}

} // namespace

double Kernel::operator()(const std::vector<double>& a, const std::vector<double>& b) const {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = (a[j] - b[j]) / lengthscales[j];
        s += d * d;
    }
    return signal_variance * std::exp(-0.5 * s);
}

void GpModel::set_data(const std::vector<std::vector<double>>& inputs,
                       const std::vector<double>& targets) {
    if (inputs.size() != targets.size()) {
        throw NumericError("GP fit: inputs and targets have different lengths");
    }
    train_inputs_ = to_matrix(inputs);
    train_targets_raw_ = targets;
    y_mean_ = mean_of(targets);
    double var = population_variance(targets);
    y_std_ = std::sqrt(std::max(var, 0.0));
    if (!(y_std_ > 1e-12)) y_std_ = 1.0;  // constant targets: keep the scale identity
    train_targets_std_.resize(static_cast<Eigen::Index>(targets.size()));
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (!std::isfinite(targets[i])) throw NumericError("GP fit: non-finite training target");
        train_targets_std_(static_cast<Eigen::Index>(i)) = (targets[i] - y_mean_) / y_std_;
    }
}

GpModel::Factorization GpModel::factorize(const Kernel& kernel) const {
    Factorization fac;
    const Eigen::MatrixXd base = kernel_matrix(train_inputs_, train_inputs_, kernel);
    for (double jitter : kJitterLadder) {
        Eigen::MatrixXd k = base;
        k.diagonal().array() += kernel.noise_variance + jitter;
        fac.llt.compute(k);
        if (fac.llt.info() == Eigen::Success) {
            fac.alpha = fac.llt.solve(train_targets_std_);
            fac.applied_jitter = jitter;
            fac.ok = true;
            return fac;
        }
    }
    fac.ok = false;
    return fac;
}

double GpModel::lml_of(const Factorization& fac) const {
    const auto n = train_targets_std_.size();
    const double quad = train_targets_std_.dot(fac.alpha);
    const double logdet = fac.llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    return -0.5 * quad - logdet - 0.5 * n * std::log(2.0 * M_PI);
}

double GpModel::log_marginal_likelihood(const Kernel& kernel) const {
    Factorization fac = factorize(kernel);
    if (!fac.ok) return -std::numeric_limits<double>::infinity();
    return lml_of(fac);
}

void GpModel::adopt(const Kernel& kernel) {
    Factorization fac = factorize(kernel);
    if (!fac.ok) {
        throw NumericError("GP kernel matrix not positive definite after jitter escalation");
    }
    fitted_lml_ = lml_of(fac);
    kernel_ = kernel;
    kernel_.noise_variance += fac.applied_jitter;  // fold accepted jitter into the noise
    llt_ = std::move(fac.llt);
    alpha_ = std::move(fac.alpha);
    fitted_ = true;
}

void GpModel::refit_with_current_kernel(const std::vector<std::vector<double>>& inputs,
                                        const std::vector<double>& targets) {
    if (!fitted_) throw NumericError("refit_with_current_kernel called before fit");
    Kernel k = kernel_;
    set_data(inputs, targets);
    adopt(k);
}

void GpModel::fit(const std::vector<std::vector<double>>& inputs,
                  const std::vector<double>& targets, const GpFitOptions& opts) {
    const bool had_kernel = fitted_;
    const Kernel previous = kernel_;
    set_data(inputs, targets);
    const auto d = static_cast<std::size_t>(train_inputs_.cols());

    // Scale that anchors the lengthscale search: caller-provided per-dimension
    // ranges when available, otherwise the span of the training data.
    std::vector<double> ranges(d, 1.0);
    if (opts.dim_ranges.size() == d) {
        ranges = opts.dim_ranges;
    } else {
        for (std::size_t j = 0; j < d; ++j) {
            const auto col = train_inputs_.col(static_cast<Eigen::Index>(j));
            ranges[j] = col.maxCoeff() - col.minCoeff();
        }
    }
    for (double& r : ranges) r = std::max(r, 1e-6);

    // log-parameter vector layout: [log ls_0..d-1, log signal_var, log noise_var]
    std::vector<double> lo(d + 2), hi(d + 2);
    for (std::size_t j = 0; j < d; ++j) {
        lo[j] = std::log(1e-3 * ranges[j]);
        hi[j] = std::log(10.0 * ranges[j]);
    }
    lo[d] = std::log(1e-4);
    hi[d] = std::log(1e4);
    lo[d + 1] = std::log(1e-8);
    hi[d + 1] = std::log(1.0);

    auto unpack = [&](const std::vector<double>& p) {
        Kernel k;
        k.lengthscales.resize(d);
        for (std::size_t j = 0; j < d; ++j) k.lengthscales[j] = std::exp(p[j]);
        k.signal_variance = std::exp(p[d]);
        k.noise_variance = std::exp(p[d + 1]);
        return k;
    };
    auto objective = [&](const std::vector<double>& p) {
        double violation = 0.0;
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (p[j] < lo[j]) violation += lo[j] - p[j];
            if (p[j] > hi[j]) violation += p[j] - hi[j];
        }
        if (violation > 0.0) return 1e10 * (1.0 + violation);
        const double lml = log_marginal_likelihood(unpack(p));
        return std::isfinite(lml) ? -lml : 1e12;
    };
    auto pack = [&](const Kernel& k) {
        std::vector<double> p(d + 2);
        for (std::size_t j = 0; j < d; ++j) {
            p[j] = std::clamp(std::log(k.lengthscales[j]), lo[j], hi[j]);
        }
        p[d] = std::clamp(std::log(k.signal_variance), lo[d], hi[d]);
        p[d + 1] = std::clamp(std::log(std::max(k.noise_variance, 1e-12)), lo[d + 1], hi[d + 1]);
        return p;
    };

    std::vector<std::vector<double>> starts;
    if (opts.warm_start && had_kernel && previous.lengthscales.size() == d) {
        starts.push_back(pack(previous));
    }
    if (opts.restarts >= 1) {
        Kernel heur;
        heur.lengthscales.resize(d);
        for (std::size_t j = 0; j < d; ++j) heur.lengthscales[j] = 0.5 * ranges[j];
        heur.signal_variance = 1.0;
        heur.noise_variance = 1e-4;
        starts.push_back(pack(heur));
        Rng rng(opts.seed, rng_stream::kHyperFit);
        for (int r = 1; r < opts.restarts; ++r) {
            std::vector<double> p(d + 2);
            for (std::size_t j = 0; j < d; ++j) {
                p[j] = rng.uniform(std::log(0.05 * ranges[j]), std::log(2.0 * ranges[j]));
            }
            p[d] = rng.uniform(std::log(0.1), std::log(10.0));
            p[d + 1] = rng.uniform(std::log(1e-7), std::log(1e-2));
            starts.push_back(std::move(p));
        }
    }
    if (starts.empty()) starts.push_back(pack(had_kernel ? previous : unpack(std::vector<double>(d + 2, 0.0))));

    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_p = starts.front();
    for (const auto& s : starts) {
        NelderMeadResult res = nelder_mead(objective, s, 0.3, opts.max_evals_per_restart);
        if (res.value < best) {
            best = res.value;
            best_p = res.x;
        }
    }
    adopt(unpack(best_p));
}

Posterior GpModel::predict(const std::vector<std::vector<double>>& queries) const {
    if (!fitted_) throw NumericError("GP predict called before fit");
    Posterior post;
    post.mean.reserve(queries.size());
    post.std.reserve(queries.size());
    if (queries.empty()) return post;
    const Eigen::MatrixXd q = to_matrix(queries);
    const Eigen::MatrixXd kxq = kernel_matrix(train_inputs_, q, kernel_);
    const Eigen::MatrixXd v = llt_.matrixL().solve(kxq);
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
        const double mean_std_scale = kxq.col(i).dot(alpha_);
        double var = kernel_.signal_variance - v.col(i).squaredNorm();
        var = std::max(var, 0.0);
        post.mean.push_back(y_mean_ + y_std_ * mean_std_scale);
        post.std.push_back(y_std_ * std::sqrt(var));
    }
    return post;
}

Posterior GpModel::predict_one(const std::vector<double>& x) const {
    return predict({x});
}

double GpModel::log_likelihood_of_value(const std::vector<double>& x, double y_ref) const {
    Posterior p = predict_one(x);
    const double var = std::max(p.std[0] * p.std[0], kVarianceFloor);
    return gaussian_log_density(y_ref, p.mean[0], var);
}

GpModel GpModel::from_parts(const std::vector<std::vector<double>>& inputs,
                            const std::vector<double>& targets, const Kernel& kernel) {
    GpModel m;
    m.set_data(inputs, targets);
    m.adopt(kernel);
    return m;
}

} // namespace tnt
