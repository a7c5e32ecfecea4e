#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace tnt {

/// Squared-exponential kernel with one lengthscale per input dimension.
struct Kernel {
    std::vector<double> lengthscales;
    double signal_variance = 1.0;
    double noise_variance = 1e-6;

    double operator()(const std::vector<double>& a, const std::vector<double>& b) const;
};

/// Posterior mean / standard deviation in objective units.
struct Posterior {
    std::vector<double> mean;
    std::vector<double> std;
};

struct GpFitOptions {
    int restarts = 5;               ///< multi-start count (heuristic start + restarts-1 random)
    int max_evals_per_restart = 200;
    std::uint64_t seed = 0;         ///< seeds the random restart draws
    bool warm_start = false;        ///< additionally start from the model's current kernel
    /// Per-dimension scale used to bound lengthscales; data ranges are used when empty.
    std::vector<double> dim_ranges;
};

/// Exact GP regression with target standardization and a zero prior mean on
/// the standardized scale. Predictions are reported de-standardized; the
/// returned standard deviation is that of the latent function (noise-free).
class GpModel {
public:
    /// Fits hyperparameters by maximizing the log marginal likelihood with a
    /// multi-start direct search over log-parameters, then factorizes the
    /// kernel matrix. Ill-conditioned matrices get escalating diagonal jitter
    /// (1e-10 .. 1e-4), folded into the effective noise variance.
    void fit(const std::vector<std::vector<double>>& inputs, const std::vector<double>& targets,
             const GpFitOptions& opts = {});

    /// Rebuilds the factorization for the current kernel after the training
    /// set changed, without re-optimizing hyperparameters.
    void refit_with_current_kernel(const std::vector<std::vector<double>>& inputs,
                                   const std::vector<double>& targets);

    Posterior predict(const std::vector<std::vector<double>>& queries) const;
    Posterior predict_one(const std::vector<double>& x) const;

    /// log N(y_ref | mean(x), std(x)^2), variance floored at 1e-12.
    double log_likelihood_of_value(const std::vector<double>& x, double y_ref) const;

    /// Log marginal likelihood of the standardized training targets under the
    /// given kernel (independent of the fitted kernel).
    double log_marginal_likelihood(const Kernel& kernel) const;

    const Kernel& kernel() const { return kernel_; }
    std::size_t train_size() const { return static_cast<std::size_t>(train_inputs_.rows()); }
    std::size_t input_dims() const { return static_cast<std::size_t>(train_inputs_.cols()); }
    bool fitted() const { return fitted_; }

    const Eigen::MatrixXd& train_inputs() const { return train_inputs_; }
    const std::vector<double>& train_targets() const { return train_targets_raw_; }
    double target_mean() const { return y_mean_; }
    double target_std() const { return y_std_; }
    /// Fitted log marginal likelihood (standardized scale).
    double fitted_log_marginal() const { return fitted_lml_; }

    /// Restores a model from serialized hyperparameters and training data.
    static GpModel from_parts(const std::vector<std::vector<double>>& inputs,
                              const std::vector<double>& targets, const Kernel& kernel);

private:
    struct Factorization {
        Eigen::LLT<Eigen::MatrixXd> llt;
        Eigen::VectorXd alpha;
        double applied_jitter = 0.0;
        bool ok = false;
    };

    void set_data(const std::vector<std::vector<double>>& inputs,
                  const std::vector<double>& targets);
    Factorization factorize(const Kernel& kernel) const;
    double lml_of(const Factorization& fac) const;
    void adopt(const Kernel& kernel);

    Kernel kernel_;
    Eigen::MatrixXd train_inputs_;
    std::vector<double> train_targets_raw_;
    Eigen::VectorXd train_targets_std_;   // standardized targets
    double y_mean_ = 0.0;
    double y_std_ = 1.0;
    double fitted_lml_ = 0.0;

    Eigen::LLT<Eigen::MatrixXd> llt_;
    Eigen::VectorXd alpha_;
    bool fitted_ = false;
};

} // namespace tnt
