#pragma once

#include <functional>
#include <vector>

namespace tnt {

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
};

/// Derivative-free simplex minimization (Nelder-Mead with standard
/// reflection/expansion/contraction coefficients). Stops on the evaluation
/// budget or when the simplex value spread falls below f_tol.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0, double initial_step, int max_evals,
                             double f_tol = 1e-10);

} // namespace tnt
