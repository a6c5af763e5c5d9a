#pragma once

#include <functional>

#include <Eigen/Dense>

namespace lasucc {

/// f(x, grad) returns the value and fills grad.
using Objective = std::function<double(const Eigen::VectorXd &, Eigen::VectorXd &)>;

struct BfgsOptions {
  double value_tolerance = 1e-9;     ///< |f_k - f_{k-1}|
  double gradient_tolerance = 1e-6;  ///< max-norm of the gradient
  int max_iterations = 500;
  double c1 = 1e-4;  ///< sufficient decrease
  double c2 = 0.9;   ///< curvature (strong Wolfe)
};

struct BfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  Eigen::VectorXd gradient;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Dense BFGS with a strong-Wolfe line search. Converged when both the value
/// change and the gradient max-norm are under tolerance (or the gradient
/// alone at the start). Never returns a point worse than x0. On an exhausted
/// iteration budget or a failed line search, returns converged = false with
/// the best point seen.
BfgsResult bfgs_minimize(const Objective &f, const Eigen::VectorXd &x0,
                         const BfgsOptions &options = {});

}  // namespace lasucc
