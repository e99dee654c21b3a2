#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace entmon::detail {

/// Returns false when the point is outside the domain (the line search backs off).
using SmoothObjective =
    std::function<bool(std::span<const double> x, double& value, std::span<double> gradient)>;

struct LbfgsOptions {
  int max_iterations = 1000;
  double function_tolerance = 1e-15;
  double gradient_tolerance = 1e-13;
  double parameter_tolerance = 1e-15;
};

struct LbfgsOutcome {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// L-BFGS with Wolfe line search, in place on x.
LbfgsOutcome minimize_lbfgs(const SmoothObjective& objective, std::vector<double>& x,
                            const LbfgsOptions& options = {});

}  // namespace entmon::detail
