#include "lbfgs.hpp"

#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>

namespace entmon::detail {

namespace {

class Adapter final : public ceres::FirstOrderFunction {
 public:
  Adapter(const SmoothObjective& f, int n) : f_(f), n_(n) {}

  bool Evaluate(const double* parameters, double* cost, double* gradient) const override {
    std::vector<double> scratch;
    std::span<double> g;
    if (gradient != nullptr) {
      g = std::span<double>(gradient, static_cast<std::size_t>(n_));
    } else {
      scratch.resize(static_cast<std::size_t>(n_));
      g = scratch;
    }
    return f_(std::span<const double>(parameters, static_cast<std::size_t>(n_)), *cost, g);
  }

  int NumParameters() const override { return n_; }

 private:
  const SmoothObjective& f_;
  int n_;
};

}  // namespace

LbfgsOutcome minimize_lbfgs(const SmoothObjective& objective, std::vector<double>& x,
                            const LbfgsOptions& options) {
  ceres::GradientProblem problem(new Adapter(objective, static_cast<int>(x.size())));
  ceres::GradientProblemSolver::Options opts;
  opts.line_search_direction_type = ceres::LBFGS;
  opts.max_num_iterations = options.max_iterations;
  opts.function_tolerance = options.function_tolerance;
  opts.gradient_tolerance = options.gradient_tolerance;
  opts.parameter_tolerance = options.parameter_tolerance;
  // Near-singular iterates need many contractions before a step is accepted.
  opts.min_line_search_step_size = 1e-30;
  opts.max_num_line_search_step_size_iterations = 100;
  opts.line_search_interpolation_type = ceres::BISECTION;
  opts.logging_type = ceres::SILENT;
  opts.minimizer_progress_to_stdout = false;
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(opts, problem, x.data(), &summary);
  return {summary.final_cost, static_cast<int>(summary.iterations.size()),
          summary.termination_type == ceres::CONVERGENCE};
}

}  // namespace entmon::detail
