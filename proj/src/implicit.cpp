#include <cmath>
#include <limits>
#include <sstream>

#include "visc/error.hpp"
#include "visc/solvers.hpp"

namespace visc {

void ImplicitConfig::validate(const Problem& problem) const {
  if (t_values.empty()) throw Error(ErrorKind::Parameter, "implicit path needs t values");
  for (std::size_t i = 0; i < t_values.size(); ++i) {
    const double t = t_values[i];
    if (!(t > 0.0 && t <= 1.0)) {
      throw Error(ErrorKind::Parameter, "t values must lie in (0, 1]");
    }
    if (i > 0 && !(t < t_values[i - 1])) {
      throw Error(ErrorKind::Parameter, "t values must be strictly decreasing");
    }
  }
  if (!lambda_of_t) throw Error(ErrorKind::Parameter, "implicit path needs lambda(t)");
  if (!(a > 0.0 && a <= b && b < 2.0 * problem.nu())) {
    std::ostringstream os;
    os << "implicit step bounds [" << a << ", " << b << "] must satisfy 0 < a <= b < 2nu = "
       << 2.0 * problem.nu();
    throw Error(ErrorKind::Parameter, os.str());
  }
  if (!(inner_tol > 0.0)) throw Error(ErrorKind::Parameter, "inner_tol must be positive");
  if (inner_max_iter == 0) throw Error(ErrorKind::Parameter, "inner_max_iter must be >= 1");
  if (x1.dim() != problem.dim()) throw Error(ErrorKind::Dimension, "x1 has wrong dimension");
}

ImplicitSolution implicit_solve(double t, const ImplicitConfig& cfg, const Problem& problem,
                                const Vector& start) {
  if (!(t > 0.0 && t <= 1.0)) throw Error(ErrorKind::Parameter, "implicit_solve needs t in (0, 1]");
  if (start.dim() != problem.dim()) throw Error(ErrorKind::Dimension, "start has wrong dimension");
  const double lambda = cfg.lambda_of_t(t);
  if (!(lambda >= cfg.a && lambda <= cfg.b)) {
    std::ostringstream os;
    os << "lambda(" << t << ") = " << lambda << " outside [" << cfg.a << ", " << cfg.b << "]";
    throw Error(ErrorKind::Parameter, os.str());
  }

  // T_{t,λ} contracts with factor q = 1 − σt, so ‖x_{j+1} − x*‖ ≤ q/(1 − q)·‖x_{j+1} − x_j‖.
  const double contraction = 1.0 - problem.sigma() * t;
  const double bound_factor = contraction / (1.0 - contraction);

  Vector x = start;
  double step = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j <= cfg.inner_max_iter; ++j) {
    Vector next = viscosity_map(x, problem, t, lambda);
    step = distance(next, x);
    x = std::move(next);
    if (step * bound_factor <= cfg.inner_tol) {
      const double residual = distance(x, viscosity_map(x, problem, t, lambda));
      return {t, lambda, x, residual, j, std::nullopt};
    }
  }
  std::ostringstream os;
  os << "implicit_solve(t=" << t << ") did not reach tol " << cfg.inner_tol << " in "
     << cfg.inner_max_iter << " iterations (last step " << step << ")";
  throw NonConvergenceError(cfg.inner_max_iter, step, os.str());
}

ImplicitSolution implicit_solve(double t, const ImplicitConfig& cfg, const Problem& problem) {
  return implicit_solve(t, cfg, problem, cfg.x1);
}

std::vector<ImplicitSolution> implicit_path(const ImplicitConfig& cfg, const Problem& problem,
                                            const std::optional<Vector>& reference) {
  cfg.validate(problem);
  std::vector<ImplicitSolution> path;
  path.reserve(cfg.t_values.size());
  Vector start = cfg.x1;
  for (double t : cfg.t_values) {
    ImplicitSolution sol = implicit_solve(t, cfg, problem, start);
    if (reference) sol.distance_to_reference = distance(sol.x, *reference);
    start = sol.x;
    path.push_back(std::move(sol));
  }
  return path;
}

}  // namespace visc
