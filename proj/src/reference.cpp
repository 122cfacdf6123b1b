#include <cmath>
#include <sstream>

#include "visc/error.hpp"
#include "visc/projections.hpp"
#include "visc/solvers.hpp"

namespace visc {

Vector reference_qstar(const Problem& problem, double tol) {
  if (!problem.omega()) {
    throw Error(ErrorKind::Configuration, "reference_qstar needs the solution set Omega");
  }
  if (!(tol > 0.0)) throw Error(ErrorKind::Parameter, "reference_qstar needs tol > 0");
  const ConvexSet& omega = *problem.omega();
  const double rho = problem.rho();

  Vector x = project(omega, Vector::zeros(problem.dim()));
  if (rho == 0.0) return project(omega, problem.f().apply(x));

  const double step_tol = tol * (1.0 - rho) / rho;
  constexpr std::size_t kMaxIter = 1'000'000;
  double step = 0.0;
  for (std::size_t it = 0; it < kMaxIter; ++it) {
    Vector next = project(omega, problem.f().apply(x));
    step = distance(next, x);
    x = std::move(next);
    if (step <= step_tol) return x;
  }
  std::ostringstream os;
  os << "reference_qstar: no convergence to tol " << tol << " (last step " << step << ")";
  throw NonConvergenceError(kMaxIter, step, os.str());
}

std::vector<double> xu_recursion(double a1, const Sequence& gamma, const Sequence& r,
                                 const Sequence& delta, std::size_t N) {
  if (!(a1 >= 0.0) || !std::isfinite(a1)) throw Error(ErrorKind::Parameter, "a1 must be >= 0");
  if (N == 0) return {};
  std::vector<double> a;
  a.reserve(N);
  a.push_back(a1);
  for (std::size_t n = 1; n < N; ++n) {
    const double g = gamma(n);
    if (!(g >= 0.0 && g <= 1.0)) {
      throw Error(ErrorKind::Parameter, "gamma_" + std::to_string(n) + " outside [0, 1]");
    }
    const double prev = a.back();
    a.push_back((1.0 - g) * prev + g * r(n) + delta(n));
  }
  return a;
}

}  // namespace visc
