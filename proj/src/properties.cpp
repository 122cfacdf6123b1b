#include "visc/properties.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <variant>

#include "visc/projections.hpp"
#include "visc/trace_io.hpp"

namespace visc {

namespace {

class Sampler {
 public:
  Sampler(std::uint64_t seed, std::size_t dim, double radius)
      : engine_(seed), dist_(-radius, radius), dim_(dim) {}

  Vector next() {
    std::vector<double> v(dim_);
    for (double& c : v) c = dist_(engine_);
    return Vector(std::move(v));
  }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> dist_;
  std::size_t dim_;
};

struct Tracker {
  PropertyResult result;

  Tracker(std::string name, double tolerance) {
    result.name = std::move(name);
    result.tolerance = tolerance;
    result.worst = -std::numeric_limits<double>::infinity();
  }

  void observe(double violation) {
    ++result.samples;
    result.worst = std::max(result.worst, violation);
  }

  PropertyResult finish() {
    result.passed = result.worst <= result.tolerance;
    return result;
  }
};

void projection_checks(const std::string& label, const ConvexSet& set, Sampler& sampler,
                       std::size_t pairs, std::vector<PropertyResult>& out) {
  Tracker idem("projection_idempotence[" + label + "]", kEqualityTol);
  Tracker vari("variational_characterization[" + label + "]", 1e-10);
  Tracker firm("firm_nonexpansiveness[" + label + "]", 1e-10);
  for (std::size_t i = 0; i < pairs; ++i) {
    const Vector x = sampler.next();
    const Vector y = sampler.next();
    const Vector px = project(set, x);
    const Vector py = project(set, y);
    idem.observe(distance(project(set, px), px));
    vari.observe(inner(x - px, py - px));
    firm.observe(inner(px - py, px - py) - inner(x - y, px - py));
  }
  out.push_back(idem.finish());
  out.push_back(vari.finish());
  out.push_back(firm.finish());
}

}  // namespace

bool PropertyReport::all_passed() const {
  return std::all_of(results.begin(), results.end(),
                     [](const PropertyResult& r) { return r.passed; });
}

std::string PropertyReport::text() const {
  std::ostringstream os;
  for (const PropertyResult& r : results) {
    os << (r.passed ? "PASS " : "FAIL ") << r.name << " samples=" << r.samples
       << " worst=" << format_double(r.worst) << " tol=" << format_double(r.tolerance) << "\n";
  }
  return os.str();
}

PropertyReport run_property_suite(const Problem& problem, const PropertyOptions& options) {
  PropertyReport report;
  auto& out = report.results;
  const std::size_t n = options.pairs;
  Sampler sampler(options.seed, problem.dim(), options.sample_radius);

  projection_checks("Q", problem.set(), sampler, n, out);
  if (problem.omega()) projection_checks("Omega", *problem.omega(), sampler, n, out);

  const Mapping& A = problem.A();
  const double nu = problem.nu();
  for (double lambda : options.lambdas) {
    if (!(lambda > 0.0 && lambda <= 2.0 * nu)) continue;
    Tracker descent("descent_inequality[lambda=" + format_double(lambda) + "]", 1e-10);
    Tracker theta("theta_nonexpansive[lambda=" + format_double(lambda) + "]", 1e-10);
    for (std::size_t i = 0; i < n; ++i) {
      const Vector x = sampler.next();
      const Vector y = sampler.next();
      const Vector dA = A(x) - A(y);
      const Vector dF = forward_step(x, A, lambda) - forward_step(y, A, lambda);
      const double dxy = distance(x, y);
      descent.observe(inner(dF, dF) - (dxy * dxy - lambda * (2.0 * nu - lambda) * inner(dA, dA)));
      theta.observe(distance(theta_map(x, problem, lambda), theta_map(y, problem, lambda)) - dxy);
    }
    out.push_back(descent.finish());
    out.push_back(theta.finish());

    for (double t : options.t_values) {
      Tracker contraction("T_contraction[t=" + format_double(t) +
                              ",lambda=" + format_double(lambda) + "]",
                          1e-10);
      const double factor = 1.0 - problem.sigma() * t;
      for (std::size_t i = 0; i < n; ++i) {
        const Vector x = sampler.next();
        const Vector y = sampler.next();
        contraction.observe(
            distance(viscosity_map(x, problem, t, lambda), viscosity_map(y, problem, t, lambda)) -
            factor * distance(x, y));
      }
      out.push_back(contraction.finish());
    }
  }

  Tracker ism("ism_inequality[nu=" + format_double(nu) + "]", 1e-10);
  Tracker contraction_f("f_contraction[rho=" + format_double(problem.rho()) + "]", 1e-8);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector x = sampler.next();
    const Vector y = sampler.next();
    const Vector dA = A(x) - A(y);
    ism.observe(nu * inner(dA, dA) - inner(dA, x - y));
    const double dxy = distance(x, y);
    if (dxy > 0.0) contraction_f.observe(distance(problem.f()(x), problem.f()(y)) / dxy - problem.rho());
  }
  out.push_back(ism.finish());
  out.push_back(contraction_f.finish());

  if (const auto* ls = std::get_if<LeastSquaresGradient>(&A.kind())) {
    Tracker grad("gradient_finite_difference", 1e-6);
    const std::size_t d = problem.dim();
    for (std::size_t i = 0; i < n; ++i) {
      const Vector x = sampler.next();
      const Vector g = A(x);
      std::vector<double> fd(d);
      for (std::size_t j = 0; j < d; ++j) {
        const double h = 1e-5 * std::max(1.0, std::abs(x[j]));
        std::vector<double> plus(x.begin(), x.end());
        std::vector<double> minus(x.begin(), x.end());
        plus[j] += h;
        minus[j] -= h;
        fd[j] = (least_squares_value(ls->B, ls->b, Vector(plus)) -
                 least_squares_value(ls->B, ls->b, Vector(minus))) /
                (plus[j] - minus[j]);
      }
      grad.observe(distance(g, Vector(fd)) / std::max(norm(g), 1.0));
    }
    out.push_back(grad.finish());
  }
  return report;
}

}  // namespace visc
