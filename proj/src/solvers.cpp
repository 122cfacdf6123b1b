#include "visc/solvers.hpp"

#include <cmath>
#include <sstream>

#include "overloaded.hpp"
#include "visc/digest.hpp"
#include "visc/error.hpp"
#include "visc/projections.hpp"

namespace visc {

namespace {

using detail::overloaded;

/// S P_Q(x − λ A x)
Vector backward_part(const Vector& x, const Problem& problem, double lambda, Diagnostics* diag) {
  return problem.S().apply(theta_map(x, problem, lambda, diag));
}

void require_anchor(const Vector& u, const Problem& problem, const char* name) {
  if (u.dim() != problem.dim()) {
    throw Error(ErrorKind::Dimension, std::string(name) + " anchor has wrong dimension");
  }
  if (!contains(problem.set(), u, kMembershipTol)) {
    throw Error(ErrorKind::Parameter, std::string(name) + " anchor must lie in Q");
  }
}

std::string vector_text(const Vector& v) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (std::size_t i = 0; i < v.dim(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

std::string beta_text(const BetaRule& beta) {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const ConstantValue& c) { os << "beta=constant(" << c.value << ")"; },
                 [&](const TableValues& t) { os << "beta=table(" << t.values.size() << ")"; },
             },
             beta);
  return os.str();
}

}  // namespace

std::string algorithm_name(const Algorithm& a) {
  return std::visit(overloaded{
                        [](const ExplicitViscosity&) -> std::string { return "explicit"; },
                        [](const Perturbed&) -> std::string { return "perturbed"; },
                        [](const TakahashiToyoda&) -> std::string { return "takahashi_toyoda"; },
                        [](const Halpern&) -> std::string { return "halpern"; },
                        [](const YaoOuter&) -> std::string { return "yao_outer"; },
                        [](const YaoInner&) -> std::string { return "yao_inner"; },
                    },
                    a);
}

void SolverConfig::validate() const {
  if (x1.dim() != problem.dim()) throw Error(ErrorKind::Dimension, "x1 has wrong dimension");
  if (!contains(problem.set(), x1, kMembershipTol)) {
    throw Error(ErrorKind::Parameter, "x1 must lie in Q");
  }
  if (n_max == 0) throw Error(ErrorKind::Parameter, "n_max must be >= 1");
  if (const auto len = schedule.length(); len && *len < n_max) {
    throw Error(ErrorKind::Parameter, "schedule table has " + std::to_string(*len) +
                                          " entries, n_max is " + std::to_string(n_max));
  }
  if (reference && reference->dim() != problem.dim()) {
    throw Error(ErrorKind::Dimension, "reference point has wrong dimension");
  }
  if (stop) {
    if (stop->reference.dim() != problem.dim()) {
      throw Error(ErrorKind::Dimension, "stop reference has wrong dimension");
    }
    if (!(stop->rel_err_target > 0.0)) {
      throw Error(ErrorKind::Parameter, "rel_err_target must be positive");
    }
    if (norm(stop->reference) == 0.0) {
      throw Error(ErrorKind::Parameter, "relative error needs a nonzero reference");
    }
  }
  std::visit(overloaded{
                 [](const ExplicitViscosity&) {},
                 [](const Perturbed&) {},
                 [](const TakahashiToyoda&) {},
                 [&](const Halpern& h) { require_anchor(h.anchor, problem, "halpern"); },
                 [&](const YaoOuter& y) {
                   require_anchor(y.anchor, problem, "yao_outer");
                   (void)validated_beta(y.beta);
                 },
                 [&](const YaoInner& y) {
                   require_anchor(y.anchor, problem, "yao_inner");
                   (void)validated_beta(y.beta);
                 },
             },
             algorithm);
}

std::string SolverConfig::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "algorithm=" << algorithm_name(algorithm);
  std::visit(overloaded{
                 [](const ExplicitViscosity&) {},
                 [](const Perturbed&) {},
                 [](const TakahashiToyoda&) {},
                 [&](const Halpern& h) { os << ";anchor=" << vector_text(h.anchor); },
                 [&](const YaoOuter& y) {
                   os << ";anchor=" << vector_text(y.anchor) << ";" << beta_text(y.beta);
                 },
                 [&](const YaoInner& y) {
                   os << ";anchor=" << vector_text(y.anchor) << ";" << beta_text(y.beta);
                 },
             },
             algorithm);
  os << ";" << problem.describe() << ";" << schedule.describe()
     << ";perturbation=" << visc::describe(perturbation) << ";prng=" << kPrngName
     << ";x1=" << vector_text(x1) << ";n_max=" << n_max;
  if (stop) os << ";stop=" << stop->rel_err_target;
  return os.str();
}

Vector explicit_step(const Vector& x, std::size_t k, const SolverConfig& cfg, Diagnostics* diag) {
  const double alpha = alpha_at(cfg.schedule, k);
  const double lambda = lambda_at(cfg.schedule, k);
  return convex_combination(alpha, cfg.problem.f().apply(x),
                            backward_part(x, cfg.problem, lambda, diag));
}

Vector perturbed_step(const Vector& x, std::size_t k, const SolverConfig& cfg, Diagnostics* diag) {
  return project(cfg.problem.set(),
                 explicit_step(x, k, cfg, diag) +
                     perturbation_at(cfg.perturbation, k, cfg.problem.dim()));
}

Vector algorithm_step(const Vector& x, std::size_t k, const SolverConfig& cfg, Diagnostics* diag) {
  const Problem& pb = cfg.problem;
  return std::visit(
      overloaded{
          [&](const ExplicitViscosity&) { return explicit_step(x, k, cfg, diag); },
          [&](const Perturbed&) { return perturbed_step(x, k, cfg, diag); },
          [&](const TakahashiToyoda&) {
            const double alpha = alpha_at(cfg.schedule, k);
            return convex_combination(alpha, x,
                                      backward_part(x, pb, lambda_at(cfg.schedule, k), diag));
          },
          [&](const Halpern& h) {
            const double alpha = alpha_at(cfg.schedule, k);
            return convex_combination(alpha, h.anchor,
                                      backward_part(x, pb, lambda_at(cfg.schedule, k), diag));
          },
          [&](const YaoOuter& y) {
            const double alpha = alpha_at(cfg.schedule, k);
            const Vector mixed = convex_combination(
                alpha, y.anchor, backward_part(x, pb, lambda_at(cfg.schedule, k), diag));
            return convex_combination(beta_at(y.beta, k), x, project(pb.set(), mixed));
          },
          [&](const YaoInner& y) {
            const double alpha = alpha_at(cfg.schedule, k);
            const Vector mixed = convex_combination(
                alpha, y.anchor, forward_step(x, pb.A(), lambda_at(cfg.schedule, k), diag));
            return convex_combination(beta_at(y.beta, k), x, pb.S().apply(project(pb.set(), mixed)));
          },
      },
      cfg.algorithm);
}

RunTrace run(const SolverConfig& cfg, const RunOptions& options) {
  cfg.validate();
  if (options.stride == 0) throw Error(ErrorKind::Parameter, "stride must be >= 1");

  Diagnostics diag(cfg.strict_schedule);
  const double two_nu = 2.0 * cfg.problem.nu();
  const StepBounds& bounds = cfg.schedule.bounds();
  if (bounds.b >= two_nu) {
    std::ostringstream os;
    os.precision(17);
    os << "step bounds [" << bounds.a << ", " << bounds.b << "] not inside (0, 2nu) = (0, "
       << two_nu << ")";
    diag.schedule_violation(os.str());
  }

  const std::optional<Vector>& ref = cfg.stop ? std::optional<Vector>(cfg.stop->reference)
                                               : cfg.reference;
  const double ref_norm = ref ? norm(*ref) : 0.0;
  const bool perturbed = std::holds_alternative<Perturbed>(cfg.algorithm);

  RunTrace trace{{}, {}, cfg.x1, std::nullopt, std::nullopt};
  trace.metadata.algorithm = algorithm_name(cfg.algorithm);
  trace.metadata.seed = perturbed ? perturbation_seed(cfg.perturbation) : std::nullopt;
  trace.metadata.config = cfg.describe();
  trace.metadata.config_digest = config_digest(trace.metadata.config);
  trace.rows.reserve(cfg.n_max / options.stride + 2);

  Vector x = cfg.x1;
  for (std::size_t k = 1;; ++k) {
    const double alpha = alpha_at(cfg.schedule, k);
    const double lambda = lambda_at(cfg.schedule, k);
    if (lambda_out_of_bounds(cfg.schedule, lambda)) {
      diag.schedule_violation("lambda_k outside the schedule bounds [a, b]");
    }
    const double e_norm = perturbed ? norm(perturbation_at(cfg.perturbation, k, x.dim())) : 0.0;
    std::optional<double> rel_err;
    if (ref) {
      rel_err = distance(x, *ref) / (ref_norm > 0.0 ? ref_norm : 1.0);
      if (!trace.min_rel_err || *rel_err < *trace.min_rel_err) {
        trace.min_rel_err = rel_err;
        trace.argmin_k = k;
      }
    }
    TraceRow row{k, x, alpha, lambda, e_norm, rel_err};
    const bool stop_now = cfg.stop && rel_err && *rel_err <= cfg.stop->rel_err_target;
    const bool last = k == cfg.n_max || stop_now;
    if (options.observer) options.observer(row);
    if ((k - 1) % options.stride == 0 || last) trace.rows.push_back(std::move(row));
    if (last) {
      trace.metadata.stopped_early = stop_now && k < cfg.n_max;
      trace.metadata.iterations = k;
      break;
    }

    try {
      x = algorithm_step(x, k, cfg, &diag);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NonFinite) throw;
      throw DivergenceError(k, x,
                            "iterate x_" + std::to_string(k + 1) + " is not finite (" +
                                trace.metadata.algorithm + ")");
    }
  }
  trace.final_x = x;
  trace.metadata.warnings = diag.warnings();
  return trace;
}

}  // namespace visc
