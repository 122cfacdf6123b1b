#include "visc/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "overloaded.hpp"
#include "visc/error.hpp"

namespace visc {

namespace {

using detail::overloaded;

// Numeric verdict thresholds for table-defined schedules.
constexpr double kDivergenceWitness = 0.5;  // N·α_N at or above this suggests Σα = ∞
constexpr double kTailRatioLimit = 0.05;    // max relative change over the last 10%
constexpr double kFlatVariation = 1e-12;

void require_index(std::size_t k) {
  if (k == 0) throw Error(ErrorKind::Index, "schedule indices start at k = 1");
}

double table_at(const TableValues& t, std::size_t k, const char* what) {
  require_index(k);
  if (k > t.values.size()) {
    throw Error(ErrorKind::Index, std::string(what) + " table has " +
                                      std::to_string(t.values.size()) + " entries, asked for k = " +
                                      std::to_string(k));
  }
  return t.values[k - 1];
}

void require_table(const TableValues& t, double lo, double hi, const char* what) {
  if (t.values.empty()) throw Error(ErrorKind::Parameter, std::string(what) + " table is empty");
  for (double v : t.values) {
    if (!std::isfinite(v) || v < lo || v > hi) {
      std::ostringstream os;
      os << what << " table entry " << v << " outside [" << lo << ", " << hi << "]";
      throw Error(ErrorKind::Parameter, os.str());
    }
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

ScheduleSpec::ScheduleSpec(AlphaRule alpha, LambdaRule lambda, std::optional<StepBounds> bounds)
    : alpha_(std::move(alpha)), lambda_(std::move(lambda)), bounds_{0.0, 0.0} {
  std::visit(overloaded{
                 [](const PowerAlpha& p) {
                   if (!(p.theta > 0.0) || !std::isfinite(p.theta)) {
                     throw Error(ErrorKind::Parameter, "power schedule needs theta > 0");
                   }
                 },
                 [](const TableValues& t) { require_table(t, 0.0, 1.0, "alpha"); },
             },
             alpha_);
  const auto inf = std::numeric_limits<double>::max();
  std::visit(overloaded{
                 [&](const ConstantValue& c) {
                   if (!std::isfinite(c.value) || c.value < 0.0) {
                     throw Error(ErrorKind::Parameter, "constant lambda must be finite and >= 0");
                   }
                   bounds_ = {c.value, c.value};
                 },
                 [&](const TableValues& t) {
                   require_table(t, 0.0, inf, "lambda");
                   const auto [lo, hi] = std::minmax_element(t.values.begin(), t.values.end());
                   bounds_ = {*lo, *hi};
                 },
             },
             lambda_);
  if (bounds) bounds_ = *bounds;
  if (!(bounds_.a > 0.0) || !(bounds_.a <= bounds_.b) || !std::isfinite(bounds_.b)) {
    throw Error(ErrorKind::Parameter, "step bounds need 0 < a <= b");
  }
}

ScheduleSpec ScheduleSpec::power(double theta, double lambda) {
  return ScheduleSpec(PowerAlpha{theta}, ConstantValue{lambda});
}

std::optional<std::size_t> ScheduleSpec::length() const {
  std::optional<std::size_t> n;
  auto shorten = [&n](std::size_t m) { n = n ? std::min(*n, m) : m; };
  if (const auto* t = std::get_if<TableValues>(&alpha_)) shorten(t->values.size());
  if (const auto* t = std::get_if<TableValues>(&lambda_)) shorten(t->values.size());
  return n;
}

std::string ScheduleSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const PowerAlpha& p) { os << "alpha=power(" << p.theta << ")"; },
                 [&](const TableValues& t) { os << "alpha=table(" << t.values.size() << ")"; },
             },
             alpha_);
  std::visit(overloaded{
                 [&](const ConstantValue& c) { os << ";lambda=constant(" << c.value << ")"; },
                 [&](const TableValues& t) { os << ";lambda=table(" << t.values.size() << ")"; },
             },
             lambda_);
  os << ";bounds=[" << bounds_.a << "," << bounds_.b << "]";
  return os.str();
}

double alpha_at(const ScheduleSpec& s, std::size_t k) {
  require_index(k);
  return std::visit(overloaded{
                        [k](const PowerAlpha& p) {
                          return std::pow(static_cast<double>(k), -p.theta);
                        },
                        [k](const TableValues& t) { return table_at(t, k, "alpha"); },
                    },
                    s.alpha());
}

double lambda_at(const ScheduleSpec& s, std::size_t k) {
  require_index(k);
  return std::visit(overloaded{
                        [](const ConstantValue& c) { return c.value; },
                        [k](const TableValues& t) { return table_at(t, k, "lambda"); },
                    },
                    s.lambda());
}

bool lambda_out_of_bounds(const ScheduleSpec& s, double lambda) {
  return lambda < s.bounds().a || lambda > s.bounds().b;
}

BetaRule validated_beta(BetaRule rule) {
  std::visit(overloaded{
                 [](const ConstantValue& c) {
                   if (!(c.value >= 0.0 && c.value < 1.0)) {
                     throw Error(ErrorKind::Parameter, "beta must lie in [0, 1)");
                   }
                 },
                 [](const TableValues& t) {
                   require_table(t, 0.0, 1.0, "beta");
                   if (*std::max_element(t.values.begin(), t.values.end()) >= 1.0) {
                     throw Error(ErrorKind::Parameter, "beta table entries must be < 1");
                   }
                 },
             },
             rule);
  return rule;
}

double beta_at(const BetaRule& rule, std::size_t k) {
  require_index(k);
  return std::visit(overloaded{
                        [](const ConstantValue& c) { return c.value; },
                        [k](const TableValues& t) { return table_at(t, k, "beta"); },
                    },
                    rule);
}

std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t n) noexcept {
  std::uint64_t z = seed + n * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

Vector perturbation_at(const PerturbationSpec& p, std::size_t k, std::size_t dim) {
  require_index(k);
  return std::visit(overloaded{
                        [dim](const NoPerturbation&) { return Vector::zeros(dim); },
                        [k, dim](const UniformSquareOverKsq& u) {
                          const double scale = 1.0 / (static_cast<double>(k) * static_cast<double>(k));
                          std::vector<double> e(dim);
                          for (std::size_t j = 0; j < dim; ++j) {
                            const std::uint64_t n = (k - 1) * dim + j + 1;
                            const double x = 2.0 * unit_interval(splitmix64_at(u.seed, n)) - 1.0;
                            e[j] = x * scale;
                          }
                          return Vector(std::move(e));
                        },
                    },
                    p);
}

std::optional<std::uint64_t> perturbation_seed(const PerturbationSpec& p) {
  if (const auto* u = std::get_if<UniformSquareOverKsq>(&p)) return u->seed;
  return std::nullopt;
}

std::string describe(const PerturbationSpec& p) {
  return std::visit(overloaded{
                        [](const NoPerturbation&) -> std::string { return "none"; },
                        [](const UniformSquareOverKsq& u) -> std::string {
                          return "uniform_square_over_k2(seed=" + std::to_string(u.seed) + ")";
                        },
                    },
                    p);
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::AnalyticallySatisfied: return "analytically-satisfied";
    case Verdict::NumericallyConsistent: return "numerically-consistent";
    case Verdict::Violated: return "violated";
  }
  return "unknown";
}

bool HypothesisReport::all_satisfied() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const HypothesisCheck& c) { return c.verdict == Verdict::Violated; });
}

HypothesisReport hypothesis_report(const ScheduleSpec& s, const PerturbationSpec& p,
                                   std::size_t N, double nu, std::size_t dim) {
  if (N < 2) throw Error(ErrorKind::Parameter, "hypothesis_report needs N >= 2");
  if (!(nu > 0.0)) throw Error(ErrorKind::Parameter, "hypothesis_report needs nu > 0");
  if (const auto len = s.length()) N = std::min(N, *len);
  if (N < 2) throw Error(ErrorKind::Parameter, "schedule table shorter than 2 entries");

  std::vector<double> alpha(N), lambda(N);
  for (std::size_t k = 1; k <= N; ++k) {
    alpha[k - 1] = alpha_at(s, k);
    lambda[k - 1] = lambda_at(s, k);
  }

  HypothesisEvidence ev;
  ev.horizon = N;
  const std::size_t half = N / 2;
  const std::size_t tail_start = N - std::max<std::size_t>(1, N / 10);
  double tail_alpha_ratio = 0.0;
  double tail_lambda_ratio = 0.0;
  ev.lambda_liminf = lambda[half];
  ev.lambda_limsup = lambda[half];
  for (std::size_t i = 0; i < N; ++i) {
    ev.alpha_partial_sum += alpha[i];
    if (i + 1 < N) {
      const double da = std::abs(alpha[i + 1] - alpha[i]);
      const double dl = std::abs(lambda[i + 1] - lambda[i]);
      ev.alpha_abs_variation += da;
      ev.lambda_abs_variation += dl;
      if (i >= tail_start - 1 && alpha[i] > 0.0) {
        tail_alpha_ratio = std::max(tail_alpha_ratio, da / alpha[i]);
        tail_lambda_ratio = std::max(tail_lambda_ratio, dl / alpha[i]);
      }
    }
    if (i >= half) {
      ev.lambda_liminf = std::min(ev.lambda_liminf, lambda[i]);
      ev.lambda_limsup = std::max(ev.lambda_limsup, lambda[i]);
    }
    ev.perturbation_sum += norm(perturbation_at(p, i + 1, dim));
  }
  ev.alpha_tail_ratio =
      alpha[N - 2] > 0.0 ? std::abs(alpha[N - 1] - alpha[N - 2]) / alpha[N - 2] : 0.0;

  HypothesisReport report;
  report.evidence = ev;
  const double two_nu = 2.0 * nu;

  // (i)
  {
    HypothesisCheck c{"i", "alpha_k -> 0 and sum alpha_k = inf", Verdict::Violated, ""};
    if (const auto* pw = std::get_if<PowerAlpha>(&s.alpha())) {
      c.verdict = pw->theta <= 1.0 ? Verdict::AnalyticallySatisfied : Verdict::Violated;
      c.evidence = "power theta=" + fmt(pw->theta) + (pw->theta <= 1.0 ? " <= 1 (p-series diverges)"
                                                                       : " > 1 (p-series converges)");
    } else {
      const double witness = static_cast<double>(N) * alpha[N - 1];
      const bool decays = alpha[N - 1] < alpha[0] && alpha[N - 1] <= alpha[half];
      c.verdict = decays && witness >= kDivergenceWitness ? Verdict::NumericallyConsistent
                                                          : Verdict::Violated;
      c.evidence = "table: N*alpha_N=" + fmt(witness) + ", alpha_N=" + fmt(alpha[N - 1]);
    }
    c.evidence += ", partial sum=" + fmt(ev.alpha_partial_sum);
    report.checks.push_back(std::move(c));
  }
  // (ii)
  {
    HypothesisCheck c{"ii", "0 < liminf lambda_k <= limsup lambda_k < 2nu", Verdict::Violated, ""};
    const bool inside = ev.lambda_liminf > 0.0 && ev.lambda_limsup < two_nu;
    if (std::holds_alternative<ConstantValue>(s.lambda())) {
      c.verdict = inside ? Verdict::AnalyticallySatisfied : Verdict::Violated;
    } else {
      c.verdict = inside ? Verdict::NumericallyConsistent : Verdict::Violated;
    }
    c.evidence = "liminf~" + fmt(ev.lambda_liminf) + ", limsup~" + fmt(ev.lambda_limsup) +
                 ", 2nu=" + fmt(two_nu);
    report.checks.push_back(std::move(c));
  }
  // (iii)
  {
    HypothesisCheck c{"iii", "(alpha_{k+1}-alpha_k)/alpha_k -> 0 or sum |alpha_{k+1}-alpha_k| < inf",
                      Verdict::Violated, ""};
    if (std::holds_alternative<PowerAlpha>(s.alpha())) {
      // k^{-θ} is monotone and bounded, so its total variation is at most 1.
      c.verdict = Verdict::AnalyticallySatisfied;
    } else {
      c.verdict = tail_alpha_ratio <= kTailRatioLimit ? Verdict::NumericallyConsistent
                                                      : Verdict::Violated;
    }
    c.evidence = "tail ratio=" + fmt(ev.alpha_tail_ratio) +
                 ", variation=" + fmt(ev.alpha_abs_variation);
    report.checks.push_back(std::move(c));
  }
  // (iv)
  {
    HypothesisCheck c{"iv", "(lambda_{k+1}-lambda_k)/alpha_k -> 0 or sum |lambda_{k+1}-lambda_k| < inf",
                      Verdict::Violated, ""};
    if (std::holds_alternative<ConstantValue>(s.lambda())) {
      c.verdict = Verdict::AnalyticallySatisfied;
    } else {
      const bool flat_tail = tail_lambda_ratio <= kTailRatioLimit;
      c.verdict = flat_tail || ev.lambda_abs_variation <= kFlatVariation
                      ? Verdict::NumericallyConsistent
                      : Verdict::Violated;
    }
    c.evidence = "variation=" + fmt(ev.lambda_abs_variation);
    report.checks.push_back(std::move(c));
  }
  // (v)
  {
    HypothesisCheck c{"v", "||e_k||/alpha_k -> 0 or sum ||e_k|| < inf",
                      Verdict::AnalyticallySatisfied, ""};
    c.evidence = std::holds_alternative<NoPerturbation>(p)
                     ? std::string("e_k = 0")
                     : "||e_k|| <= sqrt(dim)/k^2, summable; partial sum=" + fmt(ev.perturbation_sum);
    report.checks.push_back(std::move(c));
  }
  return report;
}

}  // namespace visc
