#include <doctest.h>

#include <cmath>
#include <numbers>

#include "visc/error.hpp"
#include "visc/schedules.hpp"

using namespace visc;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::Io;
}

const HypothesisCheck& check_of(const HypothesisReport& r, const std::string& id) {
  for (const HypothesisCheck& c : r.checks) {
    if (c.id == id) return c;
  }
  FAIL("missing hypothesis " << id);
  return r.checks.front();
}

}  // namespace

TEST_CASE("alpha_at examples") {
  CHECK(alpha_at(ScheduleSpec::power(0.9, 0.1), 1) == 1.0);
  CHECK(alpha_at(ScheduleSpec::power(0.5, 0.1), 4) == 0.5);
  CHECK(alpha_at(ScheduleSpec::power(1.0, 0.1), 10) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(kind_of([] { (void)alpha_at(ScheduleSpec::power(0.9, 0.1), 0); }) == ErrorKind::Index);
}

TEST_CASE("alpha is strictly decreasing") {
  for (double theta : {0.1, 0.5, 0.9, 1.0}) {
    const ScheduleSpec s = ScheduleSpec::power(theta, 0.1);
    double prev = alpha_at(s, 1);
    for (std::size_t k = 2; k <= 6000; ++k) {
      const double a = alpha_at(s, k);
      REQUIRE(a < prev);
      REQUIRE(a > 0.0);
      prev = a;
    }
  }
}

TEST_CASE("lambda_at examples") {
  const ScheduleSpec c = ScheduleSpec::power(0.9, 0.1);
  CHECK(lambda_at(c, 1) == 0.1);
  CHECK(lambda_at(c, 6000) == 0.1);
  const ScheduleSpec t(PowerAlpha{1.0}, TableValues{{0.1, 0.15}});
  CHECK(lambda_at(t, 2) == 0.15);
  CHECK(t.bounds().a == 0.1);
  CHECK(t.bounds().b == 0.15);
  CHECK(kind_of([&] { (void)lambda_at(t, 3); }) == ErrorKind::Index);
  const ScheduleSpec ta(TableValues{{1.0, 0.5}}, ConstantValue{0.1});
  CHECK(alpha_at(ta, 2) == 0.5);
  CHECK(kind_of([&] { (void)alpha_at(ta, 3); }) == ErrorKind::Index);
  CHECK(ta.length() == 2u);
}

TEST_CASE("bounds") {
  const ScheduleSpec s(PowerAlpha{0.9}, ConstantValue{0.1}, StepBounds{0.05, 0.15});
  CHECK_FALSE(lambda_out_of_bounds(s, 0.1));
  CHECK(lambda_out_of_bounds(s, 0.16));
  CHECK(kind_of([] { (void)ScheduleSpec(PowerAlpha{0.9}, ConstantValue{0.1}, StepBounds{0.2, 0.1}); }) ==
        ErrorKind::Parameter);
  CHECK(kind_of([] { (void)ScheduleSpec(PowerAlpha{0.9}, ConstantValue{0.1}, StepBounds{0.0, 0.1}); }) ==
        ErrorKind::Parameter);
}

TEST_CASE("beta rules") {
  CHECK(beta_at(ConstantValue{0.5}, 7) == 0.5);
  CHECK(beta_at(TableValues{{0.1, 0.2}}, 2) == 0.2);
  CHECK(kind_of([] { (void)validated_beta(ConstantValue{1.0}); }) == ErrorKind::Parameter);
  CHECK(kind_of([] { (void)validated_beta(TableValues{{0.1, -0.2}}); }) == ErrorKind::Parameter);
}

TEST_CASE("splitmix64 reference outputs") {
  // Published outputs of SplitMix64 started from state 0.
  CHECK(splitmix64_at(0, 1) == 0xe220a8397b1dcdafULL);
  CHECK(splitmix64_at(0, 2) == 0x6e789e6aa1b965f4ULL);
  CHECK(splitmix64_at(0, 3) == 0x06c45d188009454fULL);
  CHECK(unit_interval(0) == 0.0);
  CHECK(unit_interval(~0ULL) < 1.0);
}

TEST_CASE("perturbation examples") {
  CHECK(perturbation_at(NoPerturbation{}, 5, 2) == Vector{0.0, 0.0});
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xdeadbeefULL}) {
    const UniformSquareOverKsq p{seed};
    double total = 0.0;
    for (std::size_t k = 1; k <= 6000; ++k) {
      const Vector e = perturbation_at(p, k, 2);
      const double n = norm(e);
      REQUIRE(n <= std::sqrt(2.0) / (double(k) * double(k)));
      total += n;
    }
    CHECK(total <= std::sqrt(2.0) * std::numbers::pi * std::numbers::pi / 6);
    CHECK(perturbation_at(p, 17, 2) == perturbation_at(p, 17, 2));
  }
  CHECK_FALSE(perturbation_at(UniformSquareOverKsq{1}, 1, 2) == perturbation_at(UniformSquareOverKsq{2}, 1, 2));
  CHECK(perturbation_seed(UniformSquareOverKsq{9}) == 9u);
  CHECK_FALSE(perturbation_seed(NoPerturbation{}).has_value());
}

TEST_CASE("perturbation stream uses the documented layout") {
  const std::uint64_t seed = 77;
  const Vector e = perturbation_at(UniformSquareOverKsq{seed}, 3, 2);
  for (std::size_t j = 0; j < 2; ++j) {
    const double u = unit_interval(splitmix64_at(seed, (3 - 1) * 2 + j + 1));
    CHECK(e[j] == (2.0 * u - 1.0) * (1.0 / 9.0));
  }
}

TEST_CASE("uniform draws cover the square") {
  double lo[2] = {1, 1};
  double hi[2] = {-1, -1};
  double mean[2] = {0, 0};
  const int n = 20000;
  for (int k = 1; k <= n; ++k) {
    const Vector x = double(k) * double(k) * perturbation_at(UniformSquareOverKsq{5}, k, 2);
    for (int j = 0; j < 2; ++j) {
      lo[j] = std::min(lo[j], x[j]);
      hi[j] = std::max(hi[j], x[j]);
      mean[j] += x[j] / n;
    }
  }
  for (int j = 0; j < 2; ++j) {
    CHECK(lo[j] < -0.99);
    CHECK(hi[j] > 0.99);
    CHECK(std::abs(mean[j]) < 0.03);
  }
}

TEST_CASE("hypothesis_report examples") {
  const HypothesisReport ok =
      hypothesis_report(ScheduleSpec::power(0.9, 0.1), UniformSquareOverKsq{1}, 6000, 0.1);
  CHECK(ok.all_satisfied());
  for (const HypothesisCheck& c : ok.checks) CHECK(c.verdict == Verdict::AnalyticallySatisfied);
  CHECK(ok.checks.size() == 5);
  CHECK(ok.evidence.perturbation_sum <= std::sqrt(2.0) * std::numbers::pi * std::numbers::pi / 6);

  const HypothesisReport slow = hypothesis_report(ScheduleSpec::power(1.5, 0.1), NoPerturbation{}, 6000, 0.1);
  CHECK(check_of(slow, "i").verdict == Verdict::Violated);
  CHECK_FALSE(slow.all_satisfied());

  const HypothesisReport edge = hypothesis_report(ScheduleSpec::power(0.9, 0.2), NoPerturbation{}, 6000, 0.1);
  CHECK(check_of(edge, "ii").verdict == Verdict::Violated);

  CHECK(hypothesis_report(ScheduleSpec::power(1.0, 0.1), NoPerturbation{}, 100, 0.1).all_satisfied());
  CHECK(kind_of([] { (void)hypothesis_report(ScheduleSpec::power(1.0, 0.1), NoPerturbation{}, 1, 0.1); }) ==
        ErrorKind::Parameter);
}

TEST_CASE("table schedules get numeric verdicts") {
  std::vector<double> alpha(5000);
  std::vector<double> lambda(5000, 0.1);
  for (std::size_t k = 1; k <= alpha.size(); ++k) alpha[k - 1] = 1.0 / double(k);
  const ScheduleSpec s(TableValues{alpha}, TableValues{lambda});
  const HypothesisReport r = hypothesis_report(s, NoPerturbation{}, 5000, 0.1);
  CHECK(check_of(r, "i").verdict == Verdict::NumericallyConsistent);
  CHECK(check_of(r, "ii").verdict == Verdict::NumericallyConsistent);
  CHECK(r.all_satisfied());

  std::vector<double> summable(5000);
  for (std::size_t k = 1; k <= summable.size(); ++k) summable[k - 1] = 1.0 / (double(k) * double(k));
  const HypothesisReport bad =
      hypothesis_report(ScheduleSpec(TableValues{summable}, ConstantValue{0.1}), NoPerturbation{}, 5000, 0.1);
  CHECK(check_of(bad, "i").verdict == Verdict::Violated);
}
