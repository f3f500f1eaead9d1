#include <cmath>

#include "doctest.h"

#include "bergman/error.hpp"
#include "bergman/operators.hpp"

using namespace bergman;
using namespace bergman::operators;
using quad::Verdict;

TEST_CASE("radial functions") {
  const auto v = make_pow(0);
  CHECK(std::abs(RadialFunction::monomial(0).norm(v, 2) - 1.0) < 1e-12);
  CHECK(std::abs(RadialFunction::monomial(1).norm(v, 2) - std::sqrt(0.5)) < 1e-12);
  // 2 int_t^1 r dr = 1 - t^2
  const auto ind = RadialFunction::indicator(0.5);
  CHECK(std::abs(ind.norm(v, 3) - std::cbrt(0.75)) < 1e-12);
  CHECK(ind(0.6) == 1.0);
  CHECK(ind(0.4) == 0.0);
  CHECK_THROWS_AS(RadialFunction::indicator(1.0), DomainError);
}

TEST_CASE("m1 profile") {
  const kernel::KernelCoeffs K(make_std(0), 20000);
  const auto m = m1_profile(K, {0.0, 0.3, 0.72, 0.95});
  CHECK(std::abs(m[0] - 1.0) < 1e-14);
  CHECK(std::abs(m[2] - 1 / (1 - 0.72 * 0.72)) < 1e-9);
  CHECK(std::abs(m[3] - 1 / (1 - 0.95 * 0.95)) < 1e-9);
  for (std::size_t i = 1; i < m.size(); ++i) CHECK(m[i] >= m[i - 1]);
  const M1Table tab(K, 6);
  for (double x : {0.1, 0.55, 0.9, 0.98})
    CHECK(std::abs(tab(x) * (1 - x * x) - 1.0) < 1e-6);
  CHECK_THROWS_AS(tab(0.999), DomainError);
}

TEST_CASE("positive projection on radial functions") {
  const auto K = coeffs_for_depth(make_std(0), 4);
  const auto one = apply_Pplus_radial(K, RadialFunction::monomial(0), {0.0, 0.5, 0.9});
  CHECK(std::abs(one[0] - 1.0) < 1e-9);
  CHECK(std::abs(one[2] - std::log(1 / 0.19) / 0.81) < 1e-6);
  CHECK(std::abs(one[2] - 2.0503) < 1e-4);
  const auto ind = apply_Pplus_radial(K, RadialFunction::indicator(0.5), {0.0, 0.5, 0.9});
  for (std::size_t i = 0; i < ind.size(); ++i) {
    CHECK(ind[i] > 0.0);
    CHECK(ind[i] <= one[i]);
  }
}

TEST_CASE("projection constant") {
  const kernel::KernelCoeffs K(make_std(0), 16);
  CHECK(std::abs(radial_projection_constant(K, RadialFunction::monomial(0)) - 1.0) < 1e-12);
  CHECK(std::abs(radial_projection_constant(K, RadialFunction::indicator(0.3)) - 0.91) < 1e-12);
  CHECK(std::abs(radial_projection_constant(K, RadialFunction::monomial(2)) - 0.5) < 1e-12);
  const kernel::KernelCoeffs R(parse_weight("reglog:a=1,b=1"), 16);
  CHECK(std::abs(radial_projection_constant(R, RadialFunction::monomial(0)) - 1.0) < 1e-10);
}

TEST_CASE("moment necessity") {
  const auto w0 = make_pow(0), w1 = make_pow(1);
  const auto same = moment_necessity(w0, w0, 2);
  CHECK(same.verdict == Verdict::Bounded);
  for (double x : same.values) CHECK(std::abs(x - 1.0) < 1e-10);
  CHECK(moment_necessity(w0, w1, 2).verdict == Verdict::Divergent);
  CHECK(moment_necessity(w1, w0, 2).verdict == Verdict::Bounded);
  CHECK(moment_necessity(make_std(1), make_std(2.5), 3).verdict == Verdict::Bounded);
  CHECK(moment_necessity(make_std(0), make_std(2.5), 1.5).verdict == Verdict::Divergent);
}

TEST_CASE("indicator test") {
  const auto w0 = make_pow(0);
  CHECK(indicator_Q(w0, 2, 0.0) == 0.0);
  CHECK(std::abs(indicator_Q(w0, 2, 0.9) - 0.5295) < 1e-4);
  const double t = 0.9;
  CHECK(std::abs(indicator_Q(w0, 2, t) - (1 + (1 - t) * (2 * std::log(1 - t) + t - 1))) < 1e-10);
  CHECK(indicator_test(w0, 2).verdict == Verdict::Bounded);
  for (auto text : {"std:a=1", "pow:a=2", "reglog:a=1,b=1"})
    for (double p : {1.5, 2.0, 3.0}) {
      INFO(text << " " << p);
      CHECK(indicator_test(parse_weight(text), p).verdict == Verdict::Bounded);
    }
  for (double a : {1.5, 2.0}) CHECK(indicator_test(make_log(a), 2).verdict == Verdict::Divergent);
  CHECK_THROWS_AS(indicator_test(w0, 1), DomainError);
}

TEST_CASE("bloch probe") {
  CHECK(bloch_norm_monomial(0) == 1.0);
  CHECK(bloch_norm_monomial(1) == 1.0);
  CHECK(std::abs(bloch_norm_monomial(2) - 4 / (3 * std::sqrt(3.0))) < 1e-15);
  CHECK(std::abs(bloch_value(make_pow(0), 2) - 1.1547) < 1e-4);
  CHECK(std::abs(bloch_norm_monomial(1 << 20) - 2 / std::exp(1.0)) < 1e-5);
  for (auto text : {"std:a=0", "std:a=2.5", "pow:a=1", "reglog:a=1,b=1"}) {
    INFO(text);
    const auto b = bloch_probe(parse_weight(text));
    CHECK(b.verdict == Verdict::Bounded);
  }
}

TEST_CASE("operator norm lower bounds") {
  const auto w0 = make_pow(0);
  const auto K = coeffs_for_depth(w0, 8);
  const auto one = opnorm_lower(K, w0, 2, {RadialFunction::monomial(0)}, 8);
  CHECK(one.lower_bound >= 1.0);
  for (std::size_t j = 1; j < one.truncation_trend.size(); ++j)
    CHECK(one.truncation_trend[j] >= one.truncation_trend[j - 1]);
  const auto ind = opnorm_lower(K, w0, 2, default_tests(8), 8);
  CHECK(ind.trend.verdict == Verdict::Bounded);
  CHECK(ind.lower_bound >= one.lower_bound);
  CHECK(!ind.witness.empty());

  const auto lg = make_log(2);
  const auto KL = coeffs_for_depth(lg, 8);
  std::vector<RadialFunction> tests;
  for (int k = 1; k <= 8; ++k) tests.push_back(RadialFunction::indicator(1 - std::ldexp(1.0, -k)));
  const auto bad = opnorm_lower(KL, lg, 2, tests, 8);
  // still rising at the deepest level
  const auto& tr = bad.truncation_trend;
  CHECK(tr.back() > tr[tr.size() - 2] * 1.01);
}
