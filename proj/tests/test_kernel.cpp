#include <cmath>
#include <random>

#include <boost/math/special_functions/expint.hpp>

#include "doctest.h"

#include "bergman/error.hpp"
#include "bergman/kernel.hpp"
#include "bergman/oracle.hpp"
#include "bergman/weights.hpp"

using namespace bergman;
using namespace bergman::kernel;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("coefficients of the standard family") {
  const KernelCoeffs k0(make_std(0), 200), k1(make_std(1), 200);
  for (int n = 0; n <= 200; ++n) {
    CHECK(rel(k0[n], n + 1.0) < 1e-12);
    CHECK(rel(k1[n], (n + 1.0) * (n + 2.0) / 2) < 1e-12);
  }
  CHECK(k0.growth_exponent() >= 1.0 - 1e-9);
  CHECK_THROWS_AS(KernelCoeffs(make_std(0), 0), DomainError);
}

TEST_CASE("moment table matches pointwise moments") {
  for (auto text : {"reglog:a=1,b=1", "reglog:a=0,b=-2", "log:a=2", "std:a=0.5"}) {
    const auto w = parse_weight(text);
    // weights with a closed moment go through the rule via a bare copy
    const auto bare = w.closed_forms().moment
                          ? make_function_weight([w](double s) { return w.at_s(s); }, "bare",
                                                 [w](double s) { return w.log_at_s(s); })
                          : w;
    const auto tab = moment_table(bare, 300);
    for (int n : {0, 1, 2, 5, 17, 64, 150, 300}) {
      INFO(std::string(text) << " n=" << n);
      if (w.family() == Family::Log)
        CHECK(std::abs(tab[n] - moment(w, n)) < 1e-6);
      else
        CHECK(rel(tab[n], moment(w, n)) < 1e-10);
    }
    const KernelCoeffs K(bare, 64);
    CHECK(rel(K[0], 0.5 / tab[0]) < 1e-15);
  }
  // log:a=2 zeroth moment is e E1(1)
  const auto t = moment_table(parse_weight("log:a=2"), 0);
  CHECK(rel(t[0], std::exp(1.0) * boost::math::expint(1, 1.0)) < 1e-12);
}

TEST_CASE("pointwise kernel") {
  const KernelCoeffs K(make_std(0), 2000);
  CHECK(rel(kernel_eval(K, 0.5, 0.5), cplx(16.0 / 9)) < 1e-12);
  CHECK(rel(kernel_eval(K, 0.5, 0.5, 1), cplx(2.3703704)) < 1e-7);
  CHECK(rel(kernel_eval(K, 0.5, 0.5, 1), cplx(2 * 0.5 / std::pow(0.75, 3))) < 1e-12);
  const KernelCoeffs R(make_reglog(1, 1), 64);
  CHECK(kernel_eval(R, 0.0, {0.3, 0.4}) == cplx(R[0]));
  CHECK(kernel_eval(R, 0.0, {0.3, 0.4}, 2) == cplx(0.0));
  CHECK_THROWS_AS(kernel_eval(K, 0.5, 0.5, 5), DomainError);
  CHECK_THROWS_AS(kernel_eval(K, 1.0, 0.5), DomainError);
  const KernelCoeffs small(make_std(0), 8);
  try {
    kernel_eval(small, 0.9, 0.9);
    FAIL("expected truncation");
  } catch (const TruncationError& e) {
    CHECK(e.required_terms() > 100);
  }
}

TEST_CASE("kernel against the closed form") {
  for (double alpha : {0.0, 1.0, 2.5}) {
    const KernelCoeffs K(make_std(alpha), 4000);
    for (double a : {0.0, 0.3, 0.9})
      for (double th : {0.0, 1.0, 2.5}) {
        const cplx z = std::polar(0.85, th);
        const cplx want = oracle::std_kernel(alpha, a, z);
        CHECK(rel(kernel_eval(K, a, z), want) < 1e-11);
        const cplx d = (alpha + 2) * a * std::pow(1.0 - z * a, -(alpha + 3));
        if (a > 0) CHECK(rel(kernel_eval(K, a, z, 1), d) < 1e-11);
      }
  }
}

TEST_CASE("hermitian symmetry") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-0.65, 0.65);
  for (auto text : {"std:a=1", "reglog:a=1,b=1", "pow:a=3"}) {
    const KernelCoeffs K(parse_weight(text), 3000);
    for (int i = 0; i < 20; ++i) {
      const cplx a{u(gen), u(gen)}, z{u(gen), u(gen)};
      const cplx lhs = kernel_eval(K, a, z), rhs = std::conj(kernel_eval(K, z, a));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
    }
  }
}

TEST_CASE("circle means") {
  const KernelCoeffs K(make_std(0), 4000);
  const double y = 0.72 * 0.72, want = (1 + y) / std::pow(1 - y, 3);
  CHECK(rel(circle_mean(K, 0.8, 0.9, 2), want) < 1e-12);
  CHECK(std::abs(circle_mean(K, 0.8, 0.9, 2) - 13.593) < 1e-3);
  CHECK(rel(circle_mean_trapezoid(K, 0.8, 0.9, 2), want) < 1e-8);
  CHECK(rel(circle_mean(K, 0.0, 0.7, 3.5), std::pow(K[0], 3.5)) < 1e-14);
  // p = 1 against an independent mean of |1 - z a|^-2
  const int M = 20000;
  double acc = 0;
  for (int j = 0; j < M; ++j)
    acc += 1 / std::norm(1.0 - std::polar(0.9, 2 * M_PI * j / M) * 0.8);
  CHECK(rel(circle_mean(K, 0.8, 0.9, 1), acc / M) < 1e-9);
  CHECK_THROWS_AS(circle_mean(K, 0.8, 0.9, 0), DomainError);
}

TEST_CASE("circle means grow with the radius") {
  const KernelCoeffs K(parse_weight("reglog:a=1,b=1"), 4000);
  for (double p : {1.0, 2.0, 4.0})
    for (int N : {0, 1}) {
      double prev = 0;
      for (double r = 0.0; r < 0.99; r += 0.07) {
        const double m = circle_mean(K, 0.9, r, p, N);
        CHECK(m >= prev * (1 - 1e-12));
        prev = m;
      }
    }
}

TEST_CASE("bergman norms") {
  const KernelCoeffs K0(make_std(0), 4000);
  CHECK(rel(bergman_norm(K0, 0.0, make_pow(0), 2), 1.0) < 1e-12);
  // std:1 at a = 0.5 in A^2 of the unweighted measure, radial-angular quadrature
  const KernelCoeffs K1(make_std(1), 4000);
  double acc = 0;
  const int M = 256;
  auto radial = quad::integrate(
      [&](quad::Node n) {
        double s = 0;
        for (int j = 0; j < M; ++j) {
          const cplx z = std::polar(n.t, 2 * M_PI * j / M);
          s += std::norm(std::pow(1.0 - z * 0.5, -3.0));
        }
        return 2 * n.t * s / M;
      },
      0.0, 1.0, 1e-12);
  acc = radial.value;
  CHECK(rel(bergman_norm(K1, 0.5, make_pow(0), 2), acc) < 1e-6);
  CHECK(rel(bergman_norm(K1, 0.5, make_pow(0), 2.0000001), acc) < 1e-5);
  // p = 2 route vs forced quadrature route
  const double viaq = quad::integrate(
      [&](quad::Node n) { return 2 * circle_mean(K1, 0.5, n.t, 2) * n.t * make_pow(1).at_s(n.s); },
      0.0, 1.0, 1e-12).value;
  CHECK(rel(bergman_norm(K1, 0.5, make_pow(1), 2), viaq) < 1e-9);
  // tabulated route for p != 2 and |a| > 1/2 against quadrature of the means
  for (int N : {0, 1}) {
    const double direct = quad::integrate(
        [&](quad::Node n) { return 2 * circle_mean(K1, 0.9, n.t, 1.5, N) * n.t * make_pow(1).at_s(n.s); },
        0.0, 1.0, 1e-11).value;
    CHECK(rel(bergman_norm(K1, 0.9, make_pow(1), 1.5, N), direct) < 1e-7);
  }
}

TEST_CASE("norm against the forelli-rudin estimate") {
  const KernelCoeffs K(make_std(0), 100000);
  const auto v = make_pow(1);
  double lo = INFINITY, hi = 0;
  for (int k = 1; k <= 10; ++k) {
    const double a = 1 - std::ldexp(1.0, -k);
    const double q = bergman_norm(K, a, v, 2) / oracle::forelli_rudin(0, 1, 2, a);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  CHECK(lo > 0.05);
  CHECK(hi / lo < 20);
}

TEST_CASE("comparands") {
  const auto w0 = make_pow(0), w1 = make_pow(1);
  CHECK(rel(mean_comparand(w0, 2, 0, 0.5), 7.0 / 3) < 1e-10);
  CHECK(rel(mean_comparand(w0, 1, 0, 0.5), 1.0) < 1e-10);
  CHECK(mean_comparand(w0, 2, 0, 0.0) == 0.0);
  CHECK(rel(norm_comparand(w0, w1, 2, 0, 0.5), 0.5) < 1e-10);
  CHECK(rel(norm_comparand(w0, w0, 1, 0, 0.5), std::log(2.0)) < 1e-10);
  CHECK(norm_comparand(w0, w1, 2, 0, 0.0) == 0.0);
  CHECK(rel(local_comparand(w0, w0, 2, 0, 0.5), 4.0) < 1e-12);
  CHECK(rel(local_comparand(w0, w1, 2, 0, 0.5), 1.0) < 1e-12);
  const auto r = parse_weight("reglog:a=1,b=1");
  CHECK(rel(local_comparand(r, r, 1, 0, 0.7), 1.0) < 1e-12);
}

TEST_CASE("ratio scans") {
  const quad::DyadicGrid grid(20);
  auto same = ratio_scan([](double, double s) { return 1 / s; },
                         [](double, double s) { return 1 / s; }, grid);
  CHECK(same.equivalent);
  CHECK(same.up.sup_value == doctest::Approx(1.0));

  const KernelCoeffs K(make_std(0), 200000);
  const auto w = make_std(0);
  auto diag = ratio_scan(
      [&](double r, double) { return circle_mean(K, r, r, 2); },
      [&](double r, double) { return mean_comparand(w, 2, 0, r * r); }, quad::DyadicGrid(12));
  CHECK(diag.equivalent);

  auto off = ratio_scan([](double, double s) { return std::log(1 / s) / s; },
                        [](double, double s) { return 1 / s; }, grid);
  CHECK(!off.equivalent);
  CHECK((off.up.verdict == quad::Verdict::Divergent || off.down.verdict == quad::Verdict::Divergent));
  CHECK_THROWS_AS(ratio_scan(std::vector<double>{1, -1}, std::vector<double>{1, 1}), DomainError);
}

TEST_CASE("littlewood-paley identity") {
  const auto z = lp1_check({0.0, 1.0}, make_pow(0));
  CHECK(rel(z.lhs, 0.5) < 1e-12);
  CHECK(rel(z.rhs, 0.5) < 1e-9);
  const auto q = lp1_check({1.0, 0.0, 1.0}, make_std(1));
  CHECK(q.rel_err <= 1e-8);
  const auto one = lp1_check({1.0}, parse_weight("reglog:a=1,b=1"));
  CHECK(one.rel_err <= 1e-9);
  const auto mix = lp1_check({{0.3, 0.1}, {0.0, -1.0}, 0.5, {0.2, 0.2}}, parse_weight("reglog:a=1,b=1"));
  CHECK(mix.rel_err <= 1e-8);
}

TEST_CASE("reproducing property") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (auto text : {"std:a=0", "reglog:a=1,b=1", "pow:a=2"}) {
    const KernelCoeffs K(parse_weight(text), 2000);
    for (int trial = 0; trial < 3; ++trial) {
      CoeffPoly f(1 + trial * 4);
      for (auto& c : f) c = {u(gen), u(gen)};
      const cplx a{0.6 * u(gen), 0.6 * u(gen)};
      INFO(std::string(text) << " trial " << trial);
      CHECK(std::abs(reproduce(f, K, a) - poly_eval(f, a)) <= 1e-8 * std::max(1.0, std::abs(poly_eval(f, a))));
    }
  }
}
