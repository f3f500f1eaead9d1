#include <cmath>

#include "doctest.h"

#include "bergman/oracle.hpp"
#include "bergman/quad.hpp"
#include "bergman/weights.hpp"

using namespace bergman;
using namespace bergman::oracle;

TEST_CASE("std_moment") {
  CHECK(std_moment(0, 3) == doctest::Approx(0.125).epsilon(1e-14));
  for (int n = 0; n < 20; ++n) CHECK(std_moment(0, n) == doctest::Approx(1.0 / (2 * n + 2)).epsilon(1e-13));
  CHECK(std_moment(1, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std_moment(1, 1) == doctest::Approx(1.0 / 6).epsilon(1e-14));
  CHECK(std::isfinite(std_moment(2.5, 1e4)));
}

TEST_CASE("std_moment agrees with the weights module") {
  for (double a : {-0.5, 0.0, 1.0, 2.5, 7.0}) {
    const auto w = make_std(a);
    for (int n = 0; n <= 512; n += (n < 16 ? 1 : 31))
      CHECK(std::abs(std_moment(a, n) - moment(w, n)) <= 1e-10 * moment(w, n));
  }
}

TEST_CASE("std_kernel") {
  CHECK(std::abs(std_kernel(0, 0.5, 0.5) - 16.0 / 9) < 1e-14);
  CHECK(std::abs(std_kernel(1.3, 0.0, {0.2, 0.7}) - 1.0) < 1e-15);
  CHECK(std::abs(std_kernel(1, 0.5, 0.5) - std::pow(0.75, -3)) < 1e-13);
  CHECK(std::abs(std_kernel(1, 0.5, 0.5) - 2.3704) < 1e-4);
}

TEST_CASE("std_verdict and std_kappa") {
  CHECK(std_verdict(0, 1, 3) == StdVerdict::True);
  CHECK(std_verdict(0, 1, 2) == StdVerdict::Boundary);
  CHECK(std_verdict(1, 0, 1) == StdVerdict::True);
  CHECK(std_verdict(0, 3, 2) == StdVerdict::False);
  CHECK(std_kappa(0) == 1.0);
  CHECK(std_kappa(1) == 0.5);
  CHECK(std_kappa(2.5) == doctest::Approx(0.2857142857));
}

TEST_CASE("forelli_rudin") {
  CHECK(forelli_rudin(0, 1, 2, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(forelli_rudin(0, 0, 1, 0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(forelli_rudin(1, 2, 3, 0.0) == 0.0);
  // against quadrature of the defining integral
  for (double al : {0.0, 1.0, 2.5})
    for (double be : {-0.5, 0.0, 2.0})
      for (double p : {1.0, 1.5, 3.0}) {
        const auto om = make_pow(al), v = make_pow(be);
        const double q = quad::integrate(
                             [&](quad::Node n) {
                               return v.tail_s(n.s) / (std::pow(om.tail_s(n.s), p) * std::pow(n.s, p));
                             },
                             0.0, 0.9)
                             .value;
        CHECK(forelli_rudin(al, be, p, 0.9) == doctest::Approx(q).epsilon(1e-10));
      }
}
