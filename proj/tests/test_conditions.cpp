#include <cmath>

#include "doctest.h"

#include "bergman/conditions.hpp"
#include "bergman/error.hpp"
#include "bergman/oracle.hpp"

using namespace bergman;
using namespace bergman::conditions;
using quad::Verdict;

namespace {

const std::vector<Condition> kFive{Condition::ConjugateTail, Condition::HardyPointwise,
                                   Condition::HardyProduct, Condition::RootTail,
                                   Condition::RootHardy};

}  // namespace

TEST_CASE("names round trip") {
  for (auto c : all_conditions()) CHECK(parse_condition(to_string(c)) == c);
  CHECK(parse_condition("t4D") == Condition::HardyPointwise);
  CHECK(parse_condition("EIMPR") == Condition::Improving);
  CHECK(parse_condition("kappacrit") == Condition::KappaRatio);
  CHECK_THROWS_AS(parse_condition("T4h"), ParseError);
}

TEST_CASE("pinned suprema") {
  const auto w0 = make_pow(0), w1 = make_pow(1);
  auto d = eval_condition(Condition::HardyPointwise, w0, w0, 2);
  CHECK(d.verdict == Verdict::Bounded);
  CHECK(std::abs(d.sup_value - 1.0) < 1e-6);
  // F(r) = r on the grid
  for (std::size_t k = 0; k < d.values.size(); ++k)
    CHECK(std::abs(d.values[k] - (1 - std::ldexp(1.0, -int(k) - 1))) < 1e-10);
  auto c = eval_condition(Condition::ConjugateTail, w0, w0, 2);
  CHECK(c.verdict == Verdict::Bounded);
  CHECK(std::abs(c.sup_value - 1.0) < 1e-9);
  auto l = eval_condition(Condition::L1Hardy, w0, w0, 1);
  CHECK(l.verdict == Verdict::Divergent);
  CHECK(std::abs(l.values[9] - 10 * std::log(2.0)) < 1e-9);
  auto t = eval_condition(Condition::L1Hardy, w1, w0, 1);
  CHECK(t.verdict == Verdict::Bounded);
  CHECK(std::abs(t.sup_value - 2.0) < 1e-6);
  CHECK_THROWS_AS(eval_condition(Condition::RootTail, w0, w0, 1), DomainError);
}

TEST_CASE("power pairs") {
  const auto w0 = make_pow(0), w1 = make_pow(1);
  for (auto id : kFive) {
    INFO(to_string(id));
    CHECK(eval_condition(id, w0, w1, 2).verdict == Verdict::Divergent);
    CHECK(eval_condition(id, w0, w1, 3).verdict == Verdict::Bounded);
    CHECK(eval_condition(id, w1, w1, 2).verdict == Verdict::Bounded);
  }
  const auto rep = check_pair(w1, w1, 2);
  CHECK(rep.overall == Overall::Bounded);
  for (const auto& row : rep.agreement)
    for (bool b : row) CHECK(b);
  const auto edge = check_pair(w0, w1, 2);
  CHECK(edge.boundary);
  CHECK(edge.overall == Overall::Unbounded);
  CHECK(check_pair(w0, w1, 3).overall == Overall::Bounded);
}

TEST_CASE("standard family against the oracle") {
  for (double a : {0.0, 2.5})
    for (double b : {0.0, 2.5})
      for (double p : {1.5, 3.0}) {
        INFO(a << " " << b << " " << p);
        const auto rep = check_pair(make_std(a), make_std(b), p);
        const auto want = oracle::std_verdict(a, b, p);
        if (want == oracle::StdVerdict::True) CHECK(rep.overall == Overall::Bounded);
        if (want == oracle::StdVerdict::False) CHECK(rep.overall == Overall::Unbounded);
        CHECK(!rep.boundary);
      }
}

TEST_CASE("p = 1 conditions agree") {
  const auto w0 = make_pow(0), w1 = make_pow(1), w2 = make_pow(2);
  const auto good = check_pair(w1, w0, 1);
  CHECK(good.overall == Overall::Bounded);
  const auto edge = check_pair(w0, w0, 1);
  CHECK(edge.boundary);
  CHECK(edge.overall == Overall::Unbounded);
  for (const auto& r : edge.results) CHECK(r.verdict.verdict == Verdict::Divergent);
  CHECK(check_pair(w2, w0, 1).overall == Overall::Bounded);
  CHECK(check_pair(w0, w2, 1).overall == Overall::Unbounded);
}

TEST_CASE("kernel conditions") {
  const auto w = make_std(1), v = make_pow(0.5);
  CHECK(eval_condition(Condition::KernelMeans, w, w, 2, 0).verdict == Verdict::Bounded);
  CHECK(eval_condition(Condition::KernelMeans, w, w, 1, 1).verdict == Verdict::Bounded);
  CHECK(eval_condition(Condition::KernelNorms, w, v, 2, 0).verdict == Verdict::Bounded);
  // integrand integrable at the boundary, local size blows up
  CHECK(eval_condition(Condition::KernelNorms, w, w, 0.5, 0).verdict == Verdict::Divergent);
}

TEST_CASE("kappa criterion") {
  const auto w0 = make_pow(0), w1 = make_pow(1);
  auto k = kappa_criterion(w0, w1, 3);
  CHECK(std::abs(k.ratio - 2) < 1e-6);
  CHECK(k.holds);
  k = kappa_criterion(w0, w1, 2);
  CHECK(!k.holds);
  CHECK(k.boundary);
  const auto r = parse_weight("reglog:a=1,b=1");
  k = kappa_criterion(r, r, 1.5);
  CHECK(std::abs(k.ratio - 1) < 1e-6);
  CHECK(k.holds);
  CHECK_THROWS_AS(kappa_criterion(make_log(2), w0, 2), ConvergenceError);
}

TEST_CASE("exponent window") {
  const auto w0 = make_pow(0), w1 = make_pow(1), w2 = make_pow(2);
  auto e = exponent_window(w1, w0, 2);
  CHECK(std::abs(e.m - 1.5) < 0.01);
  CHECK(std::abs(e.M - 1.5) < 0.01);
  e = exponent_window(w0, w0, 2);
  CHECK(std::abs(e.m - 1.0) < 0.01);
  CHECK(std::abs(e.M - 1.0) < 0.01);
  e = exponent_window(w2, w0, 2);
  CHECK(std::abs(e.m - 5.0 / 3) < 0.01);
  CHECK(std::abs(e.M - 5.0 / 3) < 0.01);
  CHECK(e.m <= e.M + 2e-3);
  CHECK_THROWS_AS(exponent_window(w0, w2, 2), PreconditionError);
  // bounded at p implies bounded at p - m/2
  e = exponent_window(w1, w0, 2);
  CHECK(eval_condition(Condition::HardyPointwise, w1, w0, 2 - e.m / 2).verdict == Verdict::Bounded);
}

TEST_CASE("hardy_K") {
  CHECK(std::abs(hardy_K(make_pow(0), 0.5) - 1.0) < 1e-12);
  CHECK(std::abs(hardy_K(make_pow(0), 0.9) - 9.0) < 1e-10);
  CHECK(std::abs(hardy_K(make_pow(1), 0.5) - 3.0) < 1e-12);
  CHECK(hardy_K(make_pow(1), 0.0) == 0.0);
}

TEST_CASE("regularity characterizations") {
  const auto r0 = regularity_check(make_pow(0), 2);
  CHECK(r0.head);
  for (std::size_t k = 0; k < r0.head_up.values.size(); ++k)
    CHECK(std::abs(r0.head_up.values[k] - (1 - std::ldexp(1.0, -int(k) - 1))) < 1e-9);
  CHECK(r0.product_ok);
  CHECK(r0.root);
  const auto r1 = regularity_check(make_pow(1), 2);
  CHECK((r1.head && r1.product_ok && r1.root));
  const auto rl = regularity_check(make_log(2), 2);
  CHECK(!rl.root);
  CHECK(eval_condition(Condition::RegularityRoot, make_log(2), make_log(2), 2).verdict != Verdict::Bounded);
  CHECK_THROWS_AS(regularity_check(make_pow(0), 1), DomainError);
}

TEST_CASE("scale invariance") {
  const auto w = make_std(1), v = make_pow(0.5);
  for (auto id : {Condition::ConjugateTail, Condition::HardyPointwise, Condition::Improving,
                  Condition::RootHardy}) {
    const auto a = eval_condition(id, w, v, 2);
    const auto b = eval_condition(id, w.scaled(7.5), v.scaled(0.01), 2);
    CHECK(a.verdict == b.verdict);
  }
}
