// SPDX-License-Identifier: Apache-2.0
#include <random>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "risee/power_alloc.hpp"

using namespace risee;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

AllocProblem make(std::initializer_list<double> t, double sigma2, double pmin, double Pmax, double P1 = 0.0) {
  AllocProblem p;
  p.t = RVector::Map(t.begin(), static_cast<Index>(t.size()));
  p.sigma2 = sigma2;
  p.p_min = pmin;
  p.Pmax = Pmax;
  p.P1_const = P1;
  return p;
}

oracle::BoxProblem box(const AllocProblem& a) {
  return {a.t, a.sigma2, a.p_min, a.Pmax, a.P1_const, a.nu};
}

AllocProblem random_problem(std::mt19937_64& gen, Index K) {
  std::uniform_real_distribution<double> ut(0.2, 5.0), us(0.05, 2.0), uP(1.0, 20.0), uP1(0.5, 10.0);
  AllocProblem p;
  p.t.resize(K);
  for (Index k = 0; k < K; ++k) p.t[k] = ut(gen);
  p.sigma2 = us(gen);
  p.Pmax = uP(gen);
  p.p_min = 0.3 * p.Pmax / p.t.sum() * std::uniform_real_distribution<double>(0.0, 1.0)(gen);
  p.P1_const = uP1(gen);
  return p;
}

}  // namespace

TEST_CASE("problem validation", "[power]") {
  CHECK_THROWS_AS(make({}, 1, 0, 1).validate(), Error);
  CHECK_THROWS_AS(make({1.0, -1.0}, 1, 0, 1).validate(), Error);
  CHECK_THROWS_AS(make({1.0}, 0.0, 0, 1).validate(), Error);
  CHECK(make({1.0, 1.0}, 1, 0.5, 1).is_feasible());
  CHECK_FALSE(make({1.0, 1.0}, 1, 0.6, 1).is_feasible());
}

TEST_CASE("zeta root", "[power]") {
  CHECK_THAT(solve_zeta(make({1.0}, 1, 0, 5)), WithinAbs(6.0, 1e-14));
  CHECK_THAT(solve_zeta(make({1.0, 1.0}, 1, 0, 4)), WithinAbs(3.0, 1e-14));
  CHECK_THROWS_AS(solve_zeta(make({1.0, 1.0}, 1, 0.6, 1)), Infeasible);

  SECTION("flat segment returns the smallest breakpoint") {
    const auto p = make({1.0, 3.0}, 0.5, 0.25, 1.0);
    CHECK_THAT(solve_zeta(p), WithinAbs(1.0 * (0.5 + 0.25), 1e-15));
    const RVector x = inner_solution(p, 0.0);
    CHECK_THAT(x[0], WithinAbs(0.25, 1e-15));
    CHECK_THAT(x[1], WithinAbs(0.25, 1e-15));
  }

  SECTION("matches bisection") {
    std::mt19937_64 gen(17);
    for (int rep = 0; rep < 200; ++rep) {
      const auto p = random_problem(gen, 5);
      const double z = solve_zeta(p);
      CHECK_THAT(z, WithinAbs(oracle::zeta_bisection(p.t, p.sigma2, p.p_min, p.Pmax), 1e-10 * std::max(1.0, z)));
    }
  }
}

TEST_CASE("inner solution", "[power]") {
  SECTION("huge price keeps every user at the floor") {
    const auto p = make({1.0, 2.0, 0.5}, 1, 0.01, 3);
    const RVector x = inner_solution(p, 1e12);
    for (Index k = 0; k < 3; ++k) CHECK(x[k] == 0.01);
  }
  SECTION("zero price spends the whole budget") {
    const auto p = make({1.0, 2.0, 0.5}, 1, 0.01, 3);
    CHECK_THAT(inner_solution(p, 0.0).dot(p.t), WithinAbs(3.0, 1e-9));
  }
  SECTION("two-user instance matches a dense grid") {
    const auto p = make({1.0, 2.0}, 1, 0.01, 3);
    const double lambda = 0.2;
    const RVector x = inner_solution(p, lambda);
    const double ref = oracle::zoom_grid_max(
        box(p), [&](const RVector& q) { return oracle::rate(box(p), q) - lambda * oracle::power(box(p), q); },
        301, 12, 1e-2);
    CHECK(std::abs(parametric_objective(p, x, lambda) - ref) <= 1e-6);
    CHECK(parametric_objective(p, x, lambda) >= ref - 1e-12);
  }
  SECTION("random K <= 3 instances are grid-optimal") {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> ul(0.0, 0.5);
    for (int rep = 0; rep < 20; ++rep) {
      const Index K = 1 + rep % 3;
      const auto p = random_problem(gen, K);
      const double lambda = ul(gen);
      const RVector x = inner_solution(p, lambda);
      const auto b = box(p);
      const double ref = oracle::zoom_grid_max(
          b, [&](const RVector& q) { return oracle::rate(b, q) - lambda * oracle::power(b, q); },
          K == 3 ? 61 : 201, 25, -1);
      const double got = parametric_objective(p, x, lambda);
      INFO("K=" << K << " got=" << got << " ref=" << ref);
      CHECK(std::abs(got - ref) <= 1e-6 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("Dinkelbach", "[power]") {
  SECTION("single user agrees with golden section on EE") {
    const auto p = make({1.0}, 1, 1e-12, 100, 10);
    const auto alloc = dinkelbach(p);
    auto ee = [](double x) { return std::log2(1.0 + x) / (10.0 + x); };
    const double best = oracle::golden_max(ee, 1e-12, 100.0);
    CHECK_THAT(ee(alloc.p[0]), WithinRel(ee(best), 1e-6));
  }
  SECTION("symmetric users get equal powers") {
    const auto alloc = dinkelbach(make({1.5, 1.5, 1.5}, 0.3, 0.01, 4, 2));
    CHECK_THAT(alloc.p[1], WithinRel(alloc.p[0], 1e-10));
    CHECK_THAT(alloc.p[2], WithinRel(alloc.p[0], 1e-10));
  }
  SECTION("ratio trace, fixed point and feasibility on random problems") {
    std::mt19937_64 gen(31);
    for (int rep = 0; rep < 100; ++rep) {
      const auto p = random_problem(gen, 1 + rep % 8);
      const auto alloc = dinkelbach(p);
      for (std::size_t i = 1; i < alloc.lambda_trace.size(); ++i)
        CHECK(alloc.lambda_trace[i] >= alloc.lambda_trace[i - 1] - 1e-12);
      const double lam = alloc.lambda();
      const double F = parametric_objective(p, inner_solution(p, lam), lam);
      CHECK(std::abs(F) <= 1e-8);
      CHECK(alloc.p.dot(p.t) <= p.Pmax + 1e-9);
      CHECK((alloc.p.array() >= p.p_min - 1e-12).all());
      CHECK_THAT(alloc_rate(p, alloc.p) / alloc_power(p, alloc.p), WithinRel(lam, 1e-12));
    }
  }
  SECTION("global ratio optimum for K <= 2") {
    std::mt19937_64 gen(37);
    for (int rep = 0; rep < 10; ++rep) {
      const auto p = random_problem(gen, 1 + rep % 2);
      const auto b = box(p);
      const double ref = oracle::zoom_grid_max(
          b, [&](const RVector& q) { return oracle::rate(b, q) / oracle::power(b, q); }, 201, 25, -1);
      CHECK_THAT(dinkelbach(p).lambda(), WithinRel(ref, 1e-4));
    }
  }
  SECTION("infeasible floors") {
    CHECK_THROWS_AS(dinkelbach(make({1.0, 1.0}, 1, 0.6, 1)), Infeasible);
  }
}
