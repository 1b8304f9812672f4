// SPDX-License-Identifier: Apache-2.0
#include <random>

#include "catch_amalgamated.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "risee/ris_gradient.hpp"

using namespace risee;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("objective g", "[gradient]") {
  const auto in = fixtures::instance(fixtures::sized_config(3, 2, 4, 2), 4);
  const Index N = 6;
  SECTION("all +1") {
    const double g = objective_g(in.chan, in.p, RisConfig::all(N, 1.0), in.params);
    const RVector t = oracle::t_coefficients(oracle::adjoint(in.chan.F) * in.chan.G);
    CHECK_THAT(g, WithinRel(-N * in.cfg.P0 / 2 + in.p.dot(t), 1e-10));
  }
  SECTION("turning one element on costs P0 when the channel term vanishes") {
    const RVector zero = RVector::Zero(2);
    const double a = objective_g(in.chan, zero, RisConfig::all(N, 1.0), in.params);
    const double b = objective_g(in.chan, zero, RisConfig::all(N, 1.0).flipped(3), in.params);
    CHECK_THAT(b - a, WithinAbs(in.cfg.P0, 1e-15));
  }
  SECTION("random states match direct evaluation") {
    std::mt19937_64 gen(2);
    for (int rep = 0; rep < 20; ++rep) {
      const RVector q = oracle::random_signs(N, gen);
      const double ref = oracle::objective_g(in.chan.F, in.chan.G, in.p, q, in.cfg.P0);
      CHECK_THAT(objective_g(in.chan, in.p, q, in.params), WithinRel(ref, 1e-10));
    }
  }
  SECTION("singular cascades cost infinity") {
    auto chan = in.chan;
    chan.F.col(1) = chan.F.col(0);
    const auto c = evaluate_cost(chan, in.p, RisConfig::all(N, 1.0), in.params);
    CHECK(std::isinf(c.g));
    CHECK_FALSE(c.feasible);
  }
}

TEST_CASE("gradient of g", "[gradient]") {
  SECTION("zero power leaves only the element cost") {
    const auto in = fixtures::instance(fixtures::small_config(), 1);
    const RVector g = gradient_g(in.chan, RVector::Zero(2), RVector::Ones(8), in.params);
    for (Index n = 0; n < 8; ++n) CHECK(g[n] == -in.cfg.P0 / 2);
  }
  SECTION("matches central differences at binary and interior points") {
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto in = fixtures::instance(fixtures::small_config(), seed);
      for (int kind = 0; kind < 2; ++kind) {
        RVector q = oracle::random_signs(8, gen);
        if (kind == 1)
          for (Index n = 0; n < 8; ++n) q[n] = u(gen);
        const RVector g = gradient_g(in.chan, in.p, q, in.params);
        const double h = 1e-6;
        for (Index n = 0; n < 8; ++n) {
          RVector qp = q, qm = q;
          qp[n] += h;
          qm[n] -= h;
          const double fd = (objective_g(in.chan, in.p, qp, in.params) - objective_g(in.chan, in.p, qm, in.params)) / (2 * h);
          CHECK(std::abs(g[n] - fd) <= 1e-5 * std::abs(fd));
        }
      }
    }
  }
  SECTION("duplicate users are singular") {
    auto in = fixtures::instance(fixtures::small_config(), 2);
    in.chan.F.col(1) = in.chan.F.col(0);
    CHECK_THROWS_AS(gradient_g(in.chan, in.p, RVector::Ones(8), in.params), SingularChannel);
  }
  SECTION("flip ordering is invariant to scaling p when P0 = 0") {
    auto in = fixtures::instance(fixtures::small_config(), 3);
    in.params.P0 = 0.0;
    const RVector q = RVector::Ones(8);
    const RVector a = q.cwiseProduct(gradient_g(in.chan, in.p, q, in.params));
    const RVector b = q.cwiseProduct(gradient_g(in.chan, 7.5 * in.p, q, in.params));
    for (Index i = 0; i < 8; ++i)
      for (Index j = 0; j < 8; ++j) CHECK((a[i] > a[j]) == (b[i] > b[j]));
  }
}

TEST_CASE("maximum-gradient search", "[gradient]") {
  GradSearchParams sp;
  SECTION("monotone trace, feasible output, never worse than the start") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto in = fixtures::instance(fixtures::sized_config(4, 4, 8, 4), seed);
      const auto q0 = RisConfig::all(16, 1.0);
      const auto out = search_max_gradient(in.chan, in.p, in.params, sp, q0);
      for (std::size_t i = 1; i < out.g_trace.size(); ++i) CHECK(out.g_trace[i] < out.g_trace[i - 1]);
      const auto cost = evaluate_cost(in.chan, in.p, out.ris, in.params);
      CHECK(cost.feasible);
      CHECK(cost.g == out.g);
      CHECK(out.g <= objective_g(in.chan, in.p, q0, in.params));
      CHECK(out.epochs <= sp.max_epochs);
    }
  }
  SECTION("dominant element cost keeps every element off") {
    auto in = fixtures::instance(fixtures::small_config(), 5);
    in.params.P0 = 1e6;
    RVector q = RVector::Ones(8);
    q.head(3).setConstant(-1.0);
    in.params.Pmax = 1e9;
    sp.rho = 1.0;
    const auto out = search_max_gradient(in.chan, in.p, in.params, sp, RisConfig(q));
    CHECK(out.ris == RisConfig::all(8, 1.0));
  }
  SECTION("infeasible start falls back to a feasible restart") {
    const auto in = fixtures::instance(fixtures::small_config(), 6);
    auto params = in.params;
    params.Pmax = evaluate_cost(in.chan, in.p, RisConfig::all(8, 1.0), params).tx_power * (1 + 1e-9);
    std::mt19937_64 gen(4);
    RisConfig bad;
    for (int i = 0; i < 256; ++i) {
      RisConfig c(oracle::random_signs(8, gen));
      if (!evaluate_cost(in.chan, in.p, c, params).feasible) {
        bad = c;
        break;
      }
    }
    REQUIRE(bad.size() == 8);
    const auto out = search_max_gradient(in.chan, in.p, params, sp, bad);
    CHECK(evaluate_cost(in.chan, in.p, out.ris, params).feasible);
    params.Pmax = 1e-30;
    CHECK_THROWS_AS(search_max_gradient(in.chan, in.p, params, sp, bad), NoFeasibleStart);
  }
  SECTION("parameter validation") {
    const auto in = fixtures::instance(fixtures::small_config(), 1);
    sp.rho = 0.0;
    CHECK_THROWS_AS(search_max_gradient(in.chan, in.p, in.params, sp, RisConfig::all(8, 1.0)), Error);
  }
}

TEST_CASE("maximum-gradient search is near-optimal on small instances", "[gradient][quality]") {
  GradSearchParams sp;
  int good = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto in = fixtures::instance(fixtures::small_config(), seed);
    const auto out = search_max_gradient(in.chan, in.p, in.params, sp, RisConfig::all(8, 1.0));
    const auto best = oracle::enumerate_g(in.chan.F, in.chan.G, in.p, in.cfg.P0, in.cfg.Pmax);
    CHECK(out.g >= best.best_g - 1e-12 * std::abs(best.best_g));
    if (out.g - best.best_g <= 0.05 * std::abs(best.best_g)) ++good;
  }
  INFO("within 5% of the exhaustive optimum in " << good << " of 20 seeds");
  CHECK(good >= 16);
}
