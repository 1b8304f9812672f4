// SPDX-License-Identifier: Apache-2.0
#include <random>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "risee/model.hpp"

using namespace risee;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ChannelRealization make_chan(const CMatrix& G, const CMatrix& F) {
  ChannelRealization c;
  c.G = G;
  c.F = F;
  return c;
}

}  // namespace

TEST_CASE("config defaults and derived noise quantities", "[model]") {
  SystemConfig cfg;
  CHECK(cfg.N() == 64);
  CHECK(cfg.M() == 8);
  CHECK(cfg.K == 4);
  CHECK(cfg.P_static == 10.0);
  CHECK(cfg.P0 == 0.01);
  CHECK(cfg.BW == 180e3);
  CHECK_THAT(cfg.sigma2(), WithinRel(180e3 * std::pow(10.0, (-174.0 - 30.0) / 10.0), 1e-14));
  CHECK_THAT(cfg.sigma2(), WithinRel(7.16e-16, 2e-3));
  CHECK_THAT(cfg.p_min(), WithinRel(cfg.sigma2() * (std::pow(2.0, 1e-4) - 1.0), 1e-14));
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config validation rejects inconsistent scenarios", "[model]") {
  SystemConfig cfg;
  cfg.K = 32;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SystemConfig{};
  cfg.Pmax = -1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SystemConfig{};
  cfg.N1 = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("RisConfig counts ON elements as phase pi", "[model]") {
  for (int n = 1; n <= 12; ++n) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      RisConfig r(oracle::state_from_mask(n, mask));
      const RVector th = r.phases();
      int nonzero = 0;
      for (Index i = 0; i < n; ++i) nonzero += th[i] != 0.0;
      REQUIRE(r.on_count() == nonzero);
    }
  }
  CHECK_THROWS_AS(RisConfig(RVector::Constant(3, 0.5)), Error);
  CHECK(RisConfig::all(4, -1.0).on_count() == 4);
  CHECK(RisConfig::all(4, 1.0).flipped(2).on_count() == 1);
}

TEST_CASE("lexicographic order treats -1 as smaller", "[model]") {
  RVector a(3), b(3);
  a << -1, 1, 1;
  b << 1, -1, -1;
  CHECK(RisConfig(a).lexicographically_less(RisConfig(b)));
  CHECK_FALSE(RisConfig(b).lexicographically_less(RisConfig(a)));
  CHECK_FALSE(RisConfig(a).lexicographically_less(RisConfig(a)));
}

TEST_CASE("effective channel", "[model]") {
  SECTION("scalar identity") {
    const auto c = make_chan(CMatrix::Ones(1, 1), CMatrix::Ones(1, 1));
    CHECK(effective_channel(c, RisConfig::all(1, 1.0)) == CMatrix::Ones(1, 1));
  }
  SECTION("all +1 gives F^H G") {
    std::mt19937_64 gen(3);
    const auto c = make_chan(oracle::random_complex(5, 3, gen), oracle::random_complex(5, 2, gen));
    CHECK((effective_channel(c, RisConfig::all(5, 1.0)) - c.F.adjoint() * c.G).norm() < 1e-14);
  }
  SECTION("matches dense triple product") {
    std::mt19937_64 gen(11);
    const auto c = make_chan(oracle::random_complex(4, 2, gen), oracle::random_complex(4, 2, gen));
    const RVector q = oracle::random_signs(4, gen);
    const CMatrix ref = oracle::dense_product(oracle::dense_product(oracle::adjoint(c.F), CMatrix(q.cast<cdouble>().asDiagonal())), c.G);
    CHECK((effective_channel(c, q) - ref).norm() <= 1e-12 * ref.norm());
  }
  SECTION("dimension mismatch") {
    std::mt19937_64 gen(1);
    const auto c = make_chan(oracle::random_complex(4, 2, gen), oracle::random_complex(3, 2, gen));
    CHECK_THROWS_AS(effective_channel(c, RisConfig::all(4, 1.0)), DimensionMismatch);
  }
}

TEST_CASE("t coefficients", "[model]") {
  SECTION("identity gram") {
    const RVector t = t_coefficients(CMatrix::Identity(3, 5));
    CHECK((t - RVector::Ones(3)).norm() < 1e-15);
  }
  SECTION("diagonal gram") {
    CMatrix Hh = CMatrix::Zero(2, 2);
    Hh(0, 0) = std::sqrt(2.0);
    Hh(1, 1) = 2.0;
    const RVector t = t_coefficients(Hh);
    CHECK_THAT(t[0], WithinRel(0.5, 1e-15));
    CHECK_THAT(t[1], WithinRel(0.25, 1e-15));
  }
  SECTION("random full-rank matches explicit inverse") {
    std::mt19937_64 gen(5);
    for (int rep = 0; rep < 20; ++rep) {
      const CMatrix Hh = oracle::random_complex(3, 6, gen);
      const RVector t = t_coefficients(Hh);
      const RVector ref = oracle::t_coefficients(Hh);
      for (Index k = 0; k < 3; ++k) {
        CHECK(t[k] > 0);
        CHECK_THAT(t[k], WithinRel(ref[k], 1e-10));
      }
    }
  }
  SECTION("rank deficiency is reported") {
    std::mt19937_64 gen(6);
    CMatrix Hh = oracle::random_complex(2, 4, gen);
    Hh.row(1) = Hh.row(0);
    CHECK_THROWS_AS(t_coefficients(Hh), SingularChannel);
    CHECK_THROWS_AS(t_coefficients(oracle::random_complex(3, 2, gen)), SingularChannel);
  }
}

TEST_CASE("zero-forcing precoder", "[model]") {
  SECTION("single user") {
    CMatrix Hh(1, 2);
    Hh << 1.0, 0.0;
    RVector p(1);
    p << 4.0;
    const CMatrix W = zf_precoder(Hh, p);
    CHECK(std::abs(W(0, 0) - cdouble(2.0)) < 1e-15);
    CHECK(std::abs(W(1, 0)) < 1e-15);
  }
  SECTION("defining identities on random instances") {
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> up(0.1, 5.0);
    for (int rep = 0; rep < 100; ++rep) {
      const CMatrix Hh = oracle::random_complex(2, 4, gen);
      RVector p(2);
      p << up(gen), up(gen);
      const CMatrix W = zf_precoder(Hh, p);
      const CMatrix sqrtP = p.cwiseSqrt().cast<cdouble>().asDiagonal();
      CHECK((oracle::dense_product(Hh, W) - sqrtP).norm() <= 1e-8);
      double tr = 0;
      for (Index i = 0; i < W.rows(); ++i)
        for (Index j = 0; j < W.cols(); ++j) tr += std::norm(W(i, j));
      CHECK_THAT(tr, WithinRel(p.dot(oracle::t_coefficients(Hh)), 1e-10));
    }
  }
}

TEST_CASE("metrics", "[model]") {
  SystemConfig cfg;
  cfg.K = 2;
  const double s2 = cfg.sigma2();
  SECTION("zero power") {
    const auto r = metrics(cfg, RisConfig::all(64, 1.0), RVector::Zero(2), RVector::Ones(2));
    CHECK(r.se == 0.0);
    CHECK(r.ee == 0.0);
    CHECK_FALSE(r.feasible);
  }
  SECTION("exact logs") {
    RVector p(2);
    p << s2, 3 * s2;
    const auto r = metrics(cfg, RisConfig::all(64, 1.0), p, RVector::Ones(2));
    CHECK_THAT(r.se, WithinAbs(3.0, 1e-12));
    CHECK_THAT(r.ee, WithinRel(cfg.BW * 3.0 / (cfg.P_static + p.sum()), 1e-12));
    CHECK(r.feasible);
  }
  SECTION("EE identity with ON elements and amplifier efficiency") {
    cfg.nu = 0.5;
    RVector q = RVector::Ones(64);
    q.head(10).setConstant(-1.0);
    RVector p(2);
    p << 1e-13, 2e-13;
    RVector t(2);
    t << 1e12, 3e12;
    const auto r = metrics(cfg, RisConfig(q), p, t);
    CHECK(r.on_count == 10);
    CHECK_THAT(r.tx_power, WithinRel(0.7, 1e-12));
    CHECK_THAT(r.ee, WithinRel(cfg.BW * r.se / (cfg.P_static + 10 * cfg.P0 + 0.7 / 0.5), 1e-12));
  }
  SECTION("EE decreases with on_count at fixed se and tx power") {
    RVector p(2);
    p << 5 * s2, 7 * s2;
    double prev = INFINITY;
    for (int on = 0; on <= 64; on += 8) {
      RVector q = RVector::Ones(64);
      q.head(on).setConstant(-1.0);
      const double ee = metrics(cfg, RisConfig(q), p, RVector::Ones(2)).ee;
      CHECK(ee < prev);
      prev = ee;
    }
  }
  SECTION("budget and floor define feasibility") {
    RVector p(2);
    p << cfg.Pmax / 2, cfg.Pmax / 2;
    CHECK(metrics(cfg, RisConfig::all(64, 1.0), p, RVector::Ones(2)).feasible);
    p[0] *= 1.01;
    CHECK_FALSE(metrics(cfg, RisConfig::all(64, 1.0), p, RVector::Ones(2)).feasible);
    p << cfg.p_min() * 0.5, 1e-10;
    CHECK_FALSE(metrics(cfg, RisConfig::all(64, 1.0), p, RVector::Ones(2)).feasible);
  }
}
