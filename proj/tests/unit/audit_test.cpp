// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "longrun/audit/audit.hpp"
#include "longrun/avg/chain.hpp"
#include "longrun/error.hpp"
#include "longrun/markov/coefficients.hpp"
#include "oracles.hpp"

namespace la = longrun::avg;
namespace lau = longrun::audit;
namespace lm = longrun::markov;
namespace lt = longrun::testing;

namespace {

lm::TransitionKernel wrap(const Eigen::MatrixXd& p) {
  return lm::TransitionKernel(lm::StateSpace::indexed(static_cast<std::size_t>(p.rows())), p);
}

lau::KernelFamily single(const Eigen::MatrixXd& p) {
  lau::KernelFamily family;
  family.levels.emplace(0u, wrap(p));
  return family;
}

Eigen::MatrixXd two_state() {
  Eigen::MatrixXd p(2, 2);
  p << 0.9, 0.1, 0.2, 0.8;
  return p;
}

}  // namespace

TEST(Audit, TwoStateCertificate) {
  const auto cert = lau::audit(single(two_state()), lm::LyapunovWeight::unit(2));
  EXPECT_NEAR(cert.delta, 0.7, 1e-15);
  EXPECT_NEAR(cert.rho, 0.7, 1e-15);
  EXPECT_NEAR(cert.equiv, 8.0, 1e-12);
  EXPECT_NEAR(cert.fpv_bound, 1.0, 1e-15);
  EXPECT_TRUE(cert.all_pass());
  std::ostringstream csv;
  lau::write_certificate_csv(csv, cert);
  EXPECT_EQ(csv.str(),
            "name,value,threshold,pass\n"
            "delta,0.7,1,pass\n"
            "rho,0.7,1,pass\n"
            "equiv_ratio,8,inf,pass\n"
            "fpv,1,inf,pass\n");
}

TEST(Audit, IdenticalRowsAreTrivial) {
  Eigen::MatrixXd p(3, 3);
  p.rowwise() = Eigen::RowVector3d(0.2, 0.3, 0.5);
  const auto cert = lau::audit(single(p), lm::LyapunovWeight::unit(3));
  EXPECT_NEAR(cert.delta, 0.0, 1e-15);
  EXPECT_NEAR(cert.equiv, 1.0, 1e-15);
  EXPECT_TRUE(cert.all_pass());
}

TEST(Audit, DisconnectedKernelReportsViolation) {
  lau::KernelFamily family;
  family.levels.emplace(0u, wrap(two_state()));
  family.levels.emplace(3u, wrap(Eigen::MatrixXd::Identity(2, 2)));
  const auto cert = lau::audit(family, lm::LyapunovWeight::unit(2));
  EXPECT_NEAR(cert.delta, 1.0, 1e-15);
  EXPECT_FALSE(cert.delta_pass());
  EXPECT_TRUE(std::isinf(cert.equiv));
  ASSERT_TRUE(cert.violation.has_value());
  EXPECT_EQ(cert.violation->level, 3u);
  EXPECT_NE(cert.violation->x, cert.violation->x_other);
  EXPECT_FALSE(cert.all_pass());
  std::ostringstream csv;
  lau::write_certificate_csv(csv, cert);
  EXPECT_NE(csv.str().find("equiv_ratio,inf,inf,fail"), std::string::npos);
}

TEST(Audit, StepCountSmoothsZeros) {
  // A cycle with holding: one step has zeros, two steps are positive.
  Eigen::MatrixXd p(3, 3);
  p << 0.5, 0.5, 0.0, 0.0, 0.5, 0.5, 0.5, 0.0, 0.5;
  EXPECT_TRUE(std::isinf(lau::equivalence_constant(wrap(p))));
  lau::AuditOptions opts;
  opts.k = 2;
  const auto cert = lau::audit(single(p), lm::LyapunovWeight::unit(3), opts);
  EXPECT_TRUE(std::isfinite(cert.equiv));
  EXPECT_TRUE(cert.delta_pass());
  EXPECT_FALSE(cert.violation.has_value());
}

TEST(Audit, Validation) {
  lau::KernelFamily empty;
  EXPECT_THROW(lau::audit(empty, lm::LyapunovWeight::unit(2)), longrun::Error);
  EXPECT_THROW(lau::audit(single(two_state()), lm::LyapunovWeight::unit(3)),
               longrun::DimensionError);
  lau::AuditOptions opts;
  opts.k = 0;
  EXPECT_THROW(lau::audit(single(two_state()), lm::LyapunovWeight::unit(2), opts),
               longrun::ConfigError);
  lau::KernelFamily half;
  half.levels.emplace(1u, lm::TransitionKernel(lm::StateSpace::indexed(2), two_state(),
                                               lm::StepLength(1, 2)));
  EXPECT_THROW(lau::audit(half, lm::LyapunovWeight::unit(2)), longrun::Error);
}

TEST(Audit, InvariantUnderRelabelling) {
  lt::Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 4;
    const Eigen::MatrixXd p = lt::random_ergodic(rng, n);
    const Eigen::VectorXd v = lt::random_vector(rng, n, 1, 3);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::MatrixXd q(n, n);
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) {
      w(i) = v(perm[i]);
      for (int j = 0; j < n; ++j) q(i, j) = p(perm[i], perm[j]);
    }
    lau::AuditOptions opts;
    opts.k = 3;
    const auto a = lau::audit(single(p), lm::LyapunovWeight(v), opts);
    const auto b = lau::audit(single(q), lm::LyapunovWeight(w), opts);
    EXPECT_NEAR(a.delta, b.delta, 1e-12);
    EXPECT_NEAR(a.rho, b.rho, 1e-12);
    EXPECT_NEAR(a.equiv, b.equiv, 1e-9 * a.equiv);
    EXPECT_NEAR(a.fpv_bound, b.fpv_bound, 1e-12);
  }
}

TEST(Audit, LimitRatioBoundedByUniformConstant) {
  // P_t = (1 - t) P + t Q -> P as t = 2^-j -> 0; the ratio is continuous in the
  // entries, so the limit cannot exceed the sup beyond rounding.
  lt::Rng rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd p = lt::random_positive(rng, 4);
    const Eigen::MatrixXd q = lt::random_positive(rng, 4);
    lau::KernelFamily family;
    for (unsigned j = 0; j <= 40; ++j) {
      const double t = std::ldexp(1.0, -static_cast<int>(j));
      family.levels.emplace(j, wrap((1.0 - t) * p + t * q));
    }
    family.limit = wrap(p);
    const auto cert = lau::audit(family, lm::LyapunovWeight::unit(4));
    EXPECT_LE(lau::equivalence_constant(*family.limit), cert.equiv + 1e-9);
  }
}

TEST(ConvergenceGap, ZeroAgainstItselfAndShrinking) {
  lt::Rng rng(33);
  const Eigen::MatrixXd p = lt::random_positive(rng, 3);
  const Eigen::MatrixXd q = lt::random_positive(rng, 3);
  lau::KernelFamily family;
  for (unsigned m = 1; m <= 5; ++m) {
    const double t = std::ldexp(1.0, -static_cast<int>(m));
    family.levels.emplace(m, wrap((1.0 - t) * p + t * q));
  }
  family.limit = wrap(p);
  const auto report = lau::kernel_convergence_gap(family, lm::LyapunovWeight::unit(3), 4);
  EXPECT_EQ(report.gaps.size(), 5u * 3u * 4u);
  EXPECT_TRUE(report.monotone());
  for (const auto& g : report.gaps) EXPECT_GE(g.gap, 0.0);

  lau::KernelFamily self;
  self.levels.emplace(0u, wrap(p));
  self.limit = wrap(p);
  for (const auto& g : lau::kernel_convergence_gap(self, lm::LyapunovWeight::unit(3), 3).gaps)
    EXPECT_NEAR(g.gap, 0.0, 1e-15);
  EXPECT_THROW(lau::kernel_convergence_gap(single(p), lm::LyapunovWeight::unit(3), 2),
               longrun::ConfigError);
}

TEST(GeometricBound, HoldsOnRandomContractingChains) {
  lt::Rng rng(34);
  int checked = 0;
  for (int trial = 0; trial < 60 && checked < 25; ++trial) {
    const int n = 2 + trial % 6;
    const Eigen::MatrixXd p = lt::random_ergodic(rng, n);
    const lm::LyapunovWeight v(lt::random_vector(rng, n, 1, 2));
    const double rho = lm::kartashov_rho(wrap(p), v);
    if (!(rho < 1.0)) continue;
    ++checked;
    const auto x_star = static_cast<std::size_t>(trial % n);
    const auto rows = lau::verify_geometric_bound(wrap(p), v, x_star, 40);
    ASSERT_EQ(rows.size(), 40u);
    for (const auto& row : rows) EXPECT_TRUE(row.pass) << "n = " << row.n;
    // Two-state chains decay at exactly rho, so allow fit rounding.
    const double rate = lau::fitted_decay_rate(rows, 1e-9);
    if (std::isfinite(rate)) EXPECT_LE(rate, rho * (1.0 + 1e-5));
  }
  EXPECT_GE(checked, 10);
  EXPECT_THROW(lau::verify_geometric_bound(wrap(Eigen::MatrixXd::Identity(2, 2)),
                                           lm::LyapunovWeight::unit(2), 0, 5),
               longrun::ErgodicityError);
}

TEST(GeometricBound, FittedRateNeedsTwoRows) {
  std::vector<lau::GeometricBoundRow> rows{{1, 0.5, 0, 1.0, true}};
  EXPECT_TRUE(std::isnan(lau::fitted_decay_rate(rows)));
  rows.push_back({2, 0.25, 0, 1.0, true});
  rows.push_back({3, 0.125, 0, 1.0, true});
  EXPECT_NEAR(lau::fitted_decay_rate(rows), 0.5, 1e-12);
}

TEST(AggregateDecay, SupDifferences) {
  std::map<unsigned, Eigen::VectorXd> c;
  c[0] = Eigen::Vector2d(1.0, 2.0);
  c[1] = Eigen::Vector2d(1.5, 2.1);
  c[3] = Eigen::Vector2d(1.4, 2.15);
  const auto steps = lau::aggregate_decay(c);
  ASSERT_EQ(steps.size(), 2u);
  EXPECT_EQ(steps[1].m_from, 1u);
  EXPECT_EQ(steps[1].m_to, 3u);
  EXPECT_NEAR(steps[0].sup_gap, 0.5, 1e-15);
  EXPECT_NEAR(steps[1].sup_gap, 0.1, 1e-15);
}

TEST(TiltedGap, ZeroRewardMatchesKernelGap) {
  lt::Rng rng(35);
  const la::ControlledChain chain(lm::StateSpace::indexed(3), lt::random_ergodic(rng, 3),
                                  Eigen::VectorXd::Zero(3));
  const la::ChainControl u{"zero", Eigen::VectorXd::Zero(3)};
  const std::vector<unsigned> levels{0, 1, 2};
  const auto tilted = lau::tilted_family(chain, u, levels, 4, -1.0);
  const auto gaps = lau::tilted_variation_gap(tilted);
  ASSERT_EQ(gaps.size(), 9u);

  lau::KernelFamily plain;
  for (unsigned m : levels)
    plain.levels.emplace(m, la::unit_kernel(chain.substep_kernel(u, m), m));
  plain.limit = la::unit_kernel(chain.substep_kernel(u, 4), 4);
  const auto report = lau::kernel_convergence_gap(plain, lm::LyapunovWeight::unit(3), 1);
  for (const auto& g : gaps) {
    const auto it = std::find_if(report.gaps.begin(), report.gaps.end(), [&](const auto& r) {
      return r.m == g.m && r.x == g.x;
    });
    ASSERT_NE(it, report.gaps.end());
    EXPECT_NEAR(g.gap, it->gap, 1e-12);
  }
  lau::TiltedFamily no_limit;
  EXPECT_THROW(lau::tilted_variation_gap(no_limit), longrun::ConfigError);
}
