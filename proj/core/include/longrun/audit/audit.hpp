// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "longrun/avg/chain.hpp"
#include "longrun/markov/kernel.hpp"
#include "longrun/markov/weight.hpp"
#include "longrun/risk/tilted_kernel.hpp"

namespace longrun::audit {

/// Unit-time kernels indexed by level m, plus the limit kernel P_1 when it
/// is known. All kernels share one state space.
struct KernelFamily {
  std::map<unsigned, markov::TransitionKernel> levels;
  std::optional<markov::TransitionKernel> limit;

  void validate() const;
  const markov::StateSpace& space() const;
  /// Every kernel of the family, limit last.
  std::vector<const markov::TransitionKernel*> members() const;
};

/// A positive numerator over a zero denominator in the equivalence ratio:
/// P^k(x, y) > 0 while P^k(x', y) = 0.
struct EquivalenceViolation {
  std::size_t x = 0;
  std::size_t x_other = 0;
  std::size_t y = 0;
  /// Level of the offending kernel; nullopt for the limit kernel.
  std::optional<unsigned> level;
};

/// sup_{x, x', y} P(x, y) / P(x', y) with 0/0 ignored. Infinite when a
/// violation exists; the first one found is stored in `violation`.
double equivalence_constant(const markov::TransitionKernel& kernel,
                            std::optional<EquivalenceViolation>* violation = nullptr);

struct AuditOptions {
  unsigned k = 1;             ///< step count for the uUE / uEquiv constants
  unsigned fpv_horizon = 20;  ///< n in sup_{n <= horizon} P^n V(x)
};

struct ErgodicityCertificate {
  unsigned k = 1;
  double delta = 0.0;        ///< sup_m Delta(P_m^k)
  double rho = 0.0;          ///< sup_m rho_V(P_m)
  double equiv = 0.0;        ///< sup_m K(P_m^k)
  double fpv_bound = 0.0;    ///< sup_m sup_x sup_n P_m^n V(x) / V(x)
  Eigen::VectorXd fpv_profile;  ///< sup_m sup_n P_m^n V(x), per x
  std::optional<EquivalenceViolation> violation;

  bool delta_pass() const noexcept { return delta < 1.0; }
  bool rho_pass() const noexcept { return rho < 1.0; }
  bool equiv_pass() const noexcept;
  bool fpv_pass() const noexcept;
  bool all_pass() const noexcept {
    return delta_pass() && rho_pass() && equiv_pass() && fpv_pass();
  }
};

ErgodicityCertificate audit(const KernelFamily& family, const markov::LyapunovWeight& v,
                            const AuditOptions& options = {});

/// Columns name,value,threshold,pass; one row per coefficient.
void write_certificate_csv(std::ostream& out, const ErgodicityCertificate& cert);

struct ConvergenceGap {
  unsigned m = 0;
  std::size_t x = 0;
  std::uint64_t j = 0;
  double gap = 0.0;
};

struct ConvergenceGapReport {
  std::vector<ConvergenceGap> gaps;
  /// (x, j) pairs where the gap grows from one level to the next.
  std::size_t monotonicity_violations = 0;
  bool monotone() const noexcept { return monotonicity_violations == 0; }
};

/// ||P_m^j(x, .) - P_1^j(x, .)||_V for j = 1..n against the family's limit
/// kernel (ConfigError when absent).
ConvergenceGapReport kernel_convergence_gap(const KernelFamily& family,
                                            const markov::LyapunovWeight& v,
                                            std::uint64_t n);

struct GeometricBoundRow {
  std::uint64_t n = 0;
  double lhs = 0.0;  ///< max_x ||P^n(x, .) - mu||_V / V(x)
  std::size_t worst_state = 0;
  double rhs = 0.0;  ///< rho^n [1 + (P1_V(x*) + rho V(x*)) / (1 - rho)]
  bool pass = false;
};

/// Requires rho_V(P) < 1 (ErgodicityError "UEd" otherwise).
std::vector<GeometricBoundRow> verify_geometric_bound(const markov::TransitionKernel& kernel,
                                                      const markov::LyapunovWeight& v,
                                                      std::size_t x_star,
                                                      std::uint64_t n_max);

/// exp of the least-squares slope of log lhs over rows with lhs > floor.
/// NaN with fewer than two usable rows.
double fitted_decay_rate(const std::vector<GeometricBoundRow>& rows, double floor = 1e-12);

struct AggregateStep {
  unsigned m_from = 0;
  unsigned m_to = 0;
  double sup_gap = 0.0;  ///< max_x |C_{m_to}(x) - C_{m_from}(x)|
};

/// Successive sup-differences of unit-reward aggregates C_m over the levels,
/// a Cauchy-style stand-in for C_m -> C.
std::vector<AggregateStep> aggregate_decay(const std::map<unsigned, Eigen::VectorXd>& aggregates);

struct TiltedFamily {
  std::map<unsigned, risk::TiltedKernel> levels;
  std::optional<risk::TiltedKernel> limit;
};

struct TiltedGap {
  unsigned m = 0;
  std::size_t x = 0;
  double gap = 0.0;  ///< sum_y |M_m(x, y) - M_1(x, y)|
};

/// Requires family.limit (ConfigError otherwise).
std::vector<TiltedGap> tilted_variation_gap(const TiltedFamily& family);

/// Exact tilted kernels of a finite chain at each level in `levels`, with
/// the level `limit_level` kernel as the proxy limit.
TiltedFamily tilted_family(const avg::ControlledChain& chain,
                           const avg::ChainControl& control,
                           const std::vector<unsigned>& levels, unsigned limit_level,
                           double alpha);

}  // namespace longrun::audit
