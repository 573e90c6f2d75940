// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include "longrun/audit/audit.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "longrun/error.hpp"
#include "longrun/markov/coefficients.hpp"
#include "longrun/markov/invariant.hpp"
#include "longrun/risk/tilted_kernel.hpp"
#include "longrun/util/format.hpp"

namespace longrun::audit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMonotoneSlack = 1e-12;

void check_unit_step(const markov::TransitionKernel& k, const char* what) {
  if (k.step() != markov::StepLength(1))
    throw ConfigError(fmt::format("{} kernel must be unit-time", what));
}

}  // namespace

void KernelFamily::validate() const {
  if (levels.empty() && !limit) throw ConfigError("kernel family is empty");
  const auto& s = space();
  for (const auto& [m, k] : levels) {
    check_unit_step(k, "level");
    if (!(k.space() == s)) throw DimensionError("family kernels differ in state space");
  }
  if (limit) {
    check_unit_step(*limit, "limit");
    if (!(limit->space() == s)) throw DimensionError("limit kernel differs in state space");
  }
}

const markov::StateSpace& KernelFamily::space() const {
  if (!levels.empty()) return levels.begin()->second.space();
  if (limit) return limit->space();
  throw ConfigError("kernel family is empty");
}

std::vector<const markov::TransitionKernel*> KernelFamily::members() const {
  std::vector<const markov::TransitionKernel*> out;
  for (const auto& [m, k] : levels) out.push_back(&k);
  if (limit) out.push_back(&*limit);
  return out;
}

double equivalence_constant(const markov::TransitionKernel& kernel,
                            std::optional<EquivalenceViolation>* violation) {
  const auto& p = kernel.rows();
  const auto n = p.rows();
  double best = 0.0;
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index x2 = 0; x2 < n; ++x2) {
      if (x == x2) continue;
      for (Eigen::Index y = 0; y < n; ++y) {
        const double num = p(x, y);
        const double den = p(x2, y);
        if (den > 0.0) {
          best = std::max(best, num / den);
        } else if (num > 0.0) {
          if (violation && !*violation)
            *violation = EquivalenceViolation{static_cast<std::size_t>(x),
                                              static_cast<std::size_t>(x2),
                                              static_cast<std::size_t>(y), std::nullopt};
          best = kInf;
        }
      }
    }
  }
  // A single state, or identical rows everywhere.
  if (n == 1 || best == 0.0) best = 1.0;
  return best;
}

bool ErgodicityCertificate::equiv_pass() const noexcept {
  return std::isfinite(equiv) && !violation;
}

bool ErgodicityCertificate::fpv_pass() const noexcept { return std::isfinite(fpv_bound); }

ErgodicityCertificate audit(const KernelFamily& family, const markov::LyapunovWeight& v,
                            const AuditOptions& options) {
  family.validate();
  if (options.k == 0) throw ConfigError("step count k must be >= 1");
  if (v.size() != family.space().size())
    throw DimensionError("weight does not match the family's state space");

  // Audit the levels; the limit kernel is audited only for a bare family.
  std::vector<std::pair<std::optional<unsigned>, const markov::TransitionKernel*>> audited;
  for (const auto& [m, k] : family.levels) audited.emplace_back(m, &k);
  if (audited.empty()) audited.emplace_back(std::nullopt, &*family.limit);

  ErgodicityCertificate cert;
  cert.k = options.k;
  const auto n = static_cast<Eigen::Index>(v.size());
  cert.fpv_profile = Eigen::VectorXd::Zero(n);
  for (const auto& [level, kernel] : audited) {
    const auto kstep = markov::power(*kernel, options.k);
    cert.delta = std::max(cert.delta, markov::dobrushin_delta(kstep));
    cert.rho = std::max(cert.rho, markov::kartashov_rho(*kernel, v));
    std::optional<EquivalenceViolation> viol;
    cert.equiv = std::max(cert.equiv, equivalence_constant(kstep, &viol));
    if (viol && !cert.violation) {
      viol->level = level;
      cert.violation = viol;
    }
    Eigen::VectorXd pv = v.values();
    for (unsigned j = 1; j <= options.fpv_horizon; ++j) {
      pv = kernel->rows() * pv;
      cert.fpv_profile = cert.fpv_profile.cwiseMax(pv);
      cert.fpv_bound = std::max(cert.fpv_bound, (pv.array() / v.values().array()).maxCoeff());
    }
  }
  return cert;
}

void write_certificate_csv(std::ostream& out, const ErgodicityCertificate& cert) {
  auto row = [&](const char* name, double value, const char* threshold, bool pass) {
    out << name << ',' << util::format_significant(value, 15) << ',' << threshold << ','
        << (pass ? "pass" : "fail") << '\n';
  };
  out << "name,value,threshold,pass\n";
  row("delta", cert.delta, "1", cert.delta_pass());
  row("rho", cert.rho, "1", cert.rho_pass());
  row("equiv_ratio", cert.equiv, "inf", cert.equiv_pass());
  row("fpv", cert.fpv_bound, "inf", cert.fpv_pass());
}

ConvergenceGapReport kernel_convergence_gap(const KernelFamily& family,
                                            const markov::LyapunovWeight& v,
                                            std::uint64_t n) {
  family.validate();
  if (!family.limit) throw ConfigError("convergence gaps need a limit kernel");
  if (v.size() != family.space().size())
    throw DimensionError("weight does not match the family's state space");
  const auto states = static_cast<Eigen::Index>(v.size());

  std::vector<Eigen::MatrixXd> limit_powers;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(states, states);
  for (std::uint64_t j = 1; j <= n; ++j) {
    acc = acc * family.limit->rows();
    limit_powers.push_back(acc);
  }

  ConvergenceGapReport report;
  // Previous level's gaps indexed [j-1][x].
  std::vector<std::vector<double>> previous;
  for (const auto& [m, kernel] : family.levels) {
    std::vector<std::vector<double>> current(n, std::vector<double>(states));
    Eigen::MatrixXd pm = Eigen::MatrixXd::Identity(states, states);
    for (std::uint64_t j = 1; j <= n; ++j) {
      pm = pm * kernel.rows();
      for (Eigen::Index x = 0; x < states; ++x) {
        const double g = markov::v_norm_measure_diff(
            pm.row(x).transpose(), limit_powers[j - 1].row(x).transpose(), v);
        current[j - 1][x] = g;
        report.gaps.push_back(ConvergenceGap{m, static_cast<std::size_t>(x), j, g});
        if (!previous.empty() && g > previous[j - 1][x] + kMonotoneSlack)
          ++report.monotonicity_violations;
      }
    }
    previous = std::move(current);
  }
  return report;
}

std::vector<GeometricBoundRow> verify_geometric_bound(const markov::TransitionKernel& kernel,
                                                      const markov::LyapunovWeight& v,
                                                      std::size_t x_star,
                                                      std::uint64_t n_max) {
  if (v.size() != kernel.size()) throw DimensionError("weight does not match the kernel");
  if (x_star >= kernel.size()) throw DimensionError("reference state out of range");
  const double rho = markov::kartashov_rho(kernel, v);
  if (!(rho < 1.0))
    throw ErgodicityError("UEd", fmt::format("Kartashov coefficient {:g} is not below 1", rho));
  const Eigen::VectorXd mu = markov::invariant_measure(kernel).weights;
  const auto xs = static_cast<Eigen::Index>(x_star);
  const double p1v = kernel.rows().row(xs).dot(v.values());
  const double constant = 1.0 + (p1v + rho * v(x_star)) / (1.0 - rho);

  const auto states = static_cast<Eigen::Index>(kernel.size());
  std::vector<GeometricBoundRow> rows;
  Eigen::MatrixXd pn = Eigen::MatrixXd::Identity(states, states);
  double rho_n = 1.0;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    pn = pn * kernel.rows();
    rho_n *= rho;
    GeometricBoundRow row;
    row.n = n;
    row.rhs = rho_n * constant;
    row.lhs = -1.0;
    for (Eigen::Index x = 0; x < states; ++x) {
      const double r = markov::v_norm_measure_diff(pn.row(x).transpose(), mu, v) / v(x);
      if (r > row.lhs) {
        row.lhs = r;
        row.worst_state = static_cast<std::size_t>(x);
      }
    }
    row.pass = row.lhs <= row.rhs + 1e-12;
    rows.push_back(row);
  }
  return rows;
}

double fitted_decay_rate(const std::vector<GeometricBoundRow>& rows, double floor) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t count = 0;
  for (const auto& r : rows) {
    if (!(r.lhs > floor)) continue;
    const double x = static_cast<double>(r.n);
    const double y = std::log(r.lhs);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) return std::numeric_limits<double>::quiet_NaN();
  const double c = static_cast<double>(count);
  const double denom = c * sxx - sx * sx;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::exp((c * sxy - sx * sy) / denom);
}

std::vector<AggregateStep> aggregate_decay(const std::map<unsigned, Eigen::VectorXd>& aggregates) {
  std::vector<AggregateStep> out;
  const Eigen::VectorXd* previous = nullptr;
  unsigned previous_m = 0;
  for (const auto& [m, c] : aggregates) {
    if (previous) {
      if (previous->size() != c.size()) throw DimensionError("aggregates differ in length");
      out.push_back(AggregateStep{previous_m, m, (c - *previous).cwiseAbs().maxCoeff()});
    }
    previous = &c;
    previous_m = m;
  }
  return out;
}

std::vector<TiltedGap> tilted_variation_gap(const TiltedFamily& family) {
  if (!family.limit) throw ConfigError("tilted gaps need a limit kernel");
  const auto& lim = *family.limit;
  const Eigen::MatrixXd ml = lim.dense();
  std::vector<TiltedGap> out;
  for (const auto& [m, k] : family.levels) {
    if (!(k.space() == lim.space())) throw DimensionError("tilted kernels differ in state space");
    if (k.alpha() != lim.alpha()) throw InvalidArgument("tilted kernels differ in alpha");
    const Eigen::MatrixXd mm = k.dense();
    for (Eigen::Index x = 0; x < mm.rows(); ++x) {
      const double g = (mm.row(x) - ml.row(x)).cwiseAbs().sum();
      if (!std::isfinite(g)) throw InvalidArgument("tilted kernel exceeds double range");
      out.push_back(TiltedGap{m, static_cast<std::size_t>(x), g});
    }
  }
  return out;
}

TiltedFamily tilted_family(const avg::ControlledChain& chain,
                           const avg::ChainControl& control,
                           const std::vector<unsigned>& levels, unsigned limit_level,
                           double alpha) {
  const Eigen::VectorXd c = chain.reward(control);
  TiltedFamily family;
  for (unsigned m : levels) {
    family.levels.emplace(m, risk::build_tilted_kernel(chain.substep_kernel(control, m), c,
                                                       alpha, m));
  }
  family.limit = risk::build_tilted_kernel(chain.substep_kernel(control, limit_level), c,
                                           alpha, limit_level);
  return family;
}

}  // namespace longrun::audit
