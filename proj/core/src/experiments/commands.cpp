// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include "longrun/experiments/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "longrun/audit/audit.hpp"
#include "longrun/error.hpp"
#include "longrun/experiments/manifest.hpp"
#include "longrun/risk/risk_mc.hpp"
#include "longrun/risk/sweeps.hpp"
#include "longrun/sde/kernel_extraction.hpp"
#include "longrun/util/format.hpp"
#include "longrun/version.hpp"

namespace longrun::experiments {

namespace {

using util::format_roundtrip;

std::string num(double v) { return format_roundtrip(v); }

template <typename T>
std::string opt_num(const std::optional<T>& v) {
  return v ? num(static_cast<double>(*v)) : std::string{};
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
  return out;
}

avg::SweepOptions sweep_options(const ExperimentConfig& config, unsigned threads,
                                const std::optional<sde::SDEModel>& model,
                                const std::optional<markov::StateSpace>& grid) {
  avg::SweepOptions o;
  o.method = config.method;
  o.mc = avg::McOptions{config.mc.horizon, config.mc.replicates, config.seed, threads,
                        config.mc.burn_in};
  o.chain_start = config.mc.start_state;
  o.x0 = config.mc.x0;
  if (model && o.x0.empty()) {
    o.x0.assign(model->dim, 0.0);
    if (model->reflected()) {
      const auto& b = model->box();
      for (std::size_t i = 0; i < model->dim; ++i) o.x0[i] = 0.5 * (b.lower[i] + b.upper[i]);
    }
  }
  if (model && o.x0.size() != model->dim)
    throw ConfigError(fmt::format("monte_carlo.x0: expected {} values", model->dim));
  o.grid = grid;
  if (config.grid) {
    o.samples_per_state = config.grid->samples_per_state;
    o.batches = config.grid->batches;
    o.base_substeps = config.grid->base_substeps;
    o.couple_levels = config.grid->couple_levels;
  }
  return o;
}

void write_avg_csv(std::ostream& out, const std::vector<avg::SweepRow>& rows) {
  out << "sweep_var,value,std_error,method,m,seed,difference,difference_se,measure_gap\n";
  for (const auto& r : rows) {
    out << num(r.sweep_var) << ',' << num(r.result.value) << ',' << num(r.result.std_error)
        << ',' << avg::to_string(r.result.method) << ',' << r.result.m << ',' << r.seed << ','
        << opt_num(r.difference) << ',' << (r.difference ? num(r.difference_se) : "") << ','
        << opt_num(r.measure_gap) << '\n';
  }
}

void write_risk_csv(std::ostream& out, const std::vector<risk::RiskRow>& rows) {
  out << "sweep_var,lambda,span_w,iterations,residual,oracle_lambda,oracle_gap,std_error,"
         "difference,difference_se\n";
  for (const auto& r : rows) {
    const auto& s = r.solution;
    out << num(r.sweep_var) << ',' << num(s.lambda) << ',' << num(s.span_w) << ','
        << s.iterations << ',' << num(s.residual) << ','
        << (r.oracle ? num(r.oracle->lambda) : "") << ','
        << (r.oracle ? num(r.oracle_gap) : "") << ',' << num(r.std_error) << ','
        << opt_num(r.difference) << ',' << (r.difference ? num(r.difference_se) : "") << '\n';
  }
}

void write_risk_mc_csv(std::ostream& out, const std::vector<std::pair<unsigned, risk::RiskMcResult>>& rows) {
  out << "sweep_var,lambda,span_w,iterations,residual,oracle_lambda,oracle_gap,std_error,"
         "difference,difference_se\n";
  std::optional<double> previous;
  for (const auto& [m, r] : rows) {
    out << m << ',' << num(r.value) << ",,,,,," << num(r.std_error) << ',';
    if (previous) out << num(std::abs(r.value - *previous));
    out << ",\n";
    previous = r.value;
  }
}

std::string level_label(const std::optional<unsigned>& level) {
  return level ? fmt::format("m={}", *level) : std::string("limit");
}

struct SdeSetup {
  sde::SDEModel model;
  std::optional<markov::StateSpace> grid;
  sde::MarkovControl control;
  RewardFunction reward;
};

SdeSetup sde_setup(const ExperimentConfig& config) {
  auto model = make_sde_model(config);
  auto grid = make_grid(config, model);
  auto control = make_sde_control(config, model, grid);
  auto reward = make_reward(config, model, grid);
  return SdeSetup{std::move(model), std::move(grid), std::move(control), std::move(reward)};
}

std::string iso_time(std::time_t t) {
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string manifest_time() {
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (end && *end == '\0' && end != epoch) return iso_time(static_cast<std::time_t>(v));
    throw ConfigError("SOURCE_DATE_EPOCH must be an integer");
  }
  return iso_time(std::chrono::system_clock::to_time_t(std::chrono::system_clock::now()));
}

}  // namespace

ExperimentConfig apply_overrides(ExperimentConfig config, const Overrides& o) {
  if (o.seed) config.seed = *o.seed;
  if (o.out_dir) config.output_dir = *o.out_dir;
  if (o.alpha) {
    if (*o.alpha == 0.0 || !std::isfinite(*o.alpha))
      throw ConfigError("--alpha: must be finite and nonzero");
    config.risk.alphas = {*o.alpha};
  }
  if (o.tolerance) {
    if (!(*o.tolerance > 0.0)) throw ConfigError("--tol: must be positive");
    config.risk.tolerance = *o.tolerance;
  }
  if (o.max_iterations) {
    if (*o.max_iterations == 0) throw ConfigError("--max-iters: must be positive");
    config.risk.max_iterations = *o.max_iterations;
  }
  if (o.x_ref) config.risk.x_ref = *o.x_ref;
  return config;
}

std::filesystem::path output_dir(const ExperimentConfig& config) {
  return config.output_dir.empty() ? std::filesystem::path("longrun-out")
                                   : std::filesystem::path(config.output_dir);
}

int cmd_audit(const ExperimentConfig& config, unsigned threads, std::ostream& log) {
  audit::KernelFamily family;
  std::optional<markov::StateSpace> space;
  // Proxy limit kernels are built like any other level.
  std::vector<unsigned> wanted = config.levels;
  if (config.audit.limit_level) {
    for (unsigned m : config.levels) {
      if (m >= *config.audit.limit_level)
        throw ConfigError("audit.limit_level: must exceed every entry of levels");
    }
    wanted.push_back(*config.audit.limit_level);
  }
  std::map<unsigned, markov::TransitionKernel> kernels;
  std::map<unsigned, Eigen::VectorXd> aggregates;
  if (config.is_chain()) {
    const auto chain = make_chain(config);
    const auto control = make_chain_control(config, chain);
    for (unsigned m : wanted) {
      const auto sub = chain.substep_kernel(control, m);
      kernels.emplace(m, avg::unit_kernel(sub, m));
      aggregates.emplace(m, avg::unit_aggregate(sub, chain.reward(control), m));
    }
  } else {
    const auto s = sde_setup(config);
    if (!s.grid) throw ConfigError("grid: the audit of an SDE model needs a grid");
    const auto options = sweep_options(config, threads, s.model, s.grid);
    for (unsigned m : wanted) {
      const sde::DiscretizationLevel level{m, avg::substeps_for(m, wanted.back(), options)};
      const auto sample = sde::sample_unit_blocks(s.model, s.control, &s.reward, *s.grid, level,
                                                  options.samples_per_state, config.seed,
                                                  threads);
      kernels.emplace(m, sde::empirical_unit_kernel(sample));
      aggregates.emplace(m, sde::unit_reward_means(sample));
    }
  }
  for (unsigned m : config.levels) family.levels.emplace(m, kernels.at(m));
  if (config.audit.limit_level) family.limit = kernels.at(*config.audit.limit_level);

  const auto v = make_weight(config, family.space());
  const auto cert =
      audit::audit(family, v, audit::AuditOptions{config.audit.k, config.audit.fpv_horizon});
  const auto dir = output_dir(config);
  {
    auto out = open_output(dir / "certificate.csv");
    audit::write_certificate_csv(out, cert);
  }
  std::ostringstream summary;
  audit::write_certificate_csv(summary, cert);
  log << summary.str();
  if (cert.violation) {
    const auto& s = family.space();
    log << fmt::format("equivalence violation at {}: P(x={}, y={}) > 0 but P(x'={}, y={}) = 0\n",
                       level_label(cert.violation->level), s.label(cert.violation->x),
                       s.label(cert.violation->y), s.label(cert.violation->x_other),
                       s.label(cert.violation->y));
  }
  const auto steps = audit::aggregate_decay(aggregates);
  if (!steps.empty()) {
    auto out = open_output(dir / "aggregates.csv");
    out << "m_from,m_to,sup_gap\n";
    for (const auto& st : steps) {
      out << st.m_from << ',' << st.m_to << ',' << num(st.sup_gap) << '\n';
      log << fmt::format("sup |C_{} - C_{}| = {}\n", st.m_to, st.m_from, num(st.sup_gap));
    }
  }
  if (family.limit) {
    const auto report = audit::kernel_convergence_gap(family, v, config.audit.gap_horizon);
    auto out = open_output(dir / "gaps.csv");
    out << "m,x,j,gap\n";
    for (const auto& g : report.gaps)
      out << g.m << ',' << family.space().label(g.x) << ',' << g.j << ',' << num(g.gap) << '\n';
    log << fmt::format("convergence gaps against m={}: {} monotonicity violations\n",
                       *config.audit.limit_level, report.monotonicity_violations);
  }
  return cert.all_pass() ? kExitOk : kExitFailure;
}

int cmd_avg(const ExperimentConfig& config, unsigned threads, std::ostream& log) {
  std::vector<avg::SweepRow> rows;
  const bool stability = config.sweep.kind == SweepSpec::Kind::stability;
  if (config.is_chain()) {
    const auto chain = make_chain(config);
    const auto control = make_chain_control(config, chain);
    const auto options = sweep_options(config, threads, std::nullopt, std::nullopt);
    std::optional<markov::LyapunovWeight> weight;
    if (config.audit.weight.kind != WeightSpec::Kind::unit) weight = make_weight(config, chain.space);
    rows = stability ? avg::stability_sweep(chain, scaled_family(control), control,
                                            config.sweep.level, config.sweep.indices, options,
                                            weight)
                     : avg::convergence_sweep(chain, control, config.levels, options);
  } else {
    const auto s = sde_setup(config);
    const auto options = sweep_options(config, threads, s.model, s.grid);
    rows = stability ? avg::stability_sweep(s.model, scaled_family(s.control), s.control,
                                            s.reward, config.sweep.level, config.sweep.indices,
                                            options)
                     : avg::convergence_sweep(s.model, s.control, s.reward, config.levels,
                                              options);
  }
  auto out = open_output(output_dir(config) / "avg.csv");
  write_avg_csv(out, rows);
  for (const auto& r : rows) {
    log << fmt::format("{} {}: J = {} (se {})\n", stability ? "n" : "m", num(r.sweep_var),
                       num(r.result.value), num(r.result.std_error));
  }
  return kExitOk;
}

int cmd_risk(const ExperimentConfig& config, unsigned threads, std::ostream& log) {
  if (config.risk.alphas.empty()) throw ConfigError("risk.alpha: required for the risk command");
  const bool stability = config.sweep.kind == SweepSpec::Kind::stability;
  const auto dir = output_dir(config);
  int code = kExitOk;
  for (std::size_t i = 0; i < config.risk.alphas.size(); ++i) {
    const double alpha = config.risk.alphas[i];
    const auto name = config.risk.alphas.size() == 1 ? std::string("risk.csv")
                                                     : fmt::format("risk_alpha_{}.csv", i);
    risk::RiskSweepOptions options;
    options.params = risk::RiskParams{alpha, config.risk.tolerance, config.risk.max_iterations,
                                      config.risk.x_ref};
    options.run_oracle = config.risk.oracle;
    std::vector<risk::RiskRow> rows;
    std::optional<risk::UniformGate> gate;

    if (config.is_chain()) {
      const auto chain = make_chain(config);
      const auto control = make_chain_control(config, chain);
      options.base = sweep_options(config, threads, std::nullopt, std::nullopt);
      if (stability) {
        auto res = risk::risk_stability_sweep(chain, scaled_family(control), control,
                                              config.sweep.level, config.sweep.indices, options,
                                              config.audit.k);
        gate = res.gate;
        rows = std::move(res.rows);
      } else {
        rows = risk::risk_convergence_sweep(chain, control, config.levels, options);
      }
    } else {
      const auto s = sde_setup(config);
      options.base = sweep_options(config, threads, s.model, s.grid);
      if (!s.grid) {
        if (stability) throw ConfigError("grid: risk stability sweeps need a grid");
        std::vector<std::pair<unsigned, risk::RiskMcResult>> mc_rows;
        risk::RiskMcOptions mo;
        mo.horizon = config.mc.horizon;
        mo.replicates = config.mc.replicates;
        mo.seed = config.seed;
        mo.threads = threads;
        for (unsigned m : config.levels) {
          const sde::DiscretizationLevel level{m,
                                               avg::substeps_for(m, config.levels.back(), options.base)};
          mc_rows.emplace_back(m, risk::risk_mc(s.model, s.control, s.reward, level,
                                                options.base.x0, alpha, mo));
          if (mc_rows.back().second.warning)
            log << fmt::format("alpha {} m {}: {}\n", num(alpha), m, *mc_rows.back().second.warning);
        }
        auto out = open_output(dir / name);
        write_risk_mc_csv(out, mc_rows);
        for (const auto& [m, r] : mc_rows)
          log << fmt::format("alpha {} m {}: lambda = {} (se {})\n", num(alpha), m,
                             num(r.value), num(r.std_error));
        continue;
      }
      if (stability) {
        auto res = risk::risk_stability_sweep(s.model, scaled_family(s.control), s.control,
                                              s.reward, config.sweep.level,
                                              config.sweep.indices, options, config.audit.k);
        gate = res.gate;
        rows = std::move(res.rows);
      } else {
        rows = risk::risk_convergence_sweep(s.model, s.control, s.reward, config.levels, options);
      }
    }

    if (gate) {
      log << fmt::format("alpha {}: uniform gate sup delta = {}, sup K = {} ({})\n", num(alpha),
                         num(gate->delta_sup), num(gate->equiv_sup),
                         gate->passed ? "pass" : "fail");
      if (!gate->passed) {
        code = kExitFailure;
        continue;
      }
    }
    auto out = open_output(dir / name);
    write_risk_csv(out, rows);
    for (const auto& r : rows) {
      log << fmt::format("alpha {} {} {}: lambda = {}", num(alpha), stability ? "n" : "m",
                         num(r.sweep_var), num(r.solution.lambda));
      if (r.oracle) log << fmt::format(" (oracle gap {})", num(r.oracle_gap));
      log << '\n';
    }
  }
  return code;
}

int cmd_manifest(const ManifestRequest& request, std::ostream& log) {
  const auto path = request.dir / "manifest.json";
  if (request.verify) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(fmt::format("cannot read '{}'", path.string()));
    std::ostringstream text;
    text << in.rdbuf();
    const auto manifest = RunManifest::from_json(text.str());
    const auto check = verify_manifest(manifest, request.dir);
    if (!check.missing.empty()) {
      std::string list;
      for (const auto& f : check.missing) list += (list.empty() ? "" : ", ") + f;
      throw ConfigError(fmt::format("missing outputs: {}", list));
    }
    for (const auto& f : check.mismatched) log << "checksum mismatch: " << f << '\n';
    if (!check.ok()) return kExitFailure;
    log << fmt::format("{} files verified\n", manifest.files.size());
    return kExitOk;
  }

  auto manifest = build_manifest(request.dir, manifest_time());
  if (manifest.files.empty())
    throw ConfigError(fmt::format("no outputs in '{}'", request.dir.string()));
  manifest.tool_version = std::string(kVersion);
  if (request.config) {
    manifest.config_sha256 = sha256_file(*request.config);
    manifest.seed = load_config(*request.config).seed;
  }
  if (request.seed) manifest.seed = request.seed;
  {
    auto out = open_output(path);
    out << manifest.to_json();
  }
  for (const auto& [name, hash] : manifest.files) log << hash << "  " << name << '\n';
  return kExitOk;
}

int exit_code_for(const std::exception& error) noexcept {
  if (dynamic_cast<const ErgodicityError*>(&error) ||
      dynamic_cast<const ConvergenceError*>(&error) ||
      dynamic_cast<const DivergenceError*>(&error) ||
      dynamic_cast<const DomainError*>(&error))
    return kExitFailure;
  return kExitUsage;
}

}  // namespace longrun::experiments
