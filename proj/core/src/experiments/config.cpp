// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include "longrun/experiments/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "longrun/error.hpp"
#include "longrun/sde/kernel_extraction.hpp"

namespace longrun::experiments {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(fmt::format("{}: {}", path.empty() ? "<root>" : path, what));
}

std::string index_path(const std::string& path, std::size_t i) {
  return fmt::format("{}[{}]", path, i);
}

double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

std::uint64_t as_u64(const json& j, const std::string& path) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() &&
                                 j.get<std::int64_t>() < 0))
    fail(path, "expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

unsigned as_unsigned(const json& j, const std::string& path, unsigned max) {
  const auto v = as_u64(j, path);
  if (v > max) fail(path, fmt::format("must be at most {}", max));
  return static_cast<unsigned>(v);
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> as_doubles(const json& j, const std::string& path) {
  if (j.is_number()) return {as_double(j, path)};
  if (!j.is_array()) fail(path, "expected a number or an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_double(j[i], index_path(path, i)));
  return out;
}

Eigen::MatrixXd as_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of rows");
  const std::size_t n = j.size();
  Eigen::MatrixXd out(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto rp = index_path(path, r);
    const auto& row = j[r];
    if (!row.is_array() || row.size() != n) fail(rp, fmt::format("expected {} entries", n));
    for (std::size_t c = 0; c < n; ++c)
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          as_double(row[c], index_path(rp, c));
  }
  return out;
}

// Tracks which keys of an object were read so leftovers can be rejected.
class Object {
 public:
  Object(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  // Rejects keys outside `known` before anything is read, so a misspelled
  // key is reported as such rather than as a missing one.
  Object(const json& j, std::string path, std::initializer_list<std::string_view> known)
      : Object(j, std::move(path)) {
    for (const auto& item : j_.items()) {
      if (std::find(known.begin(), known.end(), item.key()) == known.end())
        fail(at(item.key()), "unknown key");
    }
  }

  std::string at(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* find(const std::string& key) {
    used_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const json& require(const std::string& key) {
    const json* v = find(key);
    if (!v) fail(at(key), "required key is missing");
    return *v;
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!used_.count(item.key())) fail(at(item.key()), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

template <typename T, typename F>
void read_opt(Object& o, const std::string& key, T& target, F convert) {
  if (const json* v = o.find(key)) target = convert(*v, o.at(key));
}

ModelSpec parse_model(const json& j) {
  Object o(j, "model", {"name", "params"});
  ModelSpec spec;
  spec.name = as_string(o.require("name"), o.at("name"));
  if (const json* p = o.find("params")) {
    Object params(*p, o.at("params"));
    for (const auto& item : p->items()) {
      const auto key = item.key();
      spec.params[key] = as_doubles(*params.find(key), params.at(key));
    }
    params.finish();
  }
  o.finish();
  if (spec.name != "chain") {
    const auto names = sde::model_names();
    if (std::find(names.begin(), names.end(), spec.name) == names.end())
      fail("model.name", fmt::format("unknown model '{}'", spec.name));
  }
  return spec;
}

ChainSpec parse_chain(const json& j) {
  Object o(j, "chain", {"base", "alt", "labels"});
  ChainSpec spec;
  spec.base = as_matrix(o.require("base"), o.at("base"));
  const auto n = static_cast<std::size_t>(spec.base.rows());
  if (const json* a = o.find("alt")) {
    spec.alt = as_matrix(*a, o.at("alt"));
    if (spec.alt->rows() != spec.base.rows()) fail(o.at("alt"), "size differs from chain.base");
  }
  if (const json* l = o.find("labels")) {
    if (!l->is_array() || l->size() != n)
      fail(o.at("labels"), fmt::format("expected {} labels", n));
    for (std::size_t i = 0; i < n; ++i)
      spec.labels.push_back(as_string((*l)[i], index_path(o.at("labels"), i)));
  } else {
    for (std::size_t i = 0; i < n; ++i) spec.labels.push_back(std::to_string(i));
  }
  o.finish();
  return spec;
}

ControlSpec parse_control(const json& j) {
  Object o(j, "control", {"type", "value", "offset", "gain", "center", "values"});
  ControlSpec spec;
  const auto type = as_string(o.require("type"), o.at("type"));
  if (type == "constant") {
    spec.kind = ControlSpec::Kind::constant;
    spec.value = as_doubles(o.require("value"), o.at("value"));
  } else if (type == "linear") {
    spec.kind = ControlSpec::Kind::linear;
    read_opt(o, "offset", spec.value, as_doubles);
    spec.gain = as_double(o.require("gain"), o.at("gain"));
    read_opt(o, "center", spec.center, as_doubles);
  } else if (type == "table") {
    spec.kind = ControlSpec::Kind::table;
    spec.table = as_doubles(o.require("values"), o.at("values"));
  } else {
    fail(o.at("type"), fmt::format("unknown control type '{}'", type));
  }
  o.finish();
  return spec;
}

RewardSpec parse_reward(const json& j) {
  Object o(j, "reward", {"type", "value", "index", "x_weight", "center", "a_weight", "values", "slope"});
  RewardSpec spec;
  const auto type = as_string(o.require("type"), o.at("type"));
  if (type == "constant") {
    spec.kind = RewardSpec::Kind::constant;
    spec.value = as_double(o.require("value"), o.at("value"));
  } else if (type == "coordinate") {
    spec.kind = RewardSpec::Kind::coordinate;
    read_opt(o, "index", spec.index, as_u64);
  } else if (type == "quadratic") {
    spec.kind = RewardSpec::Kind::quadratic;
    read_opt(o, "x_weight", spec.x_weight, as_double);
    read_opt(o, "center", spec.center, as_doubles);
    read_opt(o, "a_weight", spec.a_weight, as_double);
  } else if (type == "table") {
    spec.kind = RewardSpec::Kind::table;
    spec.table = as_doubles(o.require("values"), o.at("values"));
    read_opt(o, "slope", spec.slope, as_doubles);
  } else {
    fail(o.at("type"), fmt::format("unknown reward type '{}'", type));
  }
  o.finish();
  return spec;
}

SweepSpec parse_sweep(const json& j) {
  Object o(j, "sweep", {"kind", "level", "indices"});
  SweepSpec spec;
  const auto kind = as_string(o.require("kind"), o.at("kind"));
  if (kind == "convergence") {
    spec.kind = SweepSpec::Kind::convergence;
  } else if (kind == "stability") {
    spec.kind = SweepSpec::Kind::stability;
    spec.level = as_unsigned(o.require("level"), o.at("level"), 30);
    const json& idx = o.require("indices");
    if (!idx.is_array() || idx.empty()) fail(o.at("indices"), "expected a nonempty array");
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const auto n = as_u64(idx[i], index_path(o.at("indices"), i));
      if (n == 0) fail(index_path(o.at("indices"), i), "sequence index must be >= 1");
      spec.indices.push_back(n);
    }
  } else {
    fail(o.at("kind"), fmt::format("unknown sweep kind '{}'", kind));
  }
  o.finish();
  return spec;
}

McSpec parse_mc(const json& j) {
  Object o(j, "monte_carlo", {"horizon", "replicates", "burn_in", "x0", "start_state"});
  McSpec spec;
  read_opt(o, "horizon", spec.horizon, as_double);
  read_opt(o, "replicates", spec.replicates, as_u64);
  read_opt(o, "burn_in", spec.burn_in, as_double);
  read_opt(o, "x0", spec.x0, as_doubles);
  read_opt(o, "start_state", spec.start_state, as_u64);
  o.finish();
  if (!(spec.horizon > 0.0)) fail("monte_carlo.horizon", "must be positive");
  if (spec.replicates < 1) fail("monte_carlo.replicates", "must be >= 1");
  if (!(spec.burn_in >= 0.0 && spec.burn_in < 1.0)) fail("monte_carlo.burn_in", "must lie in [0, 1)");
  return spec;
}

GridSpec parse_grid(const json& j) {
  Object o(j, "grid", {"nodes", "samples_per_state", "batches", "base_substeps", "couple_levels"});
  GridSpec spec;
  read_opt(o, "nodes", spec.nodes, as_u64);
  read_opt(o, "samples_per_state", spec.samples_per_state, as_u64);
  read_opt(o, "batches", spec.batches, as_u64);
  if (const json* v = o.find("base_substeps"))
    spec.base_substeps = as_unsigned(*v, o.at("base_substeps"), 1u << 20);
  read_opt(o, "couple_levels", spec.couple_levels, as_bool);
  o.finish();
  if (spec.nodes < 2) fail("grid.nodes", "must be >= 2");
  if (spec.samples_per_state < 1) fail("grid.samples_per_state", "must be >= 1");
  if (spec.base_substeps < 1) fail("grid.base_substeps", "must be >= 1");
  return spec;
}

RiskSpec parse_risk(const json& j) {
  Object o(j, "risk", {"alpha", "tol", "max_iters", "x_ref", "oracle"});
  RiskSpec spec;
  spec.alphas = as_doubles(o.require("alpha"), o.at("alpha"));
  for (std::size_t i = 0; i < spec.alphas.size(); ++i) {
    if (spec.alphas[i] == 0.0) fail(index_path(o.at("alpha"), i), "alpha must be nonzero");
  }
  if (spec.alphas.empty()) fail(o.at("alpha"), "expected at least one value");
  read_opt(o, "tol", spec.tolerance, as_double);
  read_opt(o, "max_iters", spec.max_iterations, as_u64);
  read_opt(o, "x_ref", spec.x_ref, as_u64);
  read_opt(o, "oracle", spec.oracle, as_bool);
  o.finish();
  if (!(spec.tolerance > 0.0)) fail("risk.tol", "must be positive");
  if (spec.max_iterations == 0) fail("risk.max_iters", "must be positive");
  return spec;
}

WeightSpec parse_weight(const json& j, const std::string& path) {
  WeightSpec spec;
  if (j.is_string()) {
    if (j.get<std::string>() != "unit") fail(path, "expected \"unit\", an array or an object");
    return spec;
  }
  if (j.is_array()) {
    spec.kind = WeightSpec::Kind::table;
    spec.table = as_doubles(j, path);
    return spec;
  }
  Object o(j, path, {"quadratic_scale"});
  spec.kind = WeightSpec::Kind::quadratic;
  spec.scale = as_double(o.require("quadratic_scale"), o.at("quadratic_scale"));
  o.finish();
  if (spec.scale < 0.0) fail(o.at("quadratic_scale"), "must be nonnegative");
  return spec;
}

AuditSpec parse_audit(const json& j) {
  Object o(j, "audit", {"k", "fpv_horizon", "weight", "limit_level", "gap_horizon"});
  AuditSpec spec;
  if (const json* v = o.find("k")) spec.k = as_unsigned(*v, o.at("k"), 1000);
  if (const json* v = o.find("fpv_horizon"))
    spec.fpv_horizon = as_unsigned(*v, o.at("fpv_horizon"), 100000);
  if (const json* v = o.find("weight")) spec.weight = parse_weight(*v, o.at("weight"));
  if (const json* v = o.find("limit_level"))
    spec.limit_level = as_unsigned(*v, o.at("limit_level"), 30);
  read_opt(o, "gap_horizon", spec.gap_horizon, as_u64);
  o.finish();
  if (spec.k == 0) fail("audit.k", "must be >= 1");
  return spec;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
  }
  Object o(root, "", {"seed", "model", "chain", "control", "reward", "levels", "method", "sweep", "monte_carlo", "grid", "risk", "audit", "output"});
  ExperimentConfig cfg;
  cfg.seed = as_u64(o.require("seed"), "seed");
  cfg.model = parse_model(o.require("model"));
  if (const json* c = o.find("chain")) cfg.chain = parse_chain(*c);
  if (cfg.is_chain() && !cfg.chain) fail("chain", "required when model.name is \"chain\"");
  if (!cfg.is_chain() && cfg.chain) fail("chain", "only allowed with model.name \"chain\"");
  if (cfg.is_chain() && !cfg.model.params.empty()) fail("model.params", "chains take no params");
  if (const json* c = o.find("control")) cfg.control = parse_control(*c);
  cfg.reward = parse_reward(o.require("reward"));

  const json& levels = o.require("levels");
  if (!levels.is_array() || levels.empty()) fail("levels", "expected a nonempty array");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    cfg.levels.push_back(as_unsigned(levels[i], index_path("levels", i), 30));
    if (i > 0 && cfg.levels[i] <= cfg.levels[i - 1])
      fail(index_path("levels", i), "levels must be strictly increasing");
  }

  if (const json* m = o.find("method")) {
    const auto name = as_string(*m, "method");
    if (name == "exact-invariant") {
      cfg.method = avg::Method::exact_invariant;
    } else if (name == "monte-carlo") {
      cfg.method = avg::Method::monte_carlo;
    } else {
      fail("method", fmt::format("unknown method '{}'", name));
    }
  }
  if (const json* s = o.find("sweep")) cfg.sweep = parse_sweep(*s);
  if (const json* s = o.find("monte_carlo")) cfg.mc = parse_mc(*s);
  if (const json* s = o.find("grid")) cfg.grid = parse_grid(*s);
  if (const json* s = o.find("risk")) cfg.risk = parse_risk(*s);
  if (const json* s = o.find("audit")) cfg.audit = parse_audit(*s);
  if (const json* s = o.find("output")) {
    Object out(*s, "output", {"dir"});
    cfg.output_dir = as_string(out.require("dir"), "output.dir");
    out.finish();
  }
  o.finish();

  if (cfg.is_chain() && cfg.grid) fail("grid", "chains need no grid");
  if (cfg.is_chain() && cfg.control.kind == ControlSpec::Kind::linear)
    fail("control.type", "linear controls need a continuous state");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read config '{}'", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

namespace {

Eigen::VectorXd per_state(const std::vector<double>& v, std::size_t n, const std::string& path) {
  if (v.size() == 1) return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), v[0]);
  if (v.size() != n) fail(path, fmt::format("expected 1 or {} values", n));
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(n));
}

double control_bound(const ExperimentConfig& config) {
  const auto it = config.model.params.find("control_bound");
  return it == config.model.params.end() || it->second.empty() ? 10.0 : it->second[0];
}

}  // namespace

avg::ControlledChain make_chain(const ExperimentConfig& config) {
  if (!config.chain) fail("chain", "config describes no chain");
  const auto& spec = *config.chain;
  const auto n = spec.labels.size();
  Eigen::VectorXd base_reward;
  std::optional<Eigen::VectorXd> slope;
  switch (config.reward.kind) {
    case RewardSpec::Kind::constant:
      base_reward = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), config.reward.value);
      break;
    case RewardSpec::Kind::table:
      base_reward = per_state(config.reward.table, n, "reward.values");
      if (!config.reward.slope.empty()) slope = per_state(config.reward.slope, n, "reward.slope");
      break;
    default:
      fail("reward.type", "chains take a constant or table reward");
  }
  try {
    return avg::ControlledChain(markov::StateSpace(spec.labels), spec.base,
                                std::move(base_reward), spec.alt, std::move(slope));
  } catch (const InvalidArgument& e) {
    fail("chain", e.what());
  }
}

avg::ChainControl make_chain_control(const ExperimentConfig& config,
                                     const avg::ControlledChain& chain) {
  const auto n = chain.space.size();
  avg::ChainControl control;
  switch (config.control.kind) {
    case ControlSpec::Kind::constant:
      control.values = config.control.value.empty()
                           ? Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))
                           : per_state(config.control.value, n, "control.value");
      control.id = "constant";
      break;
    case ControlSpec::Kind::table:
      control.values = per_state(config.control.table, n, "control.values");
      control.id = "table";
      break;
    case ControlSpec::Kind::linear:
      fail("control.type", "linear controls need a continuous state");
  }
  try {
    chain.check_control(control);
  } catch (const Error& e) {
    fail("control", e.what());
  }
  return control;
}

sde::SDEModel make_sde_model(const ExperimentConfig& config) {
  if (config.is_chain()) fail("model.name", "the chain model is not an SDE");
  try {
    return sde::make_model(config.model.name, config.model.params);
  } catch (const Error& e) {
    fail("model.params", e.what());
  }
}

std::optional<markov::StateSpace> make_grid(const ExperimentConfig& config,
                                            const sde::SDEModel& model) {
  if (!config.grid) return std::nullopt;
  if (!model.reflected())
    fail("grid", fmt::format("model '{}' has no bounded domain to grid", model.name));
  return sde::make_grid(model.box(), config.grid->nodes);
}

sde::MarkovControl make_sde_control(const ExperimentConfig& config,
                                    const sde::SDEModel& model,
                                    const std::optional<markov::StateSpace>& grid) {
  const std::size_t da = model.control_dim;
  const double bound = control_bound(config);
  sde::ControlBox box{std::vector<double>(da, -bound), std::vector<double>(da, bound)};
  const auto& spec = config.control;
  try {
    switch (spec.kind) {
      case ControlSpec::Kind::constant: {
        std::vector<double> a0 = spec.value.empty() ? std::vector<double>(da, 0.0) : spec.value;
        if (a0.size() == 1 && da > 1) a0.assign(da, a0[0]);
        if (a0.size() != da) fail("control.value", fmt::format("expected {} values", da));
        return sde::MarkovControl::constant(std::move(a0), box);
      }
      case ControlSpec::Kind::linear: {
        if (da != model.dim)
          fail("control.type", "linear feedback needs control_dim == dim");
        std::vector<double> offset = spec.value.empty() ? std::vector<double>(da, 0.0) : spec.value;
        std::vector<double> center = spec.center.empty() ? std::vector<double>(da, 0.0) : spec.center;
        if (offset.size() != da) fail("control.offset", fmt::format("expected {} values", da));
        if (center.size() != da) fail("control.center", fmt::format("expected {} values", da));
        const double gain = spec.gain;
        return sde::MarkovControl(
            "linear", box, [offset, center, gain](std::span<const double> x, std::span<double> a) {
              for (std::size_t i = 0; i < a.size(); ++i) a[i] = offset[i] + gain * (x[i] - center[i]);
            });
      }
      case ControlSpec::Kind::table: {
        if (!grid) fail("control.values", "table controls on an SDE need a grid");
        if (da != 1) fail("control.type", "table controls need control_dim == 1");
        if (spec.table.size() != grid->size())
          fail("control.values", fmt::format("expected {} values (one per grid node)", grid->size()));
        const auto table = spec.table;
        const markov::StateSpace g = *grid;
        return sde::MarkovControl("table", box,
                                  [table, g](std::span<const double> x, std::span<double> a) {
                                    a[0] = table[sde::nearest_node(g, x)];
                                  });
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail("control", e.what());
  }
  fail("control.type", "unsupported control");
}

RewardFunction make_reward(const ExperimentConfig& config, const sde::SDEModel& model,
                           const std::optional<markov::StateSpace>& grid) {
  const auto& spec = config.reward;
  const std::size_t d = model.dim;
  const double abound = control_bound(config);
  auto v_quadratic = [](std::span<const double> x) {
    double s = 1.0;
    for (double xi : x) s += xi * xi;
    return s;
  };
  switch (spec.kind) {
    case RewardSpec::Kind::constant: {
      const double c0 = spec.value;
      return RewardFunction::bounded(
          "constant", [c0](std::span<const double>, std::span<const double>) { return c0; },
          std::abs(c0));
    }
    case RewardSpec::Kind::coordinate: {
      if (spec.index >= d) fail("reward.index", fmt::format("must be below the dimension {}", d));
      const std::size_t i = spec.index;
      auto fn = [i](std::span<const double> x, std::span<const double>) { return x[i]; };
      if (model.reflected()) {
        const auto& b = model.box();
        return RewardFunction::bounded("coordinate", fn,
                                       std::max(std::abs(b.lower[i]), std::abs(b.upper[i])));
      }
      return RewardFunction::v_dominated("coordinate", fn, 1.0, v_quadratic);
    }
    case RewardSpec::Kind::quadratic: {
      std::vector<double> center = spec.center.empty() ? std::vector<double>(d, 0.0) : spec.center;
      if (center.size() == 1 && d > 1) center.assign(d, center[0]);
      if (center.size() != d) fail("reward.center", fmt::format("expected {} values", d));
      const double wx = spec.x_weight;
      const double wa = spec.a_weight;
      auto fn = [center, wx, wa](std::span<const double> x, std::span<const double> a) {
        double sx = 0.0, sa = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) sx += (x[i] - center[i]) * (x[i] - center[i]);
        for (double ai : a) sa += ai * ai;
        return wx * sx + wa * sa;
      };
      const double abs_a = std::abs(wa) * static_cast<double>(model.control_dim) * abound * abound;
      if (model.reflected()) {
        const auto& b = model.box();
        double far = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          const double r = std::max(std::abs(b.lower[i] - center[i]), std::abs(b.upper[i] - center[i]));
          far += r * r;
        }
        return RewardFunction::bounded("quadratic", fn, std::abs(wx) * far + abs_a);
      }
      double c2 = 0.0;
      for (double ci : center) c2 += ci * ci;
      const double bound = std::max(2.0 * std::abs(wx), 2.0 * std::abs(wx) * c2 + abs_a);
      return RewardFunction::v_dominated("quadratic", fn, bound, v_quadratic);
    }
    case RewardSpec::Kind::table: {
      if (!grid) fail("reward.values", "table rewards on an SDE need a grid");
      if (spec.table.size() != grid->size())
        fail("reward.values", fmt::format("expected {} values (one per grid node)", grid->size()));
      if (!spec.slope.empty()) fail("reward.slope", "only chains take a reward slope");
      const auto table = spec.table;
      const markov::StateSpace g = *grid;
      double top = 0.0;
      for (double v : table) top = std::max(top, std::abs(v));
      return RewardFunction::bounded(
          "table",
          [table, g](std::span<const double> x, std::span<const double>) {
            return table[sde::nearest_node(g, x)];
          },
          top);
    }
  }
  fail("reward.type", "unsupported reward");
}

markov::LyapunovWeight make_weight(const ExperimentConfig& config,
                                   const markov::StateSpace& space) {
  const auto& spec = config.audit.weight;
  const auto n = space.size();
  try {
    switch (spec.kind) {
      case WeightSpec::Kind::unit:
        return markov::LyapunovWeight::unit(n);
      case WeightSpec::Kind::table:
        return markov::LyapunovWeight(per_state(spec.table, n, "audit.weight"));
      case WeightSpec::Kind::quadratic: {
        if (!space.has_embedding())
          fail("audit.weight", "a quadratic weight needs grid coordinates");
        Eigen::VectorXd v(static_cast<Eigen::Index>(n));
        for (std::size_t x = 0; x < n; ++x) {
          double s = 0.0;
          for (double c : space.point(x)) s += c * c;
          v(static_cast<Eigen::Index>(x)) = 1.0 + spec.scale * s;
        }
        return markov::LyapunovWeight(std::move(v));
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail("audit.weight", e.what());
  }
  fail("audit.weight", "unsupported weight");
}

avg::ChainControlFamily scaled_family(const avg::ChainControl& control) {
  return [control](std::uint64_t n) {
    avg::ChainControl out = control;
    out.values *= 1.0 - 1.0 / static_cast<double>(n);
    out.id = fmt::format("{}@{}", control.id, n);
    return out;
  };
}

avg::SdeControlFamily scaled_family(const sde::MarkovControl& control) {
  return [control](std::uint64_t n) {
    const double s = 1.0 - 1.0 / static_cast<double>(n);
    return sde::MarkovControl(fmt::format("{}@{}", control.id(), n), control.set(),
                              [control, s](std::span<const double> x, std::span<double> a) {
                                control(x, a);
                                for (auto& ai : a) ai *= s;
                              });
  };
}

}  // namespace longrun::experiments
