// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include "longrun/sde/registry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "longrun/error.hpp"

namespace longrun::sde {

namespace {

class ParamReader {
 public:
  ParamReader(std::string model, const ModelParams& params,
              std::set<std::string> allowed)
      : model_(std::move(model)), params_(params) {
    for (const auto& [key, value] : params) {
      if (!allowed.count(key))
        throw ConfigError("model '" + model_ + "' has no parameter '" + key + "'");
    }
  }

  double scalar(const std::string& key, double fallback) const {
    auto it = params_.find(key);
    if (it == params_.end()) return fallback;
    if (it->second.size() != 1)
      throw ConfigError("parameter '" + key + "' of '" + model_ + "' must be a scalar");
    return it->second.front();
  }

  std::vector<double> vector(const std::string& key,
                             std::vector<double> fallback) const {
    auto it = params_.find(key);
    return it == params_.end() ? fallback : it->second;
  }

 private:
  std::string model_;
  const ModelParams& params_;
};

SDEModel::Diffusion scaled_identity(std::size_t d, double sigma) {
  return [d, sigma](std::span<const double>, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < d; ++i) out[i * d + i] = sigma;
  };
}

SDEModel::Drift mean_reverting(double theta) {
  return [theta](std::span<const double> x, std::span<const double> a,
                 std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = -theta * x[i] + a[i];
  };
}

// |b|^2 + ||sigma||^2 <= 2 theta^2 |x|^2 + 2 d A^2 + d sigma^2 for |a_i| <= A.
double growth(std::size_t d, double theta, double sigma, double control_bound) {
  const double dd = static_cast<double>(d);
  return std::max(2.0 * theta * theta,
                  2.0 * dd * control_bound * control_bound + dd * sigma * sigma);
}

Box read_box(const ParamReader& p) {
  Box box{p.vector("lower", {0.0}), p.vector("upper", {1.0})};
  box.validate();
  return box;
}

}  // namespace

std::vector<std::string> model_names() {
  return {"ou", "reflected-bm", "reflected-ou"};
}

SDEModel make_model(const std::string& name, const ModelParams& params) {
  SDEModel model;
  model.name = name;
  if (name == "ou") {
    ParamReader p(name, params, {"dim", "theta", "sigma", "control_bound"});
    const double dim = p.scalar("dim", 1.0);
    if (dim < 1 || dim != std::floor(dim)) throw ConfigError("ou: dim must be a positive integer");
    model.dim = static_cast<std::size_t>(dim);
    const double theta = p.scalar("theta", 1.0);
    const double sigma = p.scalar("sigma", 1.0);
    if (!(theta > 0.0)) throw ConfigError("ou: theta must be positive");
    model.drift = mean_reverting(theta);
    model.diffusion = scaled_identity(model.dim, sigma);
    model.nondegenerate = sigma != 0.0;
    model.growth_constant = growth(model.dim, theta, sigma, p.scalar("control_bound", 10.0));
  } else if (name == "reflected-bm") {
    ParamReader p(name, params, {"lower", "upper", "sigma", "control_bound"});
    Box box = read_box(p);
    model.dim = box.dim();
    const double sigma = p.scalar("sigma", 1.0);
    model.drift = [](std::span<const double>, std::span<const double> a,
                     std::span<double> out) {
      std::copy(a.begin(), a.end(), out.begin());
    };
    model.diffusion = scaled_identity(model.dim, sigma);
    model.nondegenerate = sigma != 0.0;
    model.growth_constant = growth(model.dim, 0.0, sigma, p.scalar("control_bound", 10.0));
    model.domain = std::move(box);
  } else if (name == "reflected-ou") {
    ParamReader p(name, params, {"lower", "upper", "theta", "sigma", "control_bound"});
    Box box = read_box(p);
    model.dim = box.dim();
    const double theta = p.scalar("theta", 1.0);
    const double sigma = p.scalar("sigma", 1.0);
    model.drift = mean_reverting(theta);
    model.diffusion = scaled_identity(model.dim, sigma);
    model.nondegenerate = sigma != 0.0;
    model.growth_constant = growth(model.dim, theta, sigma, p.scalar("control_bound", 10.0));
    model.domain = std::move(box);
  } else {
    throw ConfigError("unknown model '" + name + "'");
  }
  model.control_dim = model.dim;
  return model;
}

}  // namespace longrun::sde
