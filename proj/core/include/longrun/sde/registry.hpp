// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "longrun/sde/model.hpp"

namespace longrun::sde {

/// Named numeric parameters; scalars are one-element vectors.
using ModelParams = std::map<std::string, std::vector<double>>;

/// Built-in models:
///   ou            b(x,a) = -theta x + a, sigma = sigma I on R^d
///                 params: dim, theta, sigma, control_bound
///   reflected-bm  b(x,a) = a, sigma = sigma I, reflected in [lower, upper]
///                 params: lower, upper, sigma, control_bound
///   reflected-ou  b(x,a) = -theta x + a, sigma = sigma I, reflected in a box
///                 params: lower, upper, theta, sigma, control_bound
/// Unknown names or parameters throw ConfigError.
SDEModel make_model(const std::string& name, const ModelParams& params);

std::vector<std::string> model_names();

}  // namespace longrun::sde
