// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include "longrun/sde/control.hpp"

#include <cmath>

#include <fmt/format.h>

#include "longrun/error.hpp"

namespace longrun::sde {

bool control_set_contains(const ControlSet& set, std::span<const double> a,
                          double slack) {
  if (const auto* box = std::get_if<ControlBox>(&set)) {
    if (a.size() != box->lower.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!(a[i] >= box->lower[i] - slack && a[i] <= box->upper[i] + slack))
        return false;
    }
    return true;
  }
  const auto& list = std::get<ControlList>(set);
  for (const auto& p : list.points) {
    if (p.size() != a.size()) continue;
    bool same = true;
    for (std::size_t i = 0; i < a.size() && same; ++i)
      same = std::abs(p[i] - a[i]) <= slack;
    if (same) return true;
  }
  return false;
}

std::size_t control_set_dim(const ControlSet& set) {
  if (const auto* box = std::get_if<ControlBox>(&set)) return box->lower.size();
  const auto& list = std::get<ControlList>(set);
  return list.points.empty() ? 0 : list.points.front().size();
}

MarkovControl::MarkovControl(std::string id, ControlSet set, Map map)
    : id_(std::move(id)), set_(std::move(set)), map_(std::move(map)) {
  if (!map_) throw InvalidArgument("control map is empty");
  if (const auto* box = std::get_if<ControlBox>(&set_)) {
    if (box->lower.empty() || box->lower.size() != box->upper.size())
      throw InvalidArgument("control box bounds must match and be nonempty");
    for (std::size_t i = 0; i < box->lower.size(); ++i)
      if (!(box->lower[i] <= box->upper[i]))
        throw InvalidArgument("control box has lower > upper");
  } else if (std::get<ControlList>(set_).points.empty()) {
    throw InvalidArgument("finite control set is empty");
  }
}

MarkovControl MarkovControl::constant(std::vector<double> a0, ControlSet set) {
  if (!control_set_contains(set, a0))
    throw DomainError("constant control lies outside the control set");
  return MarkovControl("constant", std::move(set),
                       [a0](std::span<const double>, std::span<double> a) {
                         std::copy(a0.begin(), a0.end(), a.begin());
                       });
}

void MarkovControl::operator()(std::span<const double> x,
                               std::span<double> a) const {
  map_(x, a);
  if (!control_set_contains(set_, a)) {
    throw DomainError(fmt::format("control '{}' left U at x[0] = {}", id_,
                                  x.empty() ? 0.0 : x[0]));
  }
}

}  // namespace longrun::sde
