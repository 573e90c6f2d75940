// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include "longrun/markov/state_space.hpp"

#include <algorithm>
#include <unordered_set>

#include "longrun/error.hpp"

namespace longrun::markov {

namespace {

void check_labels(const std::vector<std::string>& labels) {
  if (labels.empty()) throw InvalidArgument("state space must be nonempty");
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second)
      throw InvalidArgument("duplicate state label '" + l + "'");
  }
}

}  // namespace

StateSpace::StateSpace(std::vector<std::string> labels) {
  check_labels(labels);
  auto data = std::make_shared<Data>();
  data->labels = std::move(labels);
  data_ = std::move(data);
}

StateSpace::StateSpace(std::vector<std::string> labels,
                       std::vector<std::vector<double>> points) {
  check_labels(labels);
  if (points.size() != labels.size())
    throw DimensionError("embedding must give one point per state");
  const std::size_t dim = points.front().size();
  if (dim == 0) throw DimensionError("embedding points must have d >= 1");
  for (const auto& p : points) {
    if (p.size() != dim)
      throw DimensionError("embedding points must share one dimension");
  }
  auto data = std::make_shared<Data>();
  data->labels = std::move(labels);
  data->points = std::move(points);
  data->dim = dim;
  data_ = std::move(data);
}

StateSpace StateSpace::indexed(std::size_t n) {
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
  return StateSpace(std::move(labels));
}

std::optional<std::size_t> StateSpace::index_of(const std::string& label) const {
  const auto& ls = data_->labels;
  auto it = std::find(ls.begin(), ls.end(), label);
  if (it == ls.end()) return std::nullopt;
  return static_cast<std::size_t>(it - ls.begin());
}

std::span<const double> StateSpace::point(std::size_t i) const {
  if (!has_embedding()) throw ConfigError("state space has no embedding");
  return data_->points.at(i);
}

bool operator==(const StateSpace& a, const StateSpace& b) {
  if (a.data_ == b.data_) return true;
  return a.data_->labels == b.data_->labels && a.data_->points == b.data_->points;
}

}  // namespace longrun::markov
