// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace longrun::markov {

/// Ordered, finite set of labelled states, optionally embedded in R^d.
///
/// Copies share the underlying storage, so passing a StateSpace by value is
/// cheap and kernels built over the same space compare equal in O(1).
class StateSpace {
 public:
  explicit StateSpace(std::vector<std::string> labels);
  /// `points[i]` is the location of state i; all points share one dimension.
  StateSpace(std::vector<std::string> labels,
             std::vector<std::vector<double>> points);

  /// States labelled "0", "1", ..., "n-1".
  static StateSpace indexed(std::size_t n);

  std::size_t size() const noexcept { return data_->labels.size(); }
  const std::string& label(std::size_t i) const { return data_->labels.at(i); }
  const std::vector<std::string>& labels() const noexcept {
    return data_->labels;
  }
  std::optional<std::size_t> index_of(const std::string& label) const;

  bool has_embedding() const noexcept { return !data_->points.empty(); }
  std::size_t dim() const noexcept { return data_->dim; }
  std::span<const double> point(std::size_t i) const;

  friend bool operator==(const StateSpace& a, const StateSpace& b);

 private:
  struct Data {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> points;
    std::size_t dim = 0;
  };
  std::shared_ptr<const Data> data_;
};

}  // namespace longrun::markov
