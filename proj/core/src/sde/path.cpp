// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include "longrun/sde/path.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "longrun/error.hpp"
#include "longrun/util/parallel.hpp"

namespace longrun::sde {

double DiscretizationLevel::h() const noexcept {
  return std::ldexp(1.0, -static_cast<int>(m));
}

void DiscretizationLevel::validate() const {
  if (inner_substeps < 1) throw InvalidArgument("inner_substeps must be >= 1");
  if (m > 30) throw InvalidArgument("discretization level m must be <= 30");
}

void fold_into_box(const Box& box, std::span<double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lo = box.lower[i];
    const double width = box.upper[i] - lo;
    if (x[i] >= lo && x[i] <= box.upper[i]) continue;
    // Mirror reflection at both faces is periodic with period 2 * width.
    double y = std::fmod(x[i] - lo, 2.0 * width);
    if (y < 0.0) y += 2.0 * width;
    if (y > width) y = 2.0 * width - y;
    x[i] = std::clamp(lo + y, lo, box.upper[i]);
  }
}

namespace {

/// Integrates one control interval in place; the control is held fixed.
class EulerStepper {
 public:
  EulerStepper(const SDEModel& model, const DiscretizationLevel& level)
      : model_(model),
        dt_(level.dt()),
        sqrt_dt_(std::sqrt(level.dt())),
        substeps_(level.inner_substeps),
        drift_(model.dim),
        sigma_(model.dim * model.dim),
        noise_(model.dim),
        box_(model.reflected() ? &model.box() : nullptr) {
    if (!model.drift || !model.diffusion)
      throw InvalidArgument("model '" + model.name + "' lacks coefficients");
    if (box_) box_->validate();
  }

  template <class OnStep>
  void interval(std::span<double> x, std::span<const double> a, Engine& engine,
                double t0, OnStep&& on_step) {
    const std::size_t d = model_.dim;
    for (unsigned s = 0; s < substeps_; ++s) {
      model_.drift(x, a, drift_);
      model_.diffusion(x, sigma_);
      for (std::size_t i = 0; i < d; ++i) noise_[i] = normal_(engine);
      for (std::size_t i = 0; i < d; ++i) {
        double diffusion = 0.0;
        for (std::size_t j = 0; j < d; ++j) diffusion += sigma_[i * d + j] * noise_[j];
        x[i] += drift_[i] * dt_ + diffusion * sqrt_dt_;
      }
      if (box_) fold_into_box(*box_, x);
      const double t = t0 + (s + 1) * dt_;
      for (double xi : x) {
        if (!std::isfinite(xi))
          throw DivergenceError(
              t, fmt::format("non-finite state at t = {} (x[0] = {})", t, x[0]));
      }
      on_step(t, std::span<const double>(x.data(), x.size()));
    }
  }

 private:
  const SDEModel& model_;
  double dt_;
  double sqrt_dt_;
  unsigned substeps_;
  std::vector<double> drift_;
  std::vector<double> sigma_;
  std::vector<double> noise_;
  std::normal_distribution<double> normal_;
  const Box* box_;
};

std::uint64_t intervals_for(double horizon, const DiscretizationLevel& level) {
  if (!(horizon > 0.0)) throw InvalidArgument("horizon must be positive");
  const double n = horizon / level.h();
  const double rounded = std::round(n);
  if (std::abs(n - rounded) > 1e-9 * std::max(1.0, n))
    throw InvalidArgument(
        fmt::format("horizon {} is not a multiple of h = {}", horizon, level.h()));
  return static_cast<std::uint64_t>(rounded);
}

void check_start(const SDEModel& model, std::span<const double> x0) {
  if (x0.size() != model.dim)
    throw DimensionError(fmt::format("start state has dimension {}, model '{}' has {}",
                                     x0.size(), model.name, model.dim));
  if (model.reflected() && !model.box().contains(x0))
    throw DomainError("start state lies outside the model's box");
}

}  // namespace

SamplePath simulate_path(const SDEModel& model, const MarkovControl& control,
                         const DiscretizationLevel& level,
                         std::span<const double> x0, double horizon,
                         const StreamKey& key) {
  level.validate();
  check_start(model, x0);
  const std::uint64_t intervals = intervals_for(horizon, level);
  Engine engine = make_engine(key);
  EulerStepper stepper(model, level);

  SamplePath path;
  path.dim = model.dim;
  path.inner_substeps = level.inner_substeps;
  const std::size_t points = intervals * level.inner_substeps + 1;
  path.times.reserve(points);
  path.states.reserve(points);
  path.controls.reserve(intervals);

  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> a(control.dim());
  path.times.push_back(0.0);
  path.states.push_back(x);
  for (std::uint64_t k = 0; k < intervals; ++k) {
    control(x, a);
    path.controls.push_back(a);
    stepper.interval(x, a, engine, static_cast<double>(k) * level.h(),
                     [&](double t, std::span<const double> state) {
                       path.times.push_back(t);
                       path.states.emplace_back(state.begin(), state.end());
                     });
  }
  return path;
}

SamplePath simulate_path(const SDEModel& model, const MarkovControl& control,
                         const DiscretizationLevel& level,
                         std::span<const double> x0, double horizon,
                         std::uint64_t seed) {
  return simulate_path(model, control, level, x0, horizon, StreamKey{seed, 0, 0});
}

SamplePath simulate_reflected_path(const SDEModel& model,
                                   const MarkovControl& control,
                                   const DiscretizationLevel& level,
                                   std::span<const double> x0, double horizon,
                                   std::uint64_t seed) {
  model.box().validate();
  return simulate_path(model, control, level, x0, horizon, seed);
}

PathSummary run_path(const SDEModel& model, const MarkovControl& control,
                     const DiscretizationLevel& level,
                     std::span<const double> x0, std::uint64_t intervals,
                     Engine& engine, const RewardFunction* reward,
                     std::uint64_t first_interval) {
  level.validate();
  check_start(model, x0);
  EulerStepper stepper(model, level);
  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> a(control.dim());
  double reward_total = 0.0;
  for (std::uint64_t k = 0; k < intervals; ++k) {
    control(x, a);
    if (reward && k >= first_interval) reward_total += (*reward)(x, a);
    stepper.interval(x, a, engine, static_cast<double>(k) * level.h(),
                     [](double, std::span<const double>) {});
  }
  return PathSummary{std::move(x), reward_total * level.h(), intervals};
}

Estimate summarize(std::span<const double> values) {
  Estimate e;
  e.samples = values.size();
  if (values.empty()) return e;
  if (std::all_of(values.begin(), values.end(),
                  [&](double v) { return v == values.front(); })) {
    e.mean = values.front();
    return e;
  }
  const double n = static_cast<double>(values.size());
  e.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return e;
  double ss = 0.0;
  for (double v : values) ss += (v - e.mean) * (v - e.mean);
  e.std_error = std::sqrt(ss / (n - 1.0) / n);
  return e;
}

Estimate unit_reward_aggregate(const SDEModel& model,
                               const MarkovControl& control,
                               const RewardFunction& reward,
                               std::span<const double> x0,
                               const DiscretizationLevel& level,
                               std::size_t samples, std::uint64_t seed,
                               unsigned threads) {
  if (samples < 1) throw InvalidArgument("unit_reward_aggregate needs samples >= 1");
  std::vector<double> sums(samples);
  util::parallel_for(samples, threads, [&](std::size_t r) {
    Engine engine = make_engine(StreamKey{seed, 0, r});
    sums[r] = run_path(model, control, level, x0, level.intervals_per_unit(),
                       engine, &reward)
                  .reward_sum;
  });
  return summarize(sums);
}

}  // namespace longrun::sde
