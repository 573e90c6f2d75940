// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace longrun {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched sizes or state spaces.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data: non-stochastic rows, weights below one, bad labels.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment or grid configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A state leaves the admissible domain, or the domain itself is degenerate.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A standing assumption (ERd, UEd, uUE, uEquiv, ...) fails on the data.
class ErgodicityError : public Error {
 public:
  ErgodicityError(std::string condition, const std::string& what)
      : Error("(" + condition + ") " + what), condition_(std::move(condition)) {}

  const std::string& condition() const noexcept { return condition_; }

 private:
  std::string condition_;
};

/// A simulated path produced a non-finite state.
class DivergenceError : public Error {
 public:
  DivergenceError(double time, const std::string& what)
      : Error(what), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// An iterative method hit its iteration cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_residual,
                   double contraction)
      : Error(what), last_residual_(last_residual), contraction_(contraction) {}

  double last_residual() const noexcept { return last_residual_; }
  /// Measured per-iteration span ratio over the tail of the run.
  double contraction() const noexcept { return contraction_; }

 private:
  double last_residual_;
  double contraction_;
};

}  // namespace longrun
