// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

#include <Eigen/Dense>

#include "longrun/markov/kernel.hpp"
#include "longrun/markov/weight.hpp"

// CSV layout shared by kernels, weights and measures: a header row holding
// the state labels, then one line per matrix row (a single line for vectors).
// Values are written with 17 significant digits.
namespace longrun::markov {

void write_kernel_csv(std::ostream& out, const TransitionKernel& kernel);
TransitionKernel read_kernel_csv(std::istream& in,
                                 StepLength step = StepLength(1));

void write_vector_csv(std::ostream& out, const StateSpace& space,
                      const Eigen::VectorXd& values);
/// Returns the labels read from the header and the values row.
std::pair<StateSpace, Eigen::VectorXd> read_vector_csv(std::istream& in);

LyapunovWeight read_weight_csv(std::istream& in);

}  // namespace longrun::markov
