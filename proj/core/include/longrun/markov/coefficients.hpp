// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "longrun/markov/kernel.hpp"
#include "longrun/markov/weight.hpp"

namespace longrun::markov {

/// Dobrushin coefficient: max over state pairs of half the L1 distance
/// between their rows (equivalently sup_B [P(x,B) - P(x',B)]). In [0,1].
double dobrushin_delta(const TransitionKernel& kernel);

/// Kartashov coefficient: max over distinct pairs of
///   sum_y V(y) |P(x,y) - P(x',y)| / (V(x) + V(x')).
/// Values below one certify (UEd) for this kernel.
double kartashov_rho(const TransitionKernel& kernel,
                     const LyapunovWeight& weight);

}  // namespace longrun::markov
