// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace longrun::sde {

/// Identifies one independent random stream.
///
/// Streams are derived from the full key, so the draws seen by
/// (state, replicate) do not depend on how many other streams exist or on
/// the order in which they are consumed.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;     ///< e.g. start-state index
  std::uint64_t replicate = 0;
};

using Engine = std::mt19937_64;

Engine make_engine(const StreamKey& key);

}  // namespace longrun::sde
