// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include "longrun/sde/rng.hpp"

namespace longrun::sde {

Engine make_engine(const StreamKey& key) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(key.seed),   hi(key.seed),      lo(key.stream),
                    hi(key.stream), lo(key.replicate), hi(key.replicate)};
  return Engine(seq);
}

}  // namespace longrun::sde
