// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace longrun::util {

/// Runs body(i) for i in [0, count) on up to `threads` workers.
///
/// Work is handed out in contiguous blocks, so callers that write only to
/// slot i of a preallocated output get results independent of the thread
/// count. The first exception thrown by any worker is rethrown on the
/// calling thread after all workers have joined.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

/// Number of workers to use when the caller asks for 0 ("auto").
unsigned resolve_threads(unsigned requested) noexcept;

}  // namespace longrun::util
