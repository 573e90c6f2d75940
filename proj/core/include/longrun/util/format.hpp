// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

namespace longrun::util {

/// Shortest decimal string that round-trips to the same double.
std::string format_roundtrip(double value);

/// Fixed significant-digit formatting (printf %.<digits>g).
std::string format_significant(double value, int digits);

}  // namespace longrun::util
