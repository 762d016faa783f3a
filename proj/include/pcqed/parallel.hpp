// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace pcqed {

/// Worker count used by sweeps; 1 by default. Results never depend on it.
void set_thread_count(int threads);
int thread_count();

/// Calls body(i) for i in [0, count). Each index is handled exactly once, so bodies that
/// write only to slot i produce identical output for every thread count. The first
/// exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace pcqed
