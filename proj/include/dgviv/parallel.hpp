#pragma once

#include <functional>

namespace dgviv {

/// Number of workers used by parallel_for. Defaults to 1.
void set_num_threads(int n);
int num_threads();

/// Runs body(begin, end) over a static partition of [0, n). Chunks write disjoint
/// data, so results do not depend on the worker count. If several chunks throw,
/// the exception of the lowest chunk is rethrown.
void parallel_for(int n, const std::function<void(int, int)>& body);

}  // namespace dgviv
