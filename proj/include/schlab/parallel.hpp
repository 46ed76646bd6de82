#pragma once

#include <functional>

namespace schlab {

// Runs body(i) for i in [0, count) on up to `threads` workers. Work items
// are claimed through an atomic counter; callers must write results into
// per-index slots so that output never depends on scheduling.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

}  // namespace schlab
