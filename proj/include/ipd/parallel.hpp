#pragma once

#include <cstddef>
#include <functional>

namespace ipd {

// Resolve a user-facing --jobs value: values <= 0 mean "use all hardware
// threads".
int effective_jobs(int requested);

// Run body(i) for i in [0, count) on up to `jobs` threads. Iterations must be
// independent; any result aggregation the caller does should be indexed by i
// so the outcome does not depend on scheduling order. The first exception
// thrown by an iteration is rethrown on the calling thread.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

}  // namespace ipd
