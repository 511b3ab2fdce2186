#pragma once

namespace expcurve {

/// How batch kernels run. `reference` is the plain serial loop with every
/// sub-problem solved independently; `parallel` splits the batch into fixed
/// chunks (independent of thread count) and distributes them with OpenMP.
enum class Execution { reference, parallel };

/// Set the OpenMP thread count used by `Execution::parallel` kernels.
void set_thread_count(int threads);
int thread_count();

}  // namespace expcurve
