#pragma once

#include <exception>
#include <utility>

namespace spdc {

/// Execution policy for the cell-parallel kernels. Every kernel writes each
/// output cell from exactly one loop iteration, so Serial and Parallel
/// produce bit-identical results; Serial is kept as the reference path for
/// tests and benchmarks.
enum class Exec {
    Serial,
    Parallel,
};

/// Parallel map over [0, n). Exceptions thrown by the body are captured and
/// the one from the lowest index is rethrown after the loop, so the error
/// surface does not depend on thread scheduling.
template <typename F>
void parallel_for(long n, Exec exec, F&& body) {
    if (exec == Exec::Serial) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr first_error;
    long first_error_index = -1;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
        try {
            body(i);
        } catch (...) {
#pragma omp critical(spdc_parallel_for_error)
            {
                if (first_error_index < 0 || i < first_error_index) {
                    first_error_index = i;
                    first_error = std::current_exception();
                }
            }
        }
    }
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace spdc
