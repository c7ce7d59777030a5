#pragma once

#include <cstddef>
#include <exception>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace photon_ur {

/// Execution policy for node-parallel kernels. `serial` is the reference path;
/// both policies produce bitwise-identical results because every reduction is
/// done afterwards, in node order, by `pairwise_sum`.
enum class Exec { serial, parallel };

/// OpenMP default thread count, lowered to PHOTON_UR_THREADS when that is set
/// to a smaller positive value.
int max_threads();

/// Calls `body(i)` for i in [0, n). Each index must write only its own slot.
/// Exceptions cannot leave an OpenMP region, so the parallel path records
/// them and rethrows the one from the lowest index, as the serial path would.
template <class Body>
void for_each_index(Exec exec, std::size_t n, Body &&body) {
#ifdef _OPENMP
  if (exec == Exec::parallel && n > 1) {
    const auto count = static_cast<std::ptrdiff_t>(n);
    std::exception_ptr error;
    std::ptrdiff_t error_index = count;
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical(photon_ur_for_each_error)
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
    if (error)
      std::rethrow_exception(error);
    return;
  }
#endif
  (void)exec;
  for (std::size_t i = 0; i < n; ++i)
    body(i);
}

/// Recursive pairwise summation; deterministic for a fixed ordering.
double pairwise_sum(std::span<const double> values);

/// Evaluates `term(i)` into a buffer under `exec`, then reduces it pairwise.
template <class Term>
double reduce_sum(Exec exec, std::size_t n, Term &&term) {
  std::vector<double> buffer(n);
  for_each_index(exec, n, [&](std::size_t i) { buffer[i] = term(i); });
  return pairwise_sum(buffer);
}

} // namespace photon_ur
