#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace weyl {

using cplx = std::complex<double>;
using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

// Thrown when a size/time guard refuses a computation (CLI maps it to exit 3,
// domain errors to exit 2).
struct ResourceLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// requested > 0 wins; otherwise WEYL_THREADS, otherwise hardware concurrency.
int resolve_threads(int requested = 0);

}  // namespace weyl
