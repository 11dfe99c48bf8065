#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace netcpd {

/// Worker count: NETCPD_THREADS if set and positive, else hardware concurrency.
std::size_t worker_threads();

/// Runs body(begin, end) over contiguous chunks of [0, n) on up to
/// worker_threads() threads. Exceptions from workers are rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

/// Derives an independent 64-bit seed for `stream` from `seed` (SplitMix64 mixing).
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

} // namespace netcpd
