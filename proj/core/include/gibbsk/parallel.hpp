#pragma once

#include <cstddef>
#include <functional>

namespace gibbsk {

/// Worker count: hardware concurrency, capped by GIBBSK_THREADS when set.
/// A positive override (e.g. from tests) takes precedence over both.
std::size_t worker_count();
void set_worker_override(std::size_t workers);  // 0 clears the override

/// Runs body(chunk, begin, end) for every fixed-size chunk of [0, n).
/// Chunk boundaries depend only on n and chunk_size, never on the worker
/// count; callers reduce per-chunk partials in chunk order.
void for_each_chunk(std::size_t n, std::size_t chunk_size,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

inline std::size_t chunk_count(std::size_t n, std::size_t chunk_size) {
  return (n + chunk_size - 1) / chunk_size;
}

}  // namespace gibbsk
