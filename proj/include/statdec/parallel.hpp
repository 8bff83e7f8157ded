#pragma once

#include <cstddef>
#include <functional>

namespace statdec {

// Worker count: min(hardware threads, STATDEC_THREADS when set), at least 1.
std::size_t thread_count();

// Runs fn(begin, end) over contiguous chunks of [0, n). Every index belongs
// to exactly one chunk and chunk boundaries depend only on n and the worker
// count used, so per-element results are identical to a serial run.
void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace statdec
