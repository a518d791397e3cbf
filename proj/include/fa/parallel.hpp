#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fa {

/// Splits [0, total) into contiguous chunks handed out to `workers` threads
/// on demand. Each worker owns one `Local`; `body(local, begin, end)` is
/// called once per chunk. Chunk assignment varies between runs, so callers
/// reduce the returned locals with an order-independent rule.
template <typename Local, typename Body>
std::vector<Local> parallel_chunks(std::uint64_t total, unsigned workers, const Local& init, Body body) {
  workers = std::max(1u, workers);
  std::vector<Local> locals(workers, init);
  if (total == 0) return locals;
  if (workers == 1) {
    body(locals[0], std::uint64_t{0}, total);
    return locals;
  }
  const std::uint64_t chunk = std::clamp<std::uint64_t>(total / (std::uint64_t{workers} * 16), 1, 1 << 14);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          while (true) {
            const auto begin = next.fetch_add(chunk);
            if (begin >= total) break;
            body(locals[w], begin, std::min(total, begin + chunk));
          }
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
          next.store(total);
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return locals;
}

}  // namespace fa
