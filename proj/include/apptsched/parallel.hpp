#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace apptsched {

// Evaluates body(k, scratch) for k in [0, count) and stores the results at
// index k. Workers pull contiguous chunks from a shared counter; each owns a
// Scratch object created by make_scratch(). The output depends only on the
// body, never on the worker count. The first exception thrown by any worker
// is rethrown on the calling thread.
template <class MakeScratch, class Body>
auto run_indexed(std::int64_t count, unsigned threads, MakeScratch&& make_scratch, Body&& body) {
  using Scratch = std::invoke_result_t<MakeScratch&>;
  using Result = std::invoke_result_t<Body&, std::int64_t, Scratch&>;
  std::vector<Result> out(static_cast<std::size_t>(count > 0 ? count : 0));
  if (count <= 0) return out;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::int64_t>(threads, count));

  constexpr std::int64_t kChunk = 64;
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    auto scratch = make_scratch();
    try {
      for (;;) {
        const std::int64_t begin = next.fetch_add(kChunk);
        if (begin >= count) break;
        const std::int64_t end = std::min(count, begin + kChunk);
        for (std::int64_t k = begin; k < end; ++k) out[static_cast<std::size_t>(k)] = body(k, scratch);
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(count);
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace apptsched
