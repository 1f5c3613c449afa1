#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace bushygw {

// Applies fn(index) for index in [0, count) and returns the results in index
// order.  Work is split into contiguous chunks, one per thread; because each
// result depends only on its index, the output is identical for every thread
// count.
template <typename Fn>
auto parallel_map(std::uint64_t count, unsigned threads, Fn&& fn)
    -> std::vector<decltype(fn(std::uint64_t{}))> {
  using Result = decltype(fn(std::uint64_t{}));
  std::vector<Result> results(count);
  if (threads <= 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i) results[i] = fn(i);
    return results;
  }
  if (threads > count) threads = static_cast<unsigned>(count);
  std::vector<std::thread> workers;
  workers.reserve(threads);
  std::uint64_t chunk = count / threads;
  std::uint64_t extra = count % threads;
  std::uint64_t begin = 0;
  for (unsigned t = 0; t < threads; ++t) {
    std::uint64_t end = begin + chunk + (t < extra ? 1 : 0);
    workers.emplace_back([&results, &fn, begin, end] {
      for (std::uint64_t i = begin; i < end; ++i) results[i] = fn(i);
    });
    begin = end;
  }
  for (auto& w : workers) w.join();
  return results;
}

}  // namespace bushygw
