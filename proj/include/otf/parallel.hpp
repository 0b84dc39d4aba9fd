#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace otf {

/// Calls fn(i) for every i in [0, count) on up to `threads` workers
/// (0 = hardware concurrency). The first exception is rethrown after all
/// workers stop.
template <typename Fn>
void
parallel_for(std::size_t count, unsigned threads, Fn&& fn)
{
  if (threads == 0)
    threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1)
  {
    for (std::size_t i = 0; i < count; ++i)
      fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++)
        {
          try
          {
            fn(i);
          }
          catch (...)
          {
            std::lock_guard lock{error_mutex};
            if (!error)
              error = std::current_exception();
          }
        }
      });
  }
  if (error)
    std::rethrow_exception(error);
}

} // namespace otf
