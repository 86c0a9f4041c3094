#pragma once

// Window-parallel map-reduce with a merge order fixed by window index.
//
// A range [lo, hi) is cut into windows whose boundaries depend only on the
// window size, never on the thread count. Workers fill one result slot per
// window; the slots are folded left to right afterwards, so floating-point
// sums come out bitwise identical for any number of threads.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "hrsift/arith.hpp"
#include "hrsift/error.hpp"

namespace hrsift {

struct Budget {
  double max_mb = 0;   // 0 = unlimited
  double max_sec = 0;  // 0 = unlimited

  void check_memory(double bytes, const std::string& what) const {
    if (max_mb > 0 && bytes / (1024.0 * 1024.0) > max_mb)
      throw ResourceError(what + ": needs " + std::to_string(bytes / (1024.0 * 1024.0)) + " MB, budget " +
                          std::to_string(max_mb) + " MB");
  }
};

struct Exec {
  unsigned threads = default_threads();
  u64 window = 1u << 20;
  Budget budget{};

  static unsigned default_threads() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
  }
};

class Deadline {
 public:
  explicit Deadline(const Budget& b) : start_(clock::now()), limit_(b.max_sec) {}
  bool expired() const {
    return limit_ > 0 && std::chrono::duration<double>(clock::now() - start_).count() > limit_;
  }
  double elapsed() const { return std::chrono::duration<double>(clock::now() - start_).count(); }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_;
  double limit_;
};

/// Runs `task(i)` for i in [0, count) on `threads` workers and returns the
/// results in index order. Exceptions from tasks are rethrown on the caller.
template <class Result, class Task>
std::vector<Result> run_indexed(std::size_t count, unsigned threads, const Budget& budget, const std::string& what,
                                Task&& task) {
  std::vector<std::optional<Result>> slots(count);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  Deadline deadline(budget);

  auto worker = [&] {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        if (deadline.expired())
          throw ResourceError(what + ": time budget exceeded after " + std::to_string(i) + " of " +
                              std::to_string(count) + " blocks");
        slots[i].emplace(task(i));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };

  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  std::vector<Result> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// map(window_lo, window_hi) -> Acc for each window of [lo, hi); results are
/// folded into `init` with merge(acc, part) in ascending window order.
template <class Acc, class Map, class Merge>
Acc map_reduce_windows(u64 lo, u64 hi, const Exec& exec, Acc init, Map&& map, Merge&& merge,
                       const std::string& what = "window pass") {
  if (hi <= lo) return init;
  const u64 w = std::max<u64>(exec.window, 1);
  const std::size_t count = static_cast<std::size_t>((hi - lo + w - 1) / w);
  auto parts = run_indexed<Acc>(count, exec.threads, exec.budget, what, [&](std::size_t i) {
    const u64 a = lo + static_cast<u64>(i) * w;
    const u64 b = std::min(hi, a + w);
    return map(a, b);
  });
  for (auto& part : parts) merge(init, std::move(part));
  return init;
}

/// Visits every n in [lo, hi) with its factorization, window by window.
/// visit(acc, fac) accumulates into a per-window Acc copy-constructed from
/// `zero`; window accumulators are merged in ascending order.
template <class Acc, class Visit, class Merge>
Acc reduce_factored(u64 lo, u64 hi, const PrimeTable& table, const Exec& exec, const Acc& zero, Visit&& visit,
                    Merge&& merge, const std::string& what = "factor pass") {
  if (lo == 0) throw InvalidArgument("reduce_factored: range must start at 1 or above");
  return map_reduce_windows(
      lo, hi, exec, zero,
      [&](u64 a, u64 b) {
        Acc acc = zero;
        if (a == 1) {
          visit(acc, Factorization(1));
          a = 2;
        }
        if (a < b) {
          const FactorWindow fw(a, b, table);
          for (u64 n = a; n < b; ++n) visit(acc, fw.factorize(n));
        }
        return acc;
      },
      merge, what);
}

}  // namespace hrsift
