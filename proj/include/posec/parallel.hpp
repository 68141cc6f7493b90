#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "posec/random.hpp"

namespace posec {

// Worker count: `requested` if nonzero, else $POSEC_WORKERS, else the
// hardware concurrency (at least 1).
unsigned resolve_workers(unsigned requested);

// Splits [0, trials) into kTrialBlockSize blocks and hands them to `workers`
// threads. `make_worker()` is called once per thread and returns a callable
//   void(Engine& rng, std::uint64_t begin, std::uint64_t end, Acc& acc)
// that may keep per-thread scratch state. Block b always uses
// block_engine(seed, b), and the per-block accumulators come back in block
// order, so any reduction over them is independent of the worker count.
template <class Acc, class MakeWorker>
std::vector<Acc> run_blocks(std::uint64_t trials, std::uint64_t seed, unsigned workers,
                            MakeWorker&& make_worker, const Acc& init = Acc{}) {
  const std::uint64_t blocks = (trials + kTrialBlockSize - 1) / kTrialBlockSize;
  std::vector<Acc> out(blocks, init);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto body = [&] {
    try {
      auto work = make_worker();
      for (std::uint64_t b = next++; b < blocks; b = next++) {
        Engine rng = block_engine(seed, b);
        const std::uint64_t begin = b * kTrialBlockSize;
        const std::uint64_t end = std::min(trials, begin + kTrialBlockSize);
        work(rng, begin, end, out[b]);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = blocks;
    }
  };

  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::uint64_t>(resolve_workers(workers), std::max<std::uint64_t>(blocks, 1)));
  if (n_threads <= 1) {
    body();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(body);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace posec
