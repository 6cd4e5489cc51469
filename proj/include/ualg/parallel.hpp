#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace ualg {

  // Execution settings shared by the brute-force searches. Results never
  // depend on `workers`; only wall-clock time does.
  struct Exec {
    unsigned workers = 1;
  };

  namespace detail {

    // Splits [0, n) into at most `workers` contiguous chunks and runs
    // fn(chunk_index, begin, end) for each. Chunk results are owned by the
    // caller and merged in chunk order, which keeps output deterministic.
    template <typename Fn>
    void parallel_chunks(Exec const& exec, std::uint64_t n, Fn&& fn) {
      std::uint64_t workers = std::max<std::uint64_t>(1, exec.workers);
      workers               = std::min<std::uint64_t>(workers, std::max<std::uint64_t>(n, 1));
      if (workers == 1) {
        fn(std::size_t{0}, std::uint64_t{0}, n);
        return;
      }
      std::vector<std::thread>        threads;
      std::vector<std::exception_ptr> errors(workers);
      std::uint64_t                   step = (n + workers - 1) / workers;
      for (std::uint64_t w = 0; w < workers; ++w) {
        std::uint64_t begin = std::min(n, w * step);
        std::uint64_t end   = std::min(n, begin + step);
        threads.emplace_back([&, w, begin, end] {
          try {
            fn(static_cast<std::size_t>(w), begin, end);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
      for (auto& t : threads) {
        t.join();
      }
      for (auto& e : errors) {
        if (e) {
          std::rethrow_exception(e);
        }
      }
    }

    inline std::size_t chunk_count(Exec const& exec, std::uint64_t n) {
      std::uint64_t workers = std::max<std::uint64_t>(1, exec.workers);
      return static_cast<std::size_t>(
          std::min<std::uint64_t>(workers, std::max<std::uint64_t>(n, 1)));
    }

  }  // namespace detail
}  // namespace ualg
