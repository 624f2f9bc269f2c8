#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace glsim {

inline int default_worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Deterministic partitioned map/reduce over [begin, end). Partition results
// are merged in partition order, so for an associative merge the result is
// independent of both worker count and partition count. Partitions are
// contiguous index ranges.
template <typename T, typename MapFn, typename MergeFn>
T partitioned_reduce(int64_t begin, int64_t end, const T& identity, MapFn map_partition,
                     MergeFn merge, int partitions, int workers = 0) {
    if (partitions < 1) partitions = 1;
    if (workers <= 0) workers = default_worker_count();
    int64_t total = end - begin;
    if (total <= 0) return identity;
    if (static_cast<int64_t>(partitions) > total) partitions = static_cast<int>(total);

    std::vector<T> partial(static_cast<size_t>(partitions), identity);
    auto run = [&](int p) {
        int64_t lo = begin + total * p / partitions;
        int64_t hi = begin + total * (p + 1) / partitions;
        partial[static_cast<size_t>(p)] = map_partition(lo, hi);
    };

    if (workers == 1 || partitions == 1) {
        for (int p = 0; p < partitions; ++p) run(p);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        int nthreads = std::min(workers, partitions);
        pool.reserve(static_cast<size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    int p = next.fetch_add(1);
                    if (p >= partitions) return;
                    run(p);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    T acc = identity;
    for (const T& part : partial) acc = merge(acc, part);
    return acc;
}

// Deterministic parallel fill: element i of the result depends only on i.
template <typename T, typename Fn>
std::vector<T> parallel_table(int64_t count, Fn per_index, int workers = 0) {
    std::vector<T> out(static_cast<size_t>(count));
    if (workers <= 0) workers = default_worker_count();
    if (workers == 1 || count < 2) {
        for (int64_t i = 0; i < count; ++i) out[static_cast<size_t>(i)] = per_index(i);
        return out;
    }
    std::atomic<int64_t> next{0};
    std::vector<std::thread> pool;
    int nthreads = static_cast<int>(std::min<int64_t>(workers, count));
    pool.reserve(static_cast<size_t>(nthreads));
    constexpr int64_t kChunk = 16;
    for (int t = 0; t < nthreads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                int64_t lo = next.fetch_add(kChunk);
                if (lo >= count) return;
                int64_t hi = std::min(count, lo + kChunk);
                for (int64_t i = lo; i < hi; ++i) out[static_cast<size_t>(i)] = per_index(i);
            }
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

}  // namespace glsim
