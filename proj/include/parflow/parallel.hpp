#pragma once

#include <omp.h>

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

namespace parflow::parallel {

/// Runs body(i) for i in [0, count) on `threads` OpenMP threads. Loops with
/// fewer than `min_parallel` items run inline on the calling thread.
template <typename Body>
void for_each_index(std::int64_t count, int threads, std::int64_t min_parallel, Body&& body) {
  if (threads <= 1 || count < std::max<std::int64_t>(min_parallel, 2)) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
#pragma omp parallel for num_threads(threads) schedule(dynamic, 16)
  for (std::int64_t i = 0; i < count; ++i) body(i);
}

/// Exclusive prefix sum of `in` into `out` (same length); returns the total.
/// Blocked two-pass scan: per-block sums, sequential scan of block sums,
/// then per-block local scans with the block offset.
template <typename T>
T exclusive_scan(std::span<const T> in, std::span<T> out, int threads, std::int64_t min_parallel) {
  const auto count = static_cast<std::int64_t>(in.size());
  if (threads <= 1 || count < std::max<std::int64_t>(min_parallel, 2)) {
    T running{};
    for (std::int64_t i = 0; i < count; ++i) {
      const T x = in[i];
      out[i] = running;
      running += x;
    }
    return running;
  }
  const std::int64_t blocks = std::min<std::int64_t>(count, std::int64_t{threads} * 4);
  const std::int64_t block_len = (count + blocks - 1) / blocks;
  std::vector<T> block_sum(static_cast<std::size_t>(blocks) + 1, T{});
#pragma omp parallel for num_threads(threads) schedule(static)
  for (std::int64_t b = 0; b < blocks; ++b) {
    const std::int64_t lo = b * block_len;
    const std::int64_t hi = std::min(count, lo + block_len);
    T sum{};
    for (std::int64_t i = lo; i < hi; ++i) sum += in[i];
    block_sum[b + 1] = sum;
  }
  for (std::int64_t b = 0; b < blocks; ++b) block_sum[b + 1] += block_sum[b];
#pragma omp parallel for num_threads(threads) schedule(static)
  for (std::int64_t b = 0; b < blocks; ++b) {
    const std::int64_t lo = b * block_len;
    const std::int64_t hi = std::min(count, lo + block_len);
    T running = block_sum[b];
    for (std::int64_t i = lo; i < hi; ++i) {
      const T x = in[i];
      out[i] = running;
      running += x;
    }
  }
  return block_sum[blocks];
}

/// Concatenates variable-length segments. Segment i lives at
/// buffer[start[i], start[i] + length[i]); the result keeps segment order.
/// `offsets` is scratch of the same length as `length`.
template <typename T>
void concat_segments(std::span<const T> buffer, std::span<const std::int64_t> start,
                     std::span<const std::int64_t> length, std::span<std::int64_t> offsets,
                     std::vector<T>& out, int threads, std::int64_t min_parallel) {
  const std::int64_t total = exclusive_scan<std::int64_t>(length, offsets, threads, min_parallel);
  out.resize(static_cast<std::size_t>(total));
  for_each_index(static_cast<std::int64_t>(length.size()), threads, min_parallel,
                 [&](std::int64_t i) {
                   std::copy_n(buffer.begin() + start[i], length[i], out.begin() + offsets[i]);
                 });
}

/// Keeps the indices i in [0, count) with keep(i) true, in increasing order.
template <typename T, typename Pred>
void filter_indices(std::int64_t count, Pred&& keep, std::vector<T>& out, int threads,
                    std::int64_t min_parallel) {
  out.clear();
  if (threads <= 1 || count < std::max<std::int64_t>(min_parallel, 2)) {
    for (std::int64_t i = 0; i < count; ++i) {
      if (keep(i)) out.push_back(static_cast<T>(i));
    }
    return;
  }
  const std::int64_t blocks = std::min<std::int64_t>(count, std::int64_t{threads} * 4);
  const std::int64_t block_len = (count + blocks - 1) / blocks;
  std::vector<std::vector<T>> parts(static_cast<std::size_t>(blocks));
#pragma omp parallel for num_threads(threads) schedule(static)
  for (std::int64_t b = 0; b < blocks; ++b) {
    const std::int64_t lo = b * block_len;
    const std::int64_t hi = std::min(count, lo + block_len);
    for (std::int64_t i = lo; i < hi; ++i) {
      if (keep(i)) parts[b].push_back(static_cast<T>(i));
    }
  }
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  out.reserve(total);
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
}

/// Keeps the elements x of `in` with keep(x) true, preserving order.
template <typename T, typename Pred>
void filter(std::span<const T> in, Pred&& keep, std::vector<T>& out, int threads,
            std::int64_t min_parallel) {
  std::vector<std::int64_t> idx;
  filter_indices<std::int64_t>(static_cast<std::int64_t>(in.size()),
                               [&](std::int64_t i) { return keep(in[i]); }, idx, threads,
                               min_parallel);
  out.resize(idx.size());
  for_each_index(static_cast<std::int64_t>(idx.size()), threads, min_parallel,
                 [&](std::int64_t j) { out[j] = in[idx[j]]; });
}

}  // namespace parflow::parallel
