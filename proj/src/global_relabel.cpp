#include "parflow/global_relabel.hpp"

#include <atomic>

#include "parflow/parallel.hpp"

namespace parflow {

bool gr_should_trigger(std::int64_t work_since_last_gr, std::int64_t n, std::int64_t m,
                       const GlobalRelabelSchedule& schedule) {
  return work_since_last_gr * schedule.freq_num >= schedule.threshold(n, m) * schedule.freq_den;
}

void global_relabel_sequential(const FlowNetwork& net, std::span<Label> labels) {
  const VertexId n = net.vertex_count();
  std::fill(labels.begin(), labels.end(), n);
  const VertexId t = net.sink();
  labels[t] = 0;
  std::vector<VertexId> queue{t};
  queue.reserve(static_cast<std::size_t>(n));
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId v = queue[head];
    for (ArcId a = net.first_out(v); a < net.end_out(v); ++a) {
      const VertexId w = net.head(a);
      // w -> v must be residual for w to reach t through v.
      if (labels[w] == n && w != net.source() && net.residual(net.reverse(a)) > 0) {
        labels[w] = labels[v] + 1;
        queue.push_back(w);
      }
    }
  }
}

ParallelGlobalRelabel::ParallelGlobalRelabel(const FlowNetwork& net) {
  const auto n = static_cast<std::size_t>(net.vertex_count());
  frontier_.reserve(n);
  next_.reserve(n);
  buffer_.resize(static_cast<std::size_t>(net.arc_count()));
  start_.reserve(n);
  length_.reserve(n);
  offsets_.reserve(n);
}

void ParallelGlobalRelabel::run(const FlowNetwork& net, std::span<Label> labels, int threads,
                                std::int64_t min_parallel) {
  const VertexId n = net.vertex_count();
  const VertexId s = net.source();
  const VertexId t = net.sink();
  parallel::for_each_index(n, threads, min_parallel, [&](std::int64_t v) { labels[v] = n; });
  labels[t] = 0;

  frontier_.assign(1, t);
  while (!frontier_.empty()) {
    const auto width = static_cast<std::int64_t>(frontier_.size());
    start_.resize(frontier_.size());
    length_.resize(frontier_.size());
    offsets_.resize(frontier_.size());

    // Each frontier vertex writes its discoveries into the slice of buffer_
    // reserved by its own arc range, so slices never overlap.
    parallel::for_each_index(width, threads, min_parallel, [&](std::int64_t i) {
      const VertexId v = frontier_[i];
      const Label next_label = labels[v] + 1;
      const ArcId begin = net.first_out(v);
      std::int64_t found = 0;
      for (ArcId a = begin; a < net.end_out(v); ++a) {
        const VertexId w = net.head(a);
        if (w == s || net.residual(net.reverse(a)) <= 0) continue;
        std::atomic_ref<Label> slot(labels[w]);
        Label expected = n;
        if (slot.load(std::memory_order_relaxed) == n &&
            slot.compare_exchange_strong(expected, next_label, std::memory_order_relaxed)) {
          buffer_[begin + found++] = w;
        }
      }
      start_[i] = begin;
      length_[i] = found;
    });

    parallel::concat_segments<VertexId>(buffer_, start_, length_, offsets_, next_, threads,
                                        min_parallel);
    frontier_.swap(next_);
  }
}

void global_relabel_parallel(const FlowNetwork& net, std::span<Label> labels, int threads) {
  ParallelGlobalRelabel relabel(net);
  relabel.run(net, labels, threads);
}

}  // namespace parflow
