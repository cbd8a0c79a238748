#include "parflow/sequential.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace parflow {

FifoPushRelabel::FifoPushRelabel(FlowNetwork net, GlobalRelabelSchedule schedule)
    : net_(std::move(net)), schedule_(schedule) {
  const auto n = static_cast<std::size_t>(net_.vertex_count());
  label_.assign(n, 0);
  excess_.assign(n, 0);
  current_.assign(n, 0);
  queued_.assign(n, 0);
  queue_.reserve(n);
}

void FifoPushRelabel::run() {
  const VertexId n = net_.vertex_count();
  const VertexId s = net_.source();
  const VertexId t = net_.sink();
  label_[s] = n;
  for (ArcId a = net_.first_out(s); a < net_.end_out(s); ++a) {
    const Capacity delta = net_.residual(a);
    if (delta == 0) continue;
    net_.push_unchecked(a, delta);
    excess_[net_.head(a)] += delta;
    excess_[s] -= delta;
  }
  work_since_gr_ = schedule_.initial_work(n, net_.edge_count());

  for (;;) {
    if (gr_should_trigger(work_since_gr_, n, net_.edge_count(), schedule_)) global_relabel();
    if (queue_head_ == queue_.size()) break;
    const VertexId v = queue_[queue_head_++];
    queued_[v] = 0;
    if (queue_head_ > 4096 && queue_head_ * 2 > queue_.size()) {
      queue_.erase(queue_.begin(), queue_.begin() + static_cast<std::ptrdiff_t>(queue_head_));
      queue_head_ = 0;
    }
    if (v == t || label_[v] >= n) continue;
    discharge(v);
  }
}

void FifoPushRelabel::global_relabel() {
  global_relabel_sequential(net_, label_);
  const VertexId n = net_.vertex_count();
  queue_.clear();
  queue_head_ = 0;
  for (VertexId v = 0; v < n; ++v) {
    current_[v] = net_.first_out(v);
    queued_[v] = 0;
    if (v != net_.source() && v != net_.sink() && excess_[v] > 0 && label_[v] < n) {
      queue_.push_back(v);
      queued_[v] = 1;
    }
  }
  work_since_gr_ = 0;
  ++stats_.global_relabels;
}

void FifoPushRelabel::discharge(VertexId v) {
  const VertexId n = net_.vertex_count();
  const VertexId s = net_.source();
  const VertexId t = net_.sink();
  const ArcId end = net_.end_out(v);
  while (excess_[v] > 0) {
    ArcId a = current_[v];
    for (; a < end; ++a) {
      const Capacity res = net_.residual(a);
      if (res == 0) continue;
      const VertexId w = net_.head(a);
      if (label_[v] != label_[w] + 1) continue;
      const Capacity delta = std::min(excess_[v], res);
      net_.push_unchecked(a, delta);
      excess_[v] -= delta;
      excess_[w] += delta;
      ++stats_.pushes;
      if (w != s && w != t && !queued_[w]) {
        queued_[w] = 1;
        queue_.push_back(w);
      }
      if (excess_[v] == 0) break;
    }
    current_[v] = a;
    if (excess_[v] == 0) break;

    Label lowest = n;
    for (ArcId b = net_.first_out(v); b < end; ++b) {
      if (net_.residual(b) > 0) lowest = std::min(lowest, label_[net_.head(b)] + 1);
    }
    label_[v] = std::min(lowest, n);
    current_[v] = net_.first_out(v);
    ++stats_.relabels;
    const std::int64_t cost = schedule_.relabel_cost(net_.out_degree(v));
    work_since_gr_ += cost;
    stats_.total_work += cost;
    if (label_[v] >= n) break;
  }
}

PreflowResult FifoPushRelabel::release() {
  PreflowResult out;
  out.value = value();
  out.stats = stats_;
  out.labels = std::move(label_);
  out.excess = std::move(excess_);
  out.network = std::move(net_);
  return out;
}

PreflowResult solve_fifo_seq(FlowNetwork net, GlobalRelabelSchedule schedule) {
  FifoPushRelabel solver(std::move(net), schedule);
  solver.run();
  return solver.release();
}

FlowAssignment solve_edmonds_karp(FlowNetwork net) {
  const VertexId n = net.vertex_count();
  const VertexId s = net.source();
  const VertexId t = net.sink();
  std::vector<ArcId> parent(static_cast<std::size_t>(n));
  std::vector<VertexId> queue;
  queue.reserve(static_cast<std::size_t>(n));
  for (;;) {
    std::fill(parent.begin(), parent.end(), ArcId{-1});
    queue.assign(1, s);
    bool reached = false;
    for (std::size_t head = 0; head < queue.size() && !reached; ++head) {
      const VertexId v = queue[head];
      for (ArcId a = net.first_out(v); a < net.end_out(v); ++a) {
        const VertexId w = net.head(a);
        if (w == s || parent[w] != -1 || net.residual(a) == 0) continue;
        parent[w] = a;
        if (w == t) {
          reached = true;
          break;
        }
        queue.push_back(w);
      }
    }
    if (!reached) break;

    Capacity bottleneck = std::numeric_limits<Capacity>::max();
    for (VertexId v = t; v != s; v = net.owner(parent[v])) {
      bottleneck = std::min(bottleneck, net.residual(parent[v]));
    }
    for (VertexId v = t; v != s; v = net.owner(parent[v])) net.push_unchecked(parent[v], bottleneck);
  }
  return extract_flow(net);
}

void decompose_preflow(FlowNetwork& net) {
  const VertexId n = net.vertex_count();
  const VertexId s = net.source();
  const VertexId t = net.sink();
  const auto flow_in = [&](ArcId a) { return net.residual(a) - net.original(a); };

  std::vector<Capacity> excess(static_cast<std::size_t>(n), 0);
  for (VertexId v = 0; v < n; ++v) {
    for (ArcId a = net.first_out(v); a < net.end_out(v); ++a) excess[v] += flow_in(a);
  }

  // Flow on arcs only shrinks here, so the scan position for incoming flow
  // never needs to move backward.
  std::vector<ArcId> current(net.first_out_array().begin(), net.first_out_array().end() - 1);
  std::vector<std::int64_t> mark(static_cast<std::size_t>(n), -1);
  std::vector<VertexId> path;
  std::vector<ArcId> path_arc;
  std::int64_t stamp = 0;

  const auto incoming = [&](VertexId v) -> ArcId {
    for (ArcId& a = current[v]; a < net.end_out(v); ++a) {
      if (flow_in(a) > 0) return a;
    }
    return -1;
  };

  for (VertexId v = 0; v < n; ++v) {
    if (v == s || v == t) continue;
    if (excess[v] < 0) throw std::logic_error("decompose_preflow: negative excess");
    while (excess[v] > 0) {
      ++stamp;
      path.assign(1, v);
      path_arc.clear();
      mark[v] = stamp;
      VertexId cur = v;
      while (cur != s) {
        const ArcId a = incoming(cur);
        if (a < 0) {
          throw std::logic_error("decompose_preflow: vertex " + std::to_string(cur) +
                                 " carries excess but has no incoming flow");
        }
        const VertexId u = net.head(a);
        if (mark[u] != stamp) {
          mark[u] = stamp;
          path.push_back(u);
          path_arc.push_back(a);
          cur = u;
          continue;
        }
        // Flow cycle u -> cur -> ... -> u: cancel its bottleneck.
        const auto j = static_cast<std::size_t>(
            std::find(path.begin(), path.end(), u) - path.begin());
        Capacity amount = flow_in(a);
        for (std::size_t i = j; i < path_arc.size(); ++i) {
          amount = std::min(amount, flow_in(path_arc[i]));
        }
        net.push_unchecked(a, amount);
        for (std::size_t i = j; i < path_arc.size(); ++i) net.push_unchecked(path_arc[i], amount);
        for (std::size_t i = j + 1; i < path.size(); ++i) mark[path[i]] = -1;
        path.resize(j + 1);
        path_arc.resize(j);
        cur = u;
      }
      Capacity delta = excess[v];
      for (ArcId a : path_arc) delta = std::min(delta, flow_in(a));
      for (ArcId a : path_arc) net.push_unchecked(a, delta);
      excess[v] -= delta;
    }
  }
}

FlowAssignment preflow_to_flow(PreflowResult pre) {
  decompose_preflow(pre.network);
  return extract_flow(pre.network);
}

CutResult min_cut(const FlowNetwork& net, CutMode mode) {
  const VertexId n = net.vertex_count();
  const VertexId s = net.source();
  const VertexId t = net.sink();
  const VertexId root = mode == CutMode::kFromSource ? s : t;
  const VertexId other = mode == CutMode::kFromSource ? t : s;

  std::vector<std::uint8_t> seen(static_cast<std::size_t>(n), 0);
  std::vector<VertexId> queue{root};
  seen[root] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId v = queue[head];
    for (ArcId a = net.first_out(v); a < net.end_out(v); ++a) {
      const VertexId w = net.head(a);
      const ArcId along = mode == CutMode::kFromSource ? a : net.reverse(a);
      if (seen[w] || net.residual(along) == 0) continue;
      seen[w] = 1;
      queue.push_back(w);
    }
  }
  if (seen[other]) {
    throw std::invalid_argument("min_cut: t is reachable from s in the residual graph");
  }

  CutResult cut;
  cut.side.resize(static_cast<std::size_t>(n));
  for (VertexId v = 0; v < n; ++v) {
    const bool sink_side = mode == CutMode::kFromSource ? !seen[v] : seen[v];
    cut.side[v] = sink_side ? 1 : 0;
  }
  cut.capacity = cut_capacity(net, cut.side);
  return cut;
}

}  // namespace parflow
