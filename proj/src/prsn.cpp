#include "parflow/prsn.hpp"

#include <algorithm>
#include <stdexcept>

#include "parflow/parallel.hpp"

namespace parflow {

std::string_view to_string(PrsnVariant variant) {
  switch (variant) {
    case PrsnVariant::kSimpleSync: return "simple-sync";
    case PrsnVariant::kPrsn: return "prsn";
  }
  return "unknown";
}

VertexId edge_owner(VertexId v, VertexId w, std::span<const Label> labels) {
  return wins(labels[v], labels[w], v, w) ? v : w;
}

SolverState::SolverState(const FlowNetwork& net)
    : label(static_cast<std::size_t>(net.vertex_count()), 0),
      shadow(static_cast<std::size_t>(net.vertex_count()), 0),
      excess(static_cast<std::size_t>(net.vertex_count()), 0),
      added_excess(static_cast<std::size_t>(net.vertex_count())),
      is_discovered(static_cast<std::size_t>(net.vertex_count())),
      in_working_set(static_cast<std::size_t>(net.vertex_count()), 0),
      local_excess(static_cast<std::size_t>(net.vertex_count()), 0),
      work(static_cast<std::size_t>(net.vertex_count()), 0),
      pushes(static_cast<std::size_t>(net.vertex_count()), 0),
      relabels(static_cast<std::size_t>(net.vertex_count()), 0),
      label_decreases(static_cast<std::size_t>(net.vertex_count()), 0),
      discovered(static_cast<std::size_t>(net.arc_count() + net.vertex_count())),
      discovered_count(static_cast<std::size_t>(net.vertex_count()), 0),
      deferred_arc(static_cast<std::size_t>(net.arc_count())),
      deferred_amount(static_cast<std::size_t>(net.arc_count()), 0),
      deferred_count(static_cast<std::size_t>(net.vertex_count()), 0) {
  for (auto& x : added_excess) x.store(0, std::memory_order_relaxed);
  for (auto& f : is_discovered) f.store(0, std::memory_order_relaxed);
}

PrsnSolver::PrsnSolver(FlowNetwork net, PrsnConfig config)
    : net_(std::move(net)), config_(config), state_(net_), relabeler_(net_) {
  if (config_.threads < 1) throw std::invalid_argument("PrsnConfig: threads must be >= 1");
  if (!config_.schedule.valid()) throw std::invalid_argument("PrsnConfig: invalid schedule");
  const auto n = static_cast<std::size_t>(net_.vertex_count());
  state_.working_set.reserve(n);
  next_.reserve(n);
  seg_start_.reserve(n);
  seg_length_.reserve(n);
  seg_offset_.reserve(n);
}

const WorkingSet& PrsnSolver::initialize() {
  const VertexId n = net_.vertex_count();
  const VertexId s = net_.source();
  auto res = net_.mutable_residuals();
  std::fill(state_.label.begin(), state_.label.end(), 0);
  std::fill(state_.excess.begin(), state_.excess.end(), 0);
  state_.label[s] = n;
  for (ArcId a = net_.first_out(s); a < net_.end_out(s); ++a) {
    const VertexId w = net_.head(a);
    const Capacity r = res[a];
    if (r == 0 || w == s) continue;
    res[a] = 0;
    res[net_.reverse(a)] += r;
    state_.excess[w] += r;
  }
  std::copy(state_.label.begin(), state_.label.end(), state_.shadow.begin());
  state_.work_since_last_gr = config_.schedule.initial_work(n, net_.edge_count());
  set_working_set_flags(false);
  rebuild_working_set();
  initialized_ = true;
  if (observer_.after_iteration) observer_.after_iteration({0, net_, state_});
  return state_.working_set;
}

void PrsnSolver::mark_discovered(VertexId by, VertexId w) {
  auto& flag = state_.is_discovered[w];
  if (flag.load(std::memory_order_relaxed) != 0) return;
  if (flag.exchange(1, std::memory_order_acq_rel) != 0) return;
  state_.discovered[state_.discovered_begin(net_, by) + state_.discovered_count[by]++] = w;
}

void PrsnSolver::finish_vertex(VertexId v, Capacity local) {
  state_.added_excess[v].fetch_add(local - state_.excess[v], std::memory_order_relaxed);
  if (local > 0 && state_.shadow[v] < net_.vertex_count()) mark_discovered(v, v);
}

void PrsnSolver::discharge_full(VertexId v) {
  SolverState& st = state_;
  const Label n = net_.vertex_count();
  const VertexId t = net_.sink();
  auto res = net_.mutable_residuals();
  const ArcId begin = net_.first_out(v);
  const ArcId end = net_.end_out(v);
  const Label dv = st.label[v];
  Label dprime = dv;
  Capacity e = st.excess[v];
  std::int64_t work = 0;
  std::int64_t pushes = 0;
  std::int64_t relabels = 0;
  std::int64_t decreases = 0;
  st.discovered_count[v] = 0;
  st.deferred_count[v] = 0;

  while (e > 0) {
    Label lowest = n;
    bool skipped = false;
    for (ArcId a = begin; a < end && e > 0; ++a) {
      const Capacity r = res[a];
      if (r == 0) continue;
      const VertexId w = net_.head(a);
      const Label dw = st.label[w];
      const bool admissible = dprime == dw + 1;
      const bool shared = st.in_working_set[w] != 0;
      if (admissible && shared && !wins(dv, dw, v, w)) {
        skipped = true;
        continue;
      }
      if (!admissible) {
        lowest = std::min(lowest, dw + 1);
        continue;
      }
      const Capacity delta = std::min(e, r);
      res[a] = r - delta;
      if (shared) {
        // w reads its own arcs during this iteration; hand the reverse
        // increase to the sweep so w sees the iteration-start residual.
        if (st.deferred_amount[a] == 0) st.deferred_arc[begin + st.deferred_count[v]++] = a;
        st.deferred_amount[a] += delta;
      } else {
        res[net_.reverse(a)] += delta;
      }
      e -= delta;
      ++pushes;
      st.added_excess[w].fetch_add(delta, std::memory_order_relaxed);
      if (w != t) mark_discovered(v, w);
      if (r > delta) lowest = std::min(lowest, dw + 1);
    }
    if (e == 0 || skipped) break;
    if (lowest < dprime) ++decreases;
    dprime = std::min(lowest, n);
    work += config_.schedule.relabel_cost(end - begin);
    ++relabels;
    if (dprime >= n) break;
  }

  st.shadow[v] = dprime;
  st.local_excess[v] = e;
  st.work[v] = work;
  st.pushes[v] = pushes;
  st.relabels[v] = relabels;
  st.label_decreases[v] = decreases;
  finish_vertex(v, e);
}

void PrsnSolver::push_pass(VertexId v) {
  SolverState& st = state_;
  const VertexId t = net_.sink();
  auto res = net_.mutable_residuals();
  const Label dv = st.label[v];
  Capacity e = st.excess[v];
  std::int64_t pushes = 0;
  st.discovered_count[v] = 0;
  st.deferred_count[v] = 0;
  for (ArcId a = net_.first_out(v); a < net_.end_out(v) && e > 0; ++a) {
    const VertexId w = net_.head(a);
    // Label test first: the reverse arc of an admissible arc is never
    // admissible for w, so w never reads a residual written here.
    if (dv != st.label[w] + 1) continue;
    const Capacity r = res[a];
    if (r == 0) continue;
    const Capacity delta = std::min(e, r);
    res[a] = r - delta;
    res[net_.reverse(a)] += delta;
    e -= delta;
    ++pushes;
    st.added_excess[w].fetch_add(delta, std::memory_order_relaxed);
    if (w != t) mark_discovered(v, w);
  }
  st.local_excess[v] = e;
  st.pushes[v] = pushes;
  st.shadow[v] = dv;
}

void PrsnSolver::relabel_once(VertexId v) {
  SolverState& st = state_;
  const Label n = net_.vertex_count();
  const Capacity e = st.local_excess[v];
  st.work[v] = 0;
  st.relabels[v] = 0;
  st.label_decreases[v] = 0;
  if (e > 0) {
    Label lowest = n;
    for (ArcId a = net_.first_out(v); a < net_.end_out(v); ++a) {
      if (net_.residual(a) > 0) lowest = std::min(lowest, st.label[net_.head(a)] + 1);
    }
    if (lowest < st.label[v]) st.label_decreases[v] = 1;
    st.shadow[v] = std::min(lowest, n);
    st.work[v] = config_.schedule.relabel_cost(net_.out_degree(v));
    st.relabels[v] = 1;
  }
  finish_vertex(v, e);
}

DischargeOutcome PrsnSolver::discharge(VertexId v) {
  if (v < 0 || v >= net_.vertex_count() || !state_.in_working_set[v]) {
    throw std::invalid_argument("discharge: vertex is not in the working set");
  }
  if (config_.variant == PrsnVariant::kPrsn) {
    discharge_full(v);
  } else {
    push_pass(v);
    relabel_once(v);
  }
  DischargeOutcome out;
  out.new_label = state_.shadow[v];
  out.work = state_.work[v];
  out.pushes = state_.pushes[v];
  out.relabels = state_.relabels[v];
  out.remaining_excess = state_.local_excess[v];
  const auto begin = state_.discovered.begin() + state_.discovered_begin(net_, v);
  out.discovered.assign(begin, begin + state_.discovered_count[v]);
  out.skipped = out.remaining_excess > 0 && out.new_label < net_.vertex_count() &&
                config_.variant == PrsnVariant::kPrsn;
  return out;
}

void PrsnSolver::set_working_set_flags(bool value) {
  const auto& ws = state_.working_set;
  parallel::for_each_index(static_cast<std::int64_t>(ws.size()), config_.threads,
                           config_.min_parallel,
                           [&](std::int64_t i) { state_.in_working_set[ws[i]] = value ? 1 : 0; });
}

void PrsnSolver::rebuild_working_set() {
  const VertexId n = net_.vertex_count();
  const VertexId s = net_.source();
  const VertexId t = net_.sink();
  set_working_set_flags(false);
  parallel::filter_indices<VertexId>(
      n,
      [&](std::int64_t v) {
        return v != s && v != t && state_.excess[v] > 0 && state_.label[v] < n;
      },
      state_.working_set, config_.threads, config_.min_parallel);
  set_working_set_flags(true);
}

void PrsnSolver::global_relabel() {
  relabeler_.run(net_, state_.label, config_.threads, config_.min_parallel);
  std::copy(state_.label.begin(), state_.label.end(), state_.shadow.begin());
  state_.work_since_last_gr = 0;
  ++stats_.global_relabels;
  rebuild_working_set();
}

void PrsnSolver::run_iteration() {
  SolverState& st = state_;
  const VertexId n = net_.vertex_count();
  const VertexId s = net_.source();
  const VertexId t = net_.sink();
  const int threads = config_.threads;
  const std::int64_t min_par = config_.min_parallel;
  const auto& ws = st.working_set;
  const auto k = static_cast<std::int64_t>(ws.size());
  const std::int64_t iteration = stats_.iterations + 1;

  if (observer_.before_iteration) observer_.before_iteration({iteration, net_, st});

  if (config_.variant == PrsnVariant::kPrsn) {
    parallel::for_each_index(k, threads, min_par, [&](std::int64_t i) { discharge_full(ws[i]); });
  } else {
    parallel::for_each_index(k, threads, min_par, [&](std::int64_t i) { push_pass(ws[i]); });
    parallel::for_each_index(k, threads, min_par, [&](std::int64_t i) { relabel_once(ws[i]); });
  }

  // Publish labels, deferred reverse residuals and excess of the processed
  // vertices; collect their discovery segments.
  auto res = net_.mutable_residuals();
  seg_start_.resize(ws.size());
  seg_length_.resize(ws.size());
  seg_offset_.resize(ws.size());
  std::int64_t work = 0;
  std::int64_t pushes = 0;
  std::int64_t relabels = 0;
  std::int64_t decreases = 0;
  const bool par = threads > 1 && k >= std::max<std::int64_t>(min_par, 2);
#pragma omp parallel for num_threads(threads) schedule(static) if (par) \
    reduction(+ : work, pushes, relabels, decreases)
  for (std::int64_t i = 0; i < k; ++i) {
    const VertexId v = ws[i];
    st.label[v] = st.shadow[v];
    const ArcId base = net_.first_out(v);
    for (std::int64_t j = 0; j < st.deferred_count[v]; ++j) {
      const ArcId a = st.deferred_arc[base + j];
      res[net_.reverse(a)] += st.deferred_amount[a];
      st.deferred_amount[a] = 0;
    }
    st.deferred_count[v] = 0;
    st.excess[v] += st.added_excess[v].exchange(0, std::memory_order_relaxed);
    st.is_discovered[v].store(0, std::memory_order_relaxed);
    st.in_working_set[v] = 0;
    seg_start_[i] = st.discovered_begin(net_, v);
    seg_length_[i] = st.discovered_count[v];
    work += st.work[v];
    pushes += st.pushes[v];
    relabels += st.relabels[v];
    decreases += st.label_decreases[v];
  }

  parallel::concat_segments<VertexId>(st.discovered, seg_start_, seg_length_, seg_offset_, next_,
                                      threads, min_par);
  parallel::for_each_index(static_cast<std::int64_t>(next_.size()), threads, min_par,
                           [&](std::int64_t i) {
                             const VertexId w = next_[i];
                             st.excess[w] += st.added_excess[w].exchange(0, std::memory_order_relaxed);
                             st.is_discovered[w].store(0, std::memory_order_relaxed);
                           });
  st.excess[t] += st.added_excess[t].exchange(0, std::memory_order_relaxed);

  parallel::filter<VertexId>(
      next_,
      [&](VertexId w) { return w != s && w != t && st.excess[w] > 0 && st.label[w] < n; },
      st.working_set, threads, min_par);
  set_working_set_flags(true);

  stats_.iterations = iteration;
  stats_.pushes += pushes;
  stats_.relabels += relabels;
  stats_.total_work += work;
  st.work_since_last_gr += work;
  label_decrease_total_ += decreases;

  if (observer_.after_iteration) observer_.after_iteration({iteration, net_, st});
}

void PrsnSolver::run() {
  if (!initialized_) initialize();
  const std::int64_t n = net_.vertex_count();
  const std::int64_t m = net_.edge_count();
  bool labels_exact = false;
  for (;;) {
    const bool fire = gr_should_trigger(state_.work_since_last_gr, n, m, config_.schedule);
    if (observer_.on_gr_check) {
      observer_.on_gr_check({stats_.iterations, state_.work_since_last_gr, n, m, fire});
    }
    if (fire) {
      global_relabel();
      labels_exact = true;
    }
    if (state_.working_set.empty()) {
      if (labels_exact) break;
      // Labels drifted since the last global relabel; recompute them so that
      // an empty working set really means no vertex can reach t with excess.
      if (observer_.on_termination_relabel) observer_.on_termination_relabel(stats_.iterations);
      global_relabel();
      labels_exact = true;
      if (state_.working_set.empty()) break;
    }
    run_iteration();
    labels_exact = false;
  }
}

PreflowResult PrsnSolver::release() {
  PreflowResult out;
  out.value = value();
  out.stats = stats_;
  out.labels = std::move(state_.label);
  out.excess = std::move(state_.excess);
  out.network = std::move(net_);
  return out;
}

PreflowResult solve_prsn(FlowNetwork net, PrsnConfig config) {
  PrsnSolver solver(std::move(net), config);
  solver.run();
  return solver.release();
}

}  // namespace parflow
