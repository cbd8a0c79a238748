#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "parflow/flow_network.hpp"
#include "parflow/global_relabel.hpp"
#include "parflow/preflow.hpp"

namespace parflow {

enum class PrsnVariant {
  /// One push pass and at most one relabel per active vertex per iteration.
  kSimpleSync,
  /// Full discharge per iteration with the edge-ownership rule.
  kPrsn,
};

std::string_view to_string(PrsnVariant variant);

struct PrsnConfig {
  PrsnVariant variant = PrsnVariant::kPrsn;
  int threads = 1;
  GlobalRelabelSchedule schedule;
  /// Parallel loops over fewer items than this run on the calling thread.
  std::int64_t min_parallel = 256;
};

/// Active vertices of one synchronous iteration, without duplicates.
using WorkingSet = std::vector<VertexId>;

/// True iff v owns the arcs between v and w when both are active:
/// d(v) < d(w) - 1, or d(v) = d(w) + 1, or d(v) = d(w) and v < w.
/// Exactly one of wins(v, w) and wins(w, v) holds for v != w.
constexpr bool wins(Label dv, Label dw, VertexId v, VertexId w) {
  return dv < dw - 1 || dv == dw + 1 || (dv == dw && v < w);
}

VertexId edge_owner(VertexId v, VertexId w, std::span<const Label> labels);

/// Per-vertex solver state. Arrays are indexed by vertex id; `discovered` and
/// `deferred_arc` are carved into fixed per-vertex segments (see
/// discovered_begin / first_out) so workers never share a slot.
struct SolverState {
  explicit SolverState(const FlowNetwork& net);

  std::vector<Label> label;
  /// Labels written during an iteration; published into `label` at its end.
  std::vector<Label> shadow;
  std::vector<Capacity> excess;
  std::vector<std::atomic<Capacity>> added_excess;
  std::vector<std::atomic<std::uint8_t>> is_discovered;
  /// Membership of the working set, frozen for the whole iteration.
  std::vector<std::uint8_t> in_working_set;
  /// Excess left after the push phase (simple variant).
  std::vector<Capacity> local_excess;

  std::vector<std::int64_t> work;
  std::vector<std::int64_t> pushes;
  std::vector<std::int64_t> relabels;
  std::vector<std::int64_t> label_decreases;

  std::vector<VertexId> discovered;
  std::vector<std::int64_t> discovered_count;
  /// Arcs v -> w whose reverse residual increase is applied after the
  /// iteration because w was discharging at the same time.
  std::vector<ArcId> deferred_arc;
  std::vector<Capacity> deferred_amount;
  std::vector<std::int64_t> deferred_count;

  WorkingSet working_set;
  std::int64_t work_since_last_gr = 0;

  std::int64_t discovered_begin(const FlowNetwork& net, VertexId v) const {
    return net.first_out(v) + v;
  }
};

struct DischargeOutcome {
  Capacity remaining_excess = 0;
  Label new_label = 0;
  std::int64_t work = 0;
  std::int64_t pushes = 0;
  std::int64_t relabels = 0;
  bool skipped = false;
  std::vector<VertexId> discovered;
};

enum class RelabelReason { kThreshold, kTermination };

struct GrCheckEvent {
  std::int64_t iteration = 0;
  std::int64_t work_since_last_gr = 0;
  std::int64_t n = 0;
  std::int64_t m = 0;
  bool fired = false;
};

struct IterationView {
  std::int64_t iteration = 0;
  const FlowNetwork& network;
  const SolverState& state;
};

/// Optional instrumentation hooks; all run on the controller thread.
struct PrsnObserver {
  /// Every global relabel trigger check, fired or not.
  std::function<void(const GrCheckEvent&)> on_gr_check;
  /// A global relabel that ran because the working set emptied while labels
  /// were not known to be exact.
  std::function<void(std::int64_t iteration)> on_termination_relabel;
  /// Right before the working set of `iteration` is discharged.
  std::function<void(const IterationView&)> before_iteration;
  /// After the update sweep of `iteration` (an iteration boundary). Also
  /// called once with iteration 0 after initialize().
  std::function<void(const IterationView&)> after_iteration;
};

/// Synchronous parallel push-relabel solver.
///
/// Each iteration discharges the working set in parallel against a frozen
/// snapshot of labels and working-set membership. Cross-vertex effects are
/// an atomic add into added_excess, an atomic test-and-set on is_discovered,
/// and residual updates on arc pairs that the ownership rule gives to a
/// single vertex. A sweep then publishes labels and excess and the next
/// working set is the prefix-sum concatenation of the discovery segments.
/// Global relabels run between iterations on the work schedule and once more
/// when the working set empties, which certifies the preflow as maximum.
class PrsnSolver {
 public:
  PrsnSolver(FlowNetwork net, PrsnConfig config);

  void set_observer(PrsnObserver observer) { observer_ = std::move(observer); }

  /// Saturates every source arc, sets d(s) = n and all other labels to 0,
  /// and builds the working set from the vertices that received excess.
  const WorkingSet& initialize();

  /// Discharges one working-set vertex against the current snapshot. Used by
  /// run_iteration for every member; the caller is responsible for the
  /// update sweep.
  DischargeOutcome discharge(VertexId v);

  /// Discharges the whole working set, applies the sweep and builds the next
  /// working set.
  void run_iteration();

  /// Parallel global relabel followed by a fresh working set of all vertices
  /// with positive excess and label below n.
  void global_relabel();

  /// initialize() followed by iterations until no active vertex remains.
  void run();

  const FlowNetwork& network() const { return net_; }
  const SolverState& state() const { return state_; }
  /// Mutable access for tests that stage specific labels.
  SolverState& mutable_state() { return state_; }
  const SolverStats& stats() const { return stats_; }
  const PrsnConfig& config() const { return config_; }
  std::int64_t label_decreases() const { return label_decrease_total_; }
  Capacity value() const { return state_.excess[net_.sink()]; }

  PreflowResult release();

 private:
  void discharge_full(VertexId v);
  void push_pass(VertexId v);
  void relabel_once(VertexId v);
  void finish_vertex(VertexId v, Capacity local);
  void mark_discovered(VertexId by, VertexId w);
  void rebuild_working_set();
  void set_working_set_flags(bool value);

  FlowNetwork net_;
  PrsnConfig config_;
  SolverState state_;
  ParallelGlobalRelabel relabeler_;
  SolverStats stats_;
  PrsnObserver observer_;
  WorkingSet next_;
  std::vector<std::int64_t> seg_start_;
  std::vector<std::int64_t> seg_length_;
  std::vector<std::int64_t> seg_offset_;
  std::int64_t label_decrease_total_ = 0;
  bool initialized_ = false;
};

PreflowResult solve_prsn(FlowNetwork net, PrsnConfig config = {});

}  // namespace parflow
