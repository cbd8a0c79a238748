#pragma once

#include <cstdint>

#include "parflow/flow_network.hpp"
#include "parflow/global_relabel.hpp"
#include "parflow/preflow.hpp"

namespace parflow {

/// Sequential FIFO push-relabel computing a maximum preflow. Uses the same
/// global relabel schedule as the parallel solver so that work statistics
/// are comparable.
///
/// Construction allocates all state; run() is the part worth timing.
class FifoPushRelabel {
 public:
  explicit FifoPushRelabel(FlowNetwork net, GlobalRelabelSchedule schedule = {});

  void run();

  const FlowNetwork& network() const { return net_; }
  const SolverStats& stats() const { return stats_; }
  Capacity value() const { return excess_[net_.sink()]; }

  /// Moves the mutated network and labels out. Call after run().
  PreflowResult release();

 private:
  void global_relabel();
  void discharge(VertexId v);

  FlowNetwork net_;
  GlobalRelabelSchedule schedule_;
  std::vector<Label> label_;
  std::vector<Capacity> excess_;
  std::vector<ArcId> current_;
  std::vector<VertexId> queue_;
  std::vector<std::uint8_t> queued_;
  std::size_t queue_head_ = 0;
  std::int64_t work_since_gr_ = 0;
  SolverStats stats_;
};

PreflowResult solve_fifo_seq(FlowNetwork net, GlobalRelabelSchedule schedule = {});

/// Edmonds-Karp (shortest augmenting paths by BFS). Returns an exact maximum
/// flow with conservation at every interior vertex.
FlowAssignment solve_edmonds_karp(FlowNetwork net);

/// Turns a maximum preflow held in `net` into a maximum flow in place, with
/// the same sink inflow. Excess is returned to s by walking backward along
/// arcs that carry flow into the current vertex; flow cycles met on the way
/// are cancelled. Throws std::logic_error if an excess vertex has no
/// incoming flow (corrupted preflow).
void decompose_preflow(FlowNetwork& net);

FlowAssignment preflow_to_flow(PreflowResult pre);

enum class CutMode {
  /// S = vertices reachable from s in the residual graph. Needs a full flow.
  kFromSource,
  /// T = vertices that reach t in the residual graph. Valid for preflows.
  kFromSink,
};

/// Minimum cut read off a maximum flow or preflow. Throws std::invalid_argument
/// if t is residually reachable from s, which means the input is not maximum.
CutResult min_cut(const FlowNetwork& net, CutMode mode);

}  // namespace parflow
