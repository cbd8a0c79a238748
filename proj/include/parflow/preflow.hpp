#pragma once

#include <cstdint>
#include <vector>

#include "parflow/flow_network.hpp"

namespace parflow {

struct SolverStats {
  std::int64_t iterations = 0;
  std::int64_t pushes = 0;
  std::int64_t relabels = 0;
  std::int64_t global_relabels = 0;
  std::int64_t total_work = 0;
};

/// Outcome of a push-relabel run: the mutated network holds a maximum
/// preflow. Vertices other than s and t may keep positive excess, but only
/// with label n.
struct PreflowResult {
  FlowNetwork network;
  std::vector<Label> labels;
  std::vector<Capacity> excess;
  Capacity value = 0;
  SolverStats stats;
};

}  // namespace parflow
