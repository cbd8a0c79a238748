#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "parflow/flow_network.hpp"

namespace parflow {

/// Work accounting that decides when to run a global relabel.
///
/// A relabel pass over vertex v costs out_degree(v) + work_beta. A global
/// relabel fires once work * freq >= gr_alpha * n + gr_beta * m, where m is
/// the number of input edges. freq is kept as an exact fraction.
struct GlobalRelabelSchedule {
  std::int64_t freq_num = 1;
  std::int64_t freq_den = 2;
  std::int64_t gr_alpha = 12;
  std::int64_t gr_beta = 2;
  std::int64_t work_beta = 12;

  std::int64_t threshold(std::int64_t n, std::int64_t m) const { return gr_alpha * n + gr_beta * m; }

  /// Smallest work value for which the trigger fires. Solvers start their
  /// counter here so the first check runs a global relabel.
  std::int64_t initial_work(std::int64_t n, std::int64_t m) const {
    return (threshold(n, m) * freq_den + freq_num - 1) / freq_num;
  }

  std::int64_t relabel_cost(std::int64_t out_degree) const { return out_degree + work_beta; }

  bool valid() const {
    return freq_num > 0 && freq_den > 0 && gr_alpha >= 0 && gr_beta >= 0 && work_beta >= 0;
  }
};

/// True iff work * freq >= gr_alpha * n + gr_beta * m (inclusive).
bool gr_should_trigger(std::int64_t work_since_last_gr, std::int64_t n, std::int64_t m,
                       const GlobalRelabelSchedule& schedule);

/// Sets labels to exact residual distances to t by a reverse BFS from t.
/// Unreachable vertices and s get n.
void global_relabel_sequential(const FlowNetwork& net, std::span<Label> labels);

/// Level-synchronous parallel reverse BFS from t. Each level's frontier is
/// scanned in parallel; a vertex is claimed by a compare-and-swap of its label
/// from n, and the per-vertex discovery segments of a level are concatenated
/// with a prefix sum into the next frontier. Produces exactly the labels of
/// global_relabel_sequential.
class ParallelGlobalRelabel {
 public:
  explicit ParallelGlobalRelabel(const FlowNetwork& net);

  /// Requires exclusive access to `labels` and to the residual capacities.
  void run(const FlowNetwork& net, std::span<Label> labels, int threads,
           std::int64_t min_parallel = 256);

 private:
  std::vector<VertexId> frontier_;
  std::vector<VertexId> next_;
  std::vector<VertexId> buffer_;
  std::vector<std::int64_t> start_;
  std::vector<std::int64_t> length_;
  std::vector<std::int64_t> offsets_;
};

/// Convenience wrapper that allocates scratch for a single run.
void global_relabel_parallel(const FlowNetwork& net, std::span<Label> labels, int threads);

}  // namespace parflow
