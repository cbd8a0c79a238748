#pragma once

#include <cstdint>
#include <span>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace parflow {

using VertexId = std::int32_t;
using ArcId = std::int64_t;
using Capacity = std::int64_t;
using Label = std::int32_t;

/// One input edge (u, v) with capacity `cap`.
struct EdgeSpec {
  VertexId from = 0;
  VertexId to = 0;
  Capacity cap = 0;

  friend bool operator==(const EdgeSpec&, const EdgeSpec&) = default;
  friend auto operator<=>(const EdgeSpec&, const EdgeSpec&) = default;
};

/// Residual network stored as a compressed adjacency array of paired arcs.
///
/// Every input edge with positive capacity contributes a forward arc in the
/// range of its tail (residual = cap) and a reverse arc in the range of its
/// head (residual = 0). Arcs of vertex v occupy [first_out(v), first_out(v+1)).
/// The only mutation after construction is `push`, which keeps
/// residual(a) + residual(reverse(a)) constant for every pair.
class FlowNetwork {
 public:
  FlowNetwork() = default;

  VertexId vertex_count() const { return static_cast<VertexId>(first_out_.size()) - 1; }
  ArcId arc_count() const { return static_cast<ArcId>(head_.size()); }
  /// Number of input edges kept (= arc_count() / 2).
  ArcId edge_count() const { return arc_count() / 2; }
  VertexId source() const { return source_; }
  VertexId sink() const { return sink_; }

  ArcId first_out(VertexId v) const { return first_out_[v]; }
  ArcId end_out(VertexId v) const { return first_out_[v + 1]; }
  ArcId out_degree(VertexId v) const { return first_out_[v + 1] - first_out_[v]; }

  VertexId head(ArcId a) const { return head_[a]; }
  VertexId owner(ArcId a) const { return head_[reverse_[a]]; }
  ArcId reverse(ArcId a) const { return reverse_[a]; }
  Capacity residual(ArcId a) const { return residual_[a]; }
  Capacity original(ArcId a) const { return original_[a]; }
  /// Forward arcs are exactly the arcs with positive original capacity.
  bool is_forward(ArcId a) const { return original_[a] > 0; }

  std::span<const ArcId> first_out_array() const { return first_out_; }
  std::span<const VertexId> heads() const { return head_; }
  std::span<const ArcId> reverses() const { return reverse_; }
  std::span<const Capacity> residuals() const { return residual_; }
  std::span<const Capacity> originals() const { return original_; }

  /// Raw residual storage for solver engines that manage their own
  /// synchronization. Callers must keep the pair-sum invariant.
  std::span<Capacity> mutable_residuals() { return residual_; }

  /// Moves `delta` units along arc `a`. Throws std::invalid_argument unless
  /// 0 < delta <= residual(a).
  void push(ArcId a, Capacity delta);

  /// Same as push() without the range check.
  void push_unchecked(ArcId a, Capacity delta) {
    residual_[a] -= delta;
    residual_[reverse_[a]] += delta;
  }

  /// Restores every residual capacity to its original value.
  void reset_residuals() { residual_ = original_; }

  /// Input edges in forward-arc order.
  std::vector<EdgeSpec> edges() const;

  /// Checks the structural invariants; returns an empty string when they hold.
  std::string check_invariants() const;

  friend bool operator==(const FlowNetwork&, const FlowNetwork&) = default;

 private:
  friend FlowNetwork build_network(VertexId, VertexId, VertexId, std::span<const EdgeSpec>);

  VertexId source_ = 0;
  VertexId sink_ = 0;
  std::vector<ArcId> first_out_{0};
  std::vector<VertexId> head_;
  std::vector<ArcId> reverse_;
  std::vector<Capacity> residual_;
  std::vector<Capacity> original_;
};

/// Builds the residual network. Zero-capacity edges are dropped; parallel and
/// anti-parallel edges each keep their own arc pair. Arcs of one owner keep
/// input order. Throws std::invalid_argument on s == t, out-of-range ids or
/// negative capacities.
FlowNetwork build_network(VertexId n, VertexId s, VertexId t, std::span<const EdgeSpec> edges);

inline FlowNetwork build_network(VertexId n, VertexId s, VertexId t,
                                 std::initializer_list<EdgeSpec> edges) {
  return build_network(n, s, t, std::span<const EdgeSpec>(edges.begin(), edges.size()));
}

/// Same n, s, t and the same multiset of input edges.
bool structurally_equal(const FlowNetwork& a, const FlowNetwork& b);

/// Per-arc flow. flow[a] = -flow[reverse(a)].
struct FlowAssignment {
  std::vector<Capacity> flow;
  Capacity value = 0;
};

/// flow = original - residual on every arc; value is the net inflow of t.
FlowAssignment extract_flow(const FlowNetwork& net);

/// Net inflow at every vertex under `flow`.
std::vector<Capacity> net_inflow(const FlowNetwork& net, std::span<const Capacity> flow);

struct CutResult {
  /// 0 = source side S, 1 = sink side T.
  std::vector<std::uint8_t> side;
  Capacity capacity = 0;

  bool on_source_side(VertexId v) const { return side[v] == 0; }
};

/// Sum of original capacities over arcs leaving S for T.
Capacity cut_capacity(const FlowNetwork& net, std::span<const std::uint8_t> side);

enum class ViolationKind {
  kShapeMismatch,
  kCapacity,
  kAntisymmetry,
  kConservation,
  kNegativeExcess,
  kValueMismatch,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  /// Arc index for arc violations, vertex id for vertex violations, -1 otherwise.
  std::int64_t where = -1;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
  std::string to_string() const;
};

/// Checks capacity, antisymmetry and conservation of `f` on `net`. With
/// allow_excess only negative excess at interior vertices is reported
/// (preflow check). Also reports a mismatch between f.value and the net
/// inflow at t.
ValidationReport validate(const FlowNetwork& net, const FlowAssignment& f, bool allow_excess);

}  // namespace parflow
