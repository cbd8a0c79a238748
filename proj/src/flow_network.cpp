#include "parflow/flow_network.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace parflow {

void FlowNetwork::push(ArcId a, Capacity delta) {
  if (a < 0 || a >= arc_count()) {
    throw std::invalid_argument("push: arc " + std::to_string(a) + " out of range");
  }
  if (delta <= 0 || delta > residual_[a]) {
    throw std::invalid_argument("push: delta " + std::to_string(delta) + " not in (0, " +
                                std::to_string(residual_[a]) + "] on arc " + std::to_string(a));
  }
  push_unchecked(a, delta);
}

std::vector<EdgeSpec> FlowNetwork::edges() const {
  std::vector<EdgeSpec> out;
  out.reserve(static_cast<std::size_t>(edge_count()));
  for (VertexId v = 0; v < vertex_count(); ++v) {
    for (ArcId a = first_out(v); a < end_out(v); ++a) {
      if (is_forward(a)) out.push_back({v, head_[a], original_[a]});
    }
  }
  return out;
}

std::string FlowNetwork::check_invariants() const {
  const VertexId n = vertex_count();
  std::ostringstream err;
  if (n < 2 || source_ == sink_ || source_ < 0 || source_ >= n || sink_ < 0 || sink_ >= n) {
    err << "bad terminals s=" << source_ << " t=" << sink_ << " n=" << n << "; ";
  }
  for (VertexId v = 0; v < n && err.tellp() == 0; ++v) {
    for (ArcId a = first_out(v); a < end_out(v); ++a) {
      const ArcId r = reverse_[a];
      if (r < 0 || r >= arc_count() || reverse_[r] != a) {
        err << "arc " << a << ": reverse pairing broken; ";
        break;
      }
      if (head_[r] != v) err << "arc " << a << ": head of reverse is not owner; ";
      if (residual_[a] < 0) err << "arc " << a << ": negative residual; ";
      if (residual_[a] + residual_[r] != original_[a] + original_[r]) {
        err << "arc " << a << ": pair sum changed; ";
      }
    }
  }
  return err.str();
}

FlowNetwork build_network(VertexId n, VertexId s, VertexId t, std::span<const EdgeSpec> edges) {
  if (n < 2) throw std::invalid_argument("network needs at least two vertices");
  if (s < 0 || s >= n) throw std::invalid_argument("source id out of range");
  if (t < 0 || t >= n) throw std::invalid_argument("sink id out of range");
  if (s == t) throw std::invalid_argument("source and sink must differ");

  std::vector<ArcId> degree(static_cast<std::size_t>(n) + 1, 0);
  for (const EdgeSpec& e : edges) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n) {
      throw std::invalid_argument("edge endpoint out of range: (" + std::to_string(e.from) + ", " +
                                  std::to_string(e.to) + ")");
    }
    if (e.cap < 0) throw std::invalid_argument("negative capacity on edge");
    if (e.cap == 0) continue;
    ++degree[e.from + 1];
    ++degree[e.to + 1];
  }

  FlowNetwork net;
  net.source_ = s;
  net.sink_ = t;
  net.first_out_.assign(degree.begin(), degree.end());
  for (VertexId v = 0; v < n; ++v) net.first_out_[v + 1] += net.first_out_[v];

  const ArcId arcs = net.first_out_[n];
  net.head_.resize(arcs);
  net.reverse_.resize(arcs);
  net.original_.assign(arcs, 0);

  std::vector<ArcId> next(net.first_out_.begin(), net.first_out_.end() - 1);
  for (const EdgeSpec& e : edges) {
    if (e.cap == 0) continue;
    const ArcId fwd = next[e.from]++;
    const ArcId bwd = next[e.to]++;
    net.head_[fwd] = e.to;
    net.head_[bwd] = e.from;
    net.reverse_[fwd] = bwd;
    net.reverse_[bwd] = fwd;
    net.original_[fwd] = e.cap;
  }
  net.residual_ = net.original_;
  return net;
}

bool structurally_equal(const FlowNetwork& a, const FlowNetwork& b) {
  if (a.vertex_count() != b.vertex_count() || a.source() != b.source() || a.sink() != b.sink() ||
      a.arc_count() != b.arc_count()) {
    return false;
  }
  auto ea = a.edges();
  auto eb = b.edges();
  std::sort(ea.begin(), ea.end());
  std::sort(eb.begin(), eb.end());
  return ea == eb;
}

FlowAssignment extract_flow(const FlowNetwork& net) {
  FlowAssignment f;
  f.flow.resize(static_cast<std::size_t>(net.arc_count()));
  for (ArcId a = 0; a < net.arc_count(); ++a) f.flow[a] = net.original(a) - net.residual(a);
  const VertexId t = net.sink();
  for (ArcId a = net.first_out(t); a < net.end_out(t); ++a) f.value -= f.flow[a];
  return f;
}

std::vector<Capacity> net_inflow(const FlowNetwork& net, std::span<const Capacity> flow) {
  std::vector<Capacity> in(static_cast<std::size_t>(net.vertex_count()), 0);
  for (VertexId v = 0; v < net.vertex_count(); ++v) {
    for (ArcId a = net.first_out(v); a < net.end_out(v); ++a) in[v] -= flow[a];
  }
  return in;
}

Capacity cut_capacity(const FlowNetwork& net, std::span<const std::uint8_t> side) {
  Capacity total = 0;
  for (VertexId v = 0; v < net.vertex_count(); ++v) {
    if (side[v] != 0) continue;
    for (ArcId a = net.first_out(v); a < net.end_out(v); ++a) {
      if (side[net.head(a)] != 0) total += net.original(a);
    }
  }
  return total;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kShapeMismatch: return "shape-mismatch";
    case ViolationKind::kCapacity: return "capacity";
    case ViolationKind::kAntisymmetry: return "antisymmetry";
    case ViolationKind::kConservation: return "conservation";
    case ViolationKind::kNegativeExcess: return "negative-excess";
    case ViolationKind::kValueMismatch: return "value-mismatch";
  }
  return "unknown";
}

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const Violation& v : violations) {
    out << parflow::to_string(v.kind);
    if (v.where >= 0) out << " @" << v.where;
    out << ": " << v.detail << '\n';
  }
  return out.str();
}

ValidationReport validate(const FlowNetwork& net, const FlowAssignment& f, bool allow_excess) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, std::int64_t where, std::string detail) {
    report.violations.push_back({kind, where, std::move(detail)});
  };
  if (static_cast<ArcId>(f.flow.size()) != net.arc_count()) {
    add(ViolationKind::kShapeMismatch, -1,
        "flow has " + std::to_string(f.flow.size()) + " entries, network has " +
            std::to_string(net.arc_count()) + " arcs");
    return report;
  }

  for (ArcId a = 0; a < net.arc_count(); ++a) {
    if (f.flow[a] > net.original(a)) {
      add(ViolationKind::kCapacity, a,
          "flow " + std::to_string(f.flow[a]) + " exceeds capacity " +
              std::to_string(net.original(a)) + " on arc " + std::to_string(net.owner(a) + 1) +
              "->" + std::to_string(net.head(a) + 1));
    }
    if (f.flow[a] != -f.flow[net.reverse(a)]) {
      add(ViolationKind::kAntisymmetry, a,
          "flow " + std::to_string(f.flow[a]) + " vs reverse " +
              std::to_string(f.flow[net.reverse(a)]));
    }
  }

  const auto inflow = net_inflow(net, f.flow);
  for (VertexId v = 0; v < net.vertex_count(); ++v) {
    if (v == net.source() || v == net.sink()) continue;
    if (allow_excess) {
      if (inflow[v] < 0) {
        add(ViolationKind::kNegativeExcess, v,
            "vertex " + std::to_string(v + 1) + " has excess " + std::to_string(inflow[v]));
      }
    } else if (inflow[v] != 0) {
      add(ViolationKind::kConservation, v,
          "vertex " + std::to_string(v + 1) + " has net inflow " + std::to_string(inflow[v]));
    }
  }
  if (inflow[net.sink()] != f.value) {
    add(ViolationKind::kValueMismatch, net.sink(),
        "claimed value " + std::to_string(f.value) + ", sink inflow " +
            std::to_string(inflow[net.sink()]));
  }
  return report;
}

}  // namespace parflow
