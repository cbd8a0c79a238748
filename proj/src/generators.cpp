#include "parflow/generators.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace parflow {
namespace {

constexpr std::int64_t kMaxVertices = std::int64_t{1} << 30;

std::int64_t dim(const GeneratorSpec& spec, std::size_t i) { return spec.dims.at(i); }

std::string describe(const GeneratorSpec& spec) {
  std::ostringstream out;
  out << to_string(spec.family);
  for (const auto d : spec.dims) out << ' ' << d;
  out << " seed=" << spec.seed << " max_cap=" << spec.max_cap;
  return out.str();
}

std::vector<EdgeSpec> grid_rmf_edges(std::int64_t a, std::int64_t b, Capacity max_cap,
                                     std::mt19937_64& rng) {
  std::uniform_int_distribution<Capacity> cap(1, max_cap);
  const std::int64_t layer = a * a;
  const Capacity wide = max_cap * layer;
  std::vector<EdgeSpec> edges;
  edges.reserve(static_cast<std::size_t>(b * (4 * a * (a - 1) + layer)));
  std::vector<VertexId> perm(static_cast<std::size_t>(layer));
  for (std::int64_t k = 0; k < b; ++k) {
    const std::int64_t base = k * layer;
    for (std::int64_t r = 0; r < a; ++r) {
      for (std::int64_t c = 0; c < a; ++c) {
        const auto v = static_cast<VertexId>(base + r * a + c);
        if (c + 1 < a) {
          edges.push_back({v, v + 1, cap(rng)});
          edges.push_back({v + 1, v, cap(rng)});
        }
        if (r + 1 < a) {
          const auto below = static_cast<VertexId>(v + a);
          edges.push_back({v, below, cap(rng)});
          edges.push_back({below, v, cap(rng)});
        }
      }
    }
    if (k + 1 < b) {
      std::iota(perm.begin(), perm.end(), static_cast<VertexId>(base + layer));
      std::shuffle(perm.begin(), perm.end(), rng);
      for (std::int64_t i = 0; i < layer; ++i) {
        edges.push_back({static_cast<VertexId>(base + i), perm[i], wide});
      }
    }
  }
  return edges;
}

std::vector<EdgeSpec> random_sparse_edges(std::int64_t n, std::int64_t m, Capacity max_cap,
                                          std::mt19937_64& rng) {
  std::uniform_int_distribution<Capacity> cap(1, max_cap);
  std::uniform_int_distribution<std::int64_t> tail(0, n - 1);
  std::uniform_int_distribution<std::int64_t> offset(1, n - 1);
  std::vector<EdgeSpec> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) {
    const std::int64_t u = tail(rng);
    const std::int64_t v = (u + offset(rng)) % n;
    edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), cap(rng)});
  }
  return edges;
}

std::vector<EdgeSpec> unit_mesh_edges(std::int64_t rows, std::int64_t cols, std::mt19937_64& rng) {
  const auto s = static_cast<VertexId>(rows * cols);
  const auto t = static_cast<VertexId>(rows * cols + 1);
  // 0: forward only, 1: backward only, 2: both directions.
  std::uniform_int_distribution<int> orientation(0, 2);
  std::vector<EdgeSpec> edges;
  const auto link = [&](VertexId u, VertexId v) {
    const int o = orientation(rng);
    if (o != 1) edges.push_back({u, v, 1});
    if (o != 0) edges.push_back({v, u, 1});
  };
  for (std::int64_t r = 0; r < rows; ++r) {
    const auto row = static_cast<VertexId>(r * cols);
    edges.push_back({s, row, 1});
    edges.push_back({static_cast<VertexId>(row + cols - 1), t, 1});
    for (std::int64_t c = 0; c < cols; ++c) {
      const auto v = static_cast<VertexId>(row + c);
      if (c + 1 < cols) link(v, v + 1);
      if (r + 1 < rows) link(v, static_cast<VertexId>(v + cols));
    }
  }
  return edges;
}

}  // namespace

std::string_view to_string(GeneratorFamily family) {
  switch (family) {
    case GeneratorFamily::kGridRmf: return "grid-rmf";
    case GeneratorFamily::kRandomSparse: return "random-sparse";
    case GeneratorFamily::kUnitCapMesh: return "unit-cap-mesh";
  }
  return "unknown";
}

GeneratorFamily parse_family(std::string_view name) {
  if (name == "grid-rmf") return GeneratorFamily::kGridRmf;
  if (name == "random-sparse") return GeneratorFamily::kRandomSparse;
  if (name == "unit-cap-mesh") return GeneratorFamily::kUnitCapMesh;
  throw std::invalid_argument("unknown generator family '" + std::string(name) + "'");
}

void check_spec(const GeneratorSpec& spec) {
  if (spec.dims.size() != 2) {
    throw std::invalid_argument(std::string(to_string(spec.family)) + " takes two dimensions");
  }
  if (spec.max_cap < 1) throw std::invalid_argument("max_cap must be >= 1");
  const std::int64_t x = spec.dims[0];
  const std::int64_t y = spec.dims[1];
  switch (spec.family) {
    case GeneratorFamily::kGridRmf:
      if (x < 1 || y < 1) throw std::invalid_argument("grid-rmf needs a >= 1 and b >= 1");
      if (x * x * y < 2) throw std::invalid_argument("grid-rmf needs at least two vertices");
      if (x > kMaxVertices || x * x > kMaxVertices / y) {
        throw std::invalid_argument("grid-rmf too large");
      }
      if (spec.max_cap > std::numeric_limits<Capacity>::max() / (x * x)) {
        throw std::invalid_argument("grid-rmf capacities overflow");
      }
      break;
    case GeneratorFamily::kRandomSparse:
      if (x < 2 || x > kMaxVertices) throw std::invalid_argument("random-sparse needs n >= 2");
      if (y < 0) throw std::invalid_argument("random-sparse needs m >= 0");
      break;
    case GeneratorFamily::kUnitCapMesh:
      if (x < 1 || y < 1) throw std::invalid_argument("unit-cap-mesh needs rows, cols >= 1");
      if (x > kMaxVertices || x * y > kMaxVertices) {
        throw std::invalid_argument("unit-cap-mesh too large");
      }
      if (spec.max_cap != 1) throw std::invalid_argument("unit-cap-mesh has max_cap 1");
      break;
  }
}

ProblemInstance gen_instance(const GeneratorSpec& spec) {
  check_spec(spec);
  std::mt19937_64 rng(spec.seed);
  ProblemInstance inst;
  inst.name = describe(spec);
  inst.meta = "generated";
  switch (spec.family) {
    case GeneratorFamily::kGridRmf: {
      const std::int64_t a = dim(spec, 0);
      const std::int64_t b = dim(spec, 1);
      const auto n = static_cast<VertexId>(a * a * b);
      const auto edges = grid_rmf_edges(a, b, spec.max_cap, rng);
      inst.network = build_network(n, 0, n - 1, edges);
      break;
    }
    case GeneratorFamily::kRandomSparse: {
      const auto n = static_cast<VertexId>(dim(spec, 0));
      const auto edges = random_sparse_edges(n, dim(spec, 1), spec.max_cap, rng);
      inst.network = build_network(n, 0, n - 1, edges);
      break;
    }
    case GeneratorFamily::kUnitCapMesh: {
      const std::int64_t rows = dim(spec, 0);
      const std::int64_t cols = dim(spec, 1);
      const auto n = static_cast<VertexId>(rows * cols + 2);
      const auto edges = unit_mesh_edges(rows, cols, rng);
      inst.network = build_network(n, n - 2, n - 1, edges);
      break;
    }
  }
  return inst;
}

GeneratorSpec grid_rmf_spec(std::int64_t a, std::int64_t b, Capacity max_cap, std::uint64_t seed) {
  return {GeneratorFamily::kGridRmf, {a, b}, seed, max_cap};
}

GeneratorSpec random_sparse_spec(std::int64_t n, std::int64_t m, Capacity max_cap,
                                 std::uint64_t seed) {
  return {GeneratorFamily::kRandomSparse, {n, m}, seed, max_cap};
}

GeneratorSpec unit_cap_mesh_spec(std::int64_t rows, std::int64_t cols, std::uint64_t seed) {
  return {GeneratorFamily::kUnitCapMesh, {rows, cols}, seed, 1};
}

}  // namespace parflow
