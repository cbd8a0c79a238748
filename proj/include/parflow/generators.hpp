#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "parflow/dimacs.hpp"

namespace parflow {

enum class GeneratorFamily {
  /// a x a x b layered box; s in the first layer, t in the last.
  kGridRmf,
  /// n vertices, m arcs drawn uniformly without self-loops.
  kRandomSparse,
  /// rows x cols mesh with unit capacities between a super source and sink.
  kUnitCapMesh,
};

std::string_view to_string(GeneratorFamily family);
/// Throws std::invalid_argument on an unknown name.
GeneratorFamily parse_family(std::string_view name);

/// Family parameters, interpreted per family:
///   grid-rmf:      dims = {a, b}
///   random-sparse: dims = {n, m}
///   unit-cap-mesh: dims = {rows, cols}
struct GeneratorSpec {
  GeneratorFamily family = GeneratorFamily::kRandomSparse;
  std::vector<std::int64_t> dims;
  std::uint64_t seed = 1;
  Capacity max_cap = 1;
};

/// Throws std::invalid_argument when a dimension or max_cap is out of range.
void check_spec(const GeneratorSpec& spec);

/// Pure function of `spec`: equal specs give structurally equal networks with
/// identical arc order.
ProblemInstance gen_instance(const GeneratorSpec& spec);

GeneratorSpec grid_rmf_spec(std::int64_t a, std::int64_t b, Capacity max_cap, std::uint64_t seed);
GeneratorSpec random_sparse_spec(std::int64_t n, std::int64_t m, Capacity max_cap, std::uint64_t seed);
GeneratorSpec unit_cap_mesh_spec(std::int64_t rows, std::int64_t cols, std::uint64_t seed);

}  // namespace parflow
