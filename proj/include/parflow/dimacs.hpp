#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "parflow/flow_network.hpp"

namespace parflow {

struct ProblemInstance {
  FlowNetwork network;
  std::string name;
  /// Generator parameters or file provenance.
  std::string meta;
};

/// Malformed DIMACS input. line() is 1-based; 0 means end of input.
class DimacsError : public std::runtime_error {
 public:
  DimacsError(std::int64_t line, const std::string& message);

  std::int64_t line() const { return line_; }

 private:
  std::int64_t line_;
};

/// Streaming parser for the DIMACS max-flow format:
///   c <comment>
///   p max <n> <m>
///   n <id> s | n <id> t
///   a <u> <v> <cap>
/// Ids are 1-based in the file and 0-based in the network.
ProblemInstance parse_dimacs(std::istream& in, std::string name = "input");

ProblemInstance read_dimacs_file(const std::string& path);

/// Writes `c <name>`, the problem line, both node designators and one arc
/// line per forward arc, in arc order.
void write_dimacs(const ProblemInstance& inst, std::ostream& out);

void write_dimacs_file(const ProblemInstance& inst, const std::string& path);

/// Writes `s <value>` followed by `f <u> <v> <flow>` for every forward arc
/// with positive flow, 1-based.
void write_flow_result(const FlowNetwork& net, const FlowAssignment& f, std::ostream& out);

/// Flow file contents before they are matched against a network.
struct FlowFile {
  Capacity value = 0;
  std::vector<EdgeSpec> arcs;  // 0-based (u, v, flow)
  std::vector<std::int64_t> lines;
};

FlowFile parse_flow_file(std::istream& in);

/// Assigns each `f u v x` line to the next unused forward arc u -> v in arc
/// order, mirroring write_flow_result. Throws DimacsError if a line has no
/// matching arc.
FlowAssignment match_flow_file(const FlowNetwork& net, const FlowFile& file);

}  // namespace parflow
