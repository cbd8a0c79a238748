#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "parflow/dimacs.hpp"
#include "parflow/preflow.hpp"

namespace parflow {

enum class Algorithm { kPrsn, kSimpleSync, kFifoSeq, kEdmondsKarp };

std::string_view to_string(Algorithm algo);
/// Accepts prsn, simple-sync, fifo-seq, ek. Throws std::invalid_argument.
Algorithm parse_algorithm(std::string_view name);

struct RunResult {
  Capacity value = 0;
  SolverStats stats;
  double preflow_ms = 0;
  double decompose_ms = 0;
  /// Present when a full flow was requested.
  std::optional<FlowAssignment> flow;
  /// Mutated network after the run (max preflow, or max flow if decomposed).
  FlowNetwork network;
};

/// Runs one solver on a private copy of `net`. Only the solve itself is
/// timed; copying the network and allocating solver state happen before the
/// clock starts. With `decompose` the preflow is turned into a flow and that
/// step is timed separately.
RunResult run_algorithm(const FlowNetwork& net, Algorithm algo, int threads, bool decompose);

struct BenchRecord {
  std::string instance;
  std::string algorithm;
  int threads = 1;
  int rep = 0;
  double preflow_ms = 0;
  double decompose_ms = 0;
  Capacity value = 0;
  std::int64_t pushes = 0;
  std::int64_t relabels = 0;
  std::int64_t global_relabels = 0;
  std::int64_t total_work = 0;
};

/// A run disagreed with the others on the flow value of an instance.
class BenchCorrectnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Runner = std::function<RunResult(const FlowNetwork&, Algorithm, int threads, bool decompose)>;

/// Runs every (instance, algorithm, thread count) combination `reps` times,
/// strictly one run at a time. Throws BenchCorrectnessError as soon as a
/// flow value differs from the first value seen for that instance.
std::vector<BenchRecord> run_bench(const std::vector<ProblemInstance>& instances,
                                   const std::vector<Algorithm>& algorithms,
                                   const std::vector<int>& threads, int reps,
                                   const Runner& runner = run_algorithm);

extern const char* const kBenchCsvHeader;

void write_bench_csv(const std::vector<BenchRecord>& records, std::ostream& out);
/// Throws std::runtime_error on a malformed header or row.
std::vector<BenchRecord> read_bench_csv(std::istream& in);

struct SpeedupRow {
  std::string instance;
  std::string algorithm;
  int threads = 1;
  double median_ms = 0;
  /// Best single-threaded median over all algorithms divided by median_ms.
  double speedup = 0;
};

/// Per instance: baseline = the smallest median preflow time among all
/// algorithms at the lowest thread count present (normally 1).
std::vector<SpeedupRow> speedup_summary(const std::vector<BenchRecord>& records);

void write_speedup_summary(const std::vector<SpeedupRow>& rows, std::ostream& out);

double median(std::vector<double> values);

}  // namespace parflow
