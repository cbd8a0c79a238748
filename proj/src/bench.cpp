#include "parflow/bench.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "parflow/prsn.hpp"
#include "parflow/sequential.hpp"

namespace parflow {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

template <typename Solver>
RunResult run_push_relabel(Solver& solver, bool decompose) {
  RunResult out;
  const auto start = Clock::now();
  solver.run();
  out.preflow_ms = elapsed_ms(start);
  PreflowResult pre = solver.release();
  out.value = pre.value;
  out.stats = pre.stats;
  out.network = std::move(pre.network);
  if (decompose) {
    const auto d0 = Clock::now();
    decompose_preflow(out.network);
    out.decompose_ms = elapsed_ms(d0);
    out.flow = extract_flow(out.network);
  }
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string_view to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::kPrsn: return "prsn";
    case Algorithm::kSimpleSync: return "simple-sync";
    case Algorithm::kFifoSeq: return "fifo-seq";
    case Algorithm::kEdmondsKarp: return "ek";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "prsn") return Algorithm::kPrsn;
  if (name == "simple-sync") return Algorithm::kSimpleSync;
  if (name == "fifo-seq") return Algorithm::kFifoSeq;
  if (name == "ek") return Algorithm::kEdmondsKarp;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) +
                              "' (expected prsn, simple-sync, fifo-seq or ek)");
}

RunResult run_algorithm(const FlowNetwork& net, Algorithm algo, int threads, bool decompose) {
  if (threads < 1) throw std::invalid_argument("thread count must be >= 1");
  switch (algo) {
    case Algorithm::kPrsn:
    case Algorithm::kSimpleSync: {
      PrsnConfig config;
      config.threads = threads;
      config.variant = algo == Algorithm::kPrsn ? PrsnVariant::kPrsn : PrsnVariant::kSimpleSync;
      PrsnSolver solver(net, config);
      return run_push_relabel(solver, decompose);
    }
    case Algorithm::kFifoSeq: {
      FifoPushRelabel solver(net);
      return run_push_relabel(solver, decompose);
    }
    case Algorithm::kEdmondsKarp: {
      FlowNetwork copy = net;
      RunResult out;
      const auto start = Clock::now();
      FlowAssignment flow = solve_edmonds_karp(std::move(copy));
      out.preflow_ms = elapsed_ms(start);
      out.value = flow.value;
      out.network = net;
      for (ArcId a = 0; a < net.arc_count(); ++a) {
        if (net.is_forward(a) && flow.flow[a] > 0) out.network.push(a, flow.flow[a]);
      }
      if (decompose) out.flow = std::move(flow);
      return out;
    }
  }
  throw std::invalid_argument("unknown algorithm");
}

std::vector<BenchRecord> run_bench(const std::vector<ProblemInstance>& instances,
                                   const std::vector<Algorithm>& algorithms,
                                   const std::vector<int>& threads, int reps,
                                   const Runner& runner) {
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  std::vector<BenchRecord> records;
  for (const ProblemInstance& inst : instances) {
    std::optional<Capacity> expected;
    std::string first_run;
    for (const Algorithm algo : algorithms) {
      for (const int p : threads) {
        for (int rep = 0; rep < reps; ++rep) {
          RunResult r = runner(inst.network, algo, p, algo != Algorithm::kEdmondsKarp);
          const std::string label =
              std::string(to_string(algo)) + " threads=" + std::to_string(p) + " rep=" +
              std::to_string(rep);
          if (!expected) {
            expected = r.value;
            first_run = label;
          } else if (*expected != r.value) {
            throw BenchCorrectnessError("instance '" + inst.name + "': " + label + " found value " +
                                        std::to_string(r.value) + " but " + first_run +
                                        " found " + std::to_string(*expected));
          }
          records.push_back({inst.name, std::string(to_string(algo)), p, rep, r.preflow_ms,
                             r.decompose_ms, r.value, r.stats.pushes, r.stats.relabels,
                             r.stats.global_relabels, r.stats.total_work});
        }
      }
    }
  }
  return records;
}

const char* const kBenchCsvHeader =
    "instance,algorithm,threads,rep,preflow_ms,decompose_ms,value,pushes,relabels,"
    "global_relabels,total_work";

void write_bench_csv(const std::vector<BenchRecord>& records, std::ostream& out) {
  out << kBenchCsvHeader << '\n';
  out << std::setprecision(6) << std::fixed;
  for (const BenchRecord& r : records) {
    out << csv_quote(r.instance) << ',' << r.algorithm << ',' << r.threads << ',' << r.rep << ','
        << r.preflow_ms << ',' << r.decompose_ms << ',' << r.value << ',' << r.pushes << ','
        << r.relabels << ',' << r.global_relabels << ',' << r.total_work << '\n';
  }
  out.flush();
  if (!out) throw std::runtime_error("write_bench_csv: output stream failure");
}

std::vector<BenchRecord> read_bench_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("bench csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kBenchCsvHeader) throw std::runtime_error("bench csv: unexpected header");
  std::vector<BenchRecord> records;
  std::int64_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 11) {
      throw std::runtime_error("bench csv: row " + std::to_string(row) + " has " +
                               std::to_string(f.size()) + " fields");
    }
    try {
      records.push_back({f[0], f[1], std::stoi(f[2]), std::stoi(f[3]), std::stod(f[4]),
                         std::stod(f[5]), std::stoll(f[6]), std::stoll(f[7]), std::stoll(f[8]),
                         std::stoll(f[9]), std::stoll(f[10])});
    } catch (const std::logic_error&) {
      throw std::runtime_error("bench csv: bad number in row " + std::to_string(row));
    }
  }
  return records;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<SpeedupRow> speedup_summary(const std::vector<BenchRecord>& records) {
  // instance -> (algorithm, threads) -> times, in first-seen order.
  std::vector<std::string> instance_order;
  std::map<std::string, std::vector<std::pair<std::string, int>>> combo_order;
  std::map<std::string, std::map<std::pair<std::string, int>, std::vector<double>>> times;
  for (const BenchRecord& r : records) {
    if (!times.count(r.instance)) instance_order.push_back(r.instance);
    auto& per = times[r.instance];
    const auto key = std::make_pair(r.algorithm, r.threads);
    if (!per.count(key)) combo_order[r.instance].push_back(key);
    per[key].push_back(r.preflow_ms);
  }

  std::vector<SpeedupRow> rows;
  for (const std::string& inst : instance_order) {
    const auto& per = times[inst];
    int base_threads = std::numeric_limits<int>::max();
    for (const auto& [key, _] : per) base_threads = std::min(base_threads, key.second);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [key, ts] : per) {
      if (key.second == base_threads) best = std::min(best, median(ts));
    }
    for (const auto& key : combo_order[inst]) {
      const double med = median(per.at(key));
      const double speedup = med > 0 ? best / med : (best > 0 ? 0.0 : 1.0);
      rows.push_back({inst, key.first, key.second, med, speedup});
    }
  }
  return rows;
}

void write_speedup_summary(const std::vector<SpeedupRow>& rows, std::ostream& out) {
  out << "instance,algorithm,threads,median_ms,speedup\n";
  out << std::setprecision(3) << std::fixed;
  for (const SpeedupRow& r : rows) {
    out << csv_quote(r.instance) << ',' << r.algorithm << ',' << r.threads << ',' << r.median_ms
        << ',' << r.speedup << '\n';
  }
}

}  // namespace parflow
