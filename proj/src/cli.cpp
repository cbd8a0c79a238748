#include "parflow/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "parflow/bench.hpp"
#include "parflow/dimacs.hpp"
#include "parflow/generators.hpp"
#include "parflow/sequential.hpp"

namespace parflow {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int parse_positive(const std::string& text, const std::string& what) {
  int value = 0;
  std::size_t used = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::logic_error&) {
    throw UsageError(what + " must be a positive integer, got '" + text + "'");
  }
  if (used != text.size() || value < 1) {
    throw UsageError(what + " must be a positive integer, got '" + text + "'");
  }
  return value;
}

// Flag beats PARFLOW_THREADS beats the hardware.
int resolve_threads(const std::string& flag) {
  if (!flag.empty()) return parse_positive(flag, "--threads");
  if (const char* env = std::getenv("PARFLOW_THREADS"); env != nullptr && *env != '\0') {
    return parse_positive(env, "PARFLOW_THREADS");
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

Algorithm algorithm_or_usage(const std::string& name) {
  try {
    return parse_algorithm(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

void print_stats(const RunResult& r, std::ostream& out) {
  out << "preflow_ms " << r.preflow_ms << '\n'
      << "decompose_ms " << r.decompose_ms << '\n'
      << "iterations " << r.stats.iterations << '\n'
      << "pushes " << r.stats.pushes << '\n'
      << "relabels " << r.stats.relabels << '\n'
      << "global_relabels " << r.stats.global_relabels << '\n'
      << "total_work " << r.stats.total_work << '\n';
}

struct SolveArgs {
  std::string input;
  std::string algo = "prsn";
  std::string threads;
  std::string output;
  bool decompose = false;
};

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const Algorithm algo = algorithm_or_usage(a.algo);
  const int threads = resolve_threads(a.threads);
  const ProblemInstance inst = read_dimacs_file(a.input);
  const bool decompose = a.decompose || !a.output.empty();
  const RunResult r = run_algorithm(inst.network, algo, threads, decompose);
  out << "value " << r.value << '\n'
      << "algorithm " << to_string(algo) << '\n'
      << "threads " << threads << '\n';
  print_stats(r, out);
  if (!a.output.empty()) {
    std::ofstream file(a.output);
    if (!file) throw std::runtime_error("cannot open '" + a.output + "' for writing");
    write_flow_result(inst.network, *r.flow, file);
    if (!file.flush()) throw std::runtime_error("write to '" + a.output + "' failed");
  }
  return kExitOk;
}

int cmd_verify(const std::string& input, const std::string& flow_path, std::ostream& out) {
  const ProblemInstance inst = read_dimacs_file(input);
  std::ifstream file(flow_path);
  if (!file) throw std::runtime_error("cannot open '" + flow_path + "'");
  const FlowFile parsed = parse_flow_file(file);
  const FlowAssignment flow = match_flow_file(inst.network, parsed);

  const ValidationReport report = validate(inst.network, flow, false);
  if (!report.ok()) {
    out << report.to_string() << "INVALID\n";
    return kExitFailure;
  }

  FlowNetwork residual = inst.network;
  for (ArcId a = 0; a < residual.arc_count(); ++a) {
    if (residual.is_forward(a) && flow.flow[a] > 0) residual.push(a, flow.flow[a]);
  }
  CutResult cut;
  try {
    cut = min_cut(residual, CutMode::kFromSource);
  } catch (const std::invalid_argument&) {
    out << "not maximum: the sink is reachable in the residual network\nINVALID\n";
    return kExitFailure;
  }
  out << "cut capacity " << cut.capacity << '\n';
  if (cut.capacity != flow.value) {
    out << "value " << flow.value << " differs from cut capacity " << cut.capacity
        << "\nINVALID\n";
    return kExitFailure;
  }
  out << "OK value " << flow.value << '\n';
  return kExitOk;
}

struct GenArgs {
  std::string family;
  std::int64_t a = 0, b = 0, n = 0, m = 0, rows = 0, cols = 0;
  Capacity max_cap = 0;
  std::uint64_t seed = 1;
  std::string output;
};

int cmd_gen(const GenArgs& g, std::ostream& out) {
  GeneratorSpec spec;
  try {
    spec.family = parse_family(g.family);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  spec.seed = g.seed;
  switch (spec.family) {
    case GeneratorFamily::kGridRmf:
      spec.dims = {g.a, g.b};
      spec.max_cap = g.max_cap > 0 ? g.max_cap : 100;
      break;
    case GeneratorFamily::kRandomSparse:
      spec.dims = {g.n, g.m};
      spec.max_cap = g.max_cap > 0 ? g.max_cap : 100;
      break;
    case GeneratorFamily::kUnitCapMesh:
      spec.dims = {g.rows, g.cols};
      spec.max_cap = g.max_cap > 0 ? g.max_cap : 1;
      break;
  }
  try {
    check_spec(spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const ProblemInstance inst = gen_instance(spec);
  write_dimacs_file(inst, g.output);
  Capacity max_cap = 0;
  for (const EdgeSpec& e : inst.network.edges()) max_cap = std::max(max_cap, e.cap);
  out << "n " << inst.network.vertex_count() << '\n'
      << "m " << inst.network.edge_count() << '\n'
      << "max_cap " << max_cap << '\n';
  return kExitOk;
}

struct BenchArgs {
  std::vector<std::string> inputs;
  std::vector<std::string> algos{"prsn", "fifo-seq"};
  std::vector<std::string> threads;
  int reps = 5;
  std::string csv;
};

int cmd_bench(const BenchArgs& b, std::ostream& out, std::ostream& err) {
  std::vector<Algorithm> algos;
  for (const auto& name : b.algos) algos.push_back(algorithm_or_usage(name));
  std::vector<int> threads;
  if (b.threads.empty()) {
    threads.push_back(resolve_threads(""));
  } else {
    for (const auto& t : b.threads) threads.push_back(parse_positive(t, "--threads"));
  }
  if (b.reps < 1) throw UsageError("--reps must be >= 1");

  std::vector<ProblemInstance> instances;
  for (const auto& path : b.inputs) {
    ProblemInstance inst = read_dimacs_file(path);
    inst.name = path;
    instances.push_back(std::move(inst));
  }
  std::vector<BenchRecord> records;
  try {
    records = run_bench(instances, algos, threads, b.reps);
  } catch (const BenchCorrectnessError& e) {
    err << "correctness failure: " << e.what() << '\n';
    return kExitFailure;
  }
  if (b.csv.empty()) {
    write_bench_csv(records, out);
  } else {
    std::ofstream file(b.csv);
    if (!file) throw std::runtime_error("cannot open '" + b.csv + "' for writing");
    write_bench_csv(records, file);
  }
  out << '\n';
  write_speedup_summary(speedup_summary(records), out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maximum flow solvers and benchmark harness", "parflow"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Compute a maximum flow of a DIMACS instance");
  solve_cmd->add_option("input", solve.input, "DIMACS .max file")->required();
  solve_cmd->add_option("--algo", solve.algo, "prsn | simple-sync | fifo-seq | ek");
  solve_cmd->add_option("--threads", solve.threads, "Worker threads (default: PARFLOW_THREADS or all cores)");
  solve_cmd->add_option("-o,--output", solve.output, "Write the flow to this .flow file (implies --decompose)");
  solve_cmd->add_flag("--decompose", solve.decompose, "Turn the maximum preflow into a flow");

  std::string verify_input, verify_flow;
  auto* verify_cmd = app.add_subcommand("verify", "Check a .flow file against an instance");
  verify_cmd->add_option("input", verify_input, "DIMACS .max file")->required();
  verify_cmd->add_option("flow", verify_flow, ".flow file")->required();

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write a seeded synthetic instance");
  gen_cmd->add_option("family", gen.family, "grid-rmf | random-sparse | unit-cap-mesh")->required();
  gen_cmd->add_option("--a", gen.a, "grid-rmf layer side");
  gen_cmd->add_option("--b", gen.b, "grid-rmf layer count");
  gen_cmd->add_option("--n", gen.n, "random-sparse vertex count");
  gen_cmd->add_option("--m", gen.m, "random-sparse arc count");
  gen_cmd->add_option("--rows", gen.rows, "unit-cap-mesh rows");
  gen_cmd->add_option("--cols", gen.cols, "unit-cap-mesh columns");
  gen_cmd->add_option("--max-cap", gen.max_cap, "Largest capacity");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("-o,--output", gen.output, "Output .max file")->required();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time solvers over instances");
  bench_cmd->add_option("inputs", bench.inputs, "DIMACS .max files")->required();
  bench_cmd->add_option("--algo", bench.algos, "Algorithms to run")->delimiter(',');
  bench_cmd->add_option("--threads", bench.threads, "Thread counts")->delimiter(',');
  bench_cmd->add_option("--reps", bench.reps, "Repetitions per combination");
  bench_cmd->add_option("--csv", bench.csv, "Write records here instead of stdout");

  std::vector<std::string> argv_storage{"parflow"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve, out);
    if (*verify_cmd) return cmd_verify(verify_input, verify_flow, out);
    if (*gen_cmd) return cmd_gen(gen, out);
    if (*bench_cmd) return cmd_bench(bench, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DimacsError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace parflow
