#include "parflow/dimacs.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string_view>
#include <unordered_map>

namespace parflow {
namespace {

/// Splits a line on blanks; at most `max_tokens` tokens are kept and the
/// count of tokens actually present is returned.
std::size_t tokenize(std::string_view line, std::string_view* tokens, std::size_t max_tokens) {
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i == line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (count < max_tokens) tokens[count] = line.substr(i, j - i);
    ++count;
    i = j;
  }
  return count;
}

std::int64_t parse_int(std::string_view token, std::int64_t line, const char* what) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw DimacsError(line, std::string("non-integer ") + what + " '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

DimacsError::DimacsError(std::int64_t line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                  : "end of input: " + message),
      line_(line) {}

ProblemInstance parse_dimacs(std::istream& in, std::string name) {
  std::string line;
  std::int64_t line_no = 0;
  std::int64_t n = -1;
  std::int64_t m = -1;
  std::int64_t s = -1;
  std::int64_t t = -1;
  std::int64_t problem_line = 0;
  std::vector<EdgeSpec> edges;
  std::string_view tok[5];

  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t count = tokenize(line, tok, 5);
    if (count == 0) continue;
    if (tok[0] == "c") continue;
    if (tok[0] == "p") {
      if (n >= 0) throw DimacsError(line_no, "duplicate problem line");
      if (count != 4 || tok[1] != "max") throw DimacsError(line_no, "expected 'p max <n> <m>'");
      n = parse_int(tok[2], line_no, "vertex count");
      m = parse_int(tok[3], line_no, "arc count");
      problem_line = line_no;
      if (n < 2 || n > std::numeric_limits<VertexId>::max() - 1) {
        throw DimacsError(line_no, "vertex count out of range");
      }
      if (m < 0) throw DimacsError(line_no, "negative arc count");
      edges.reserve(static_cast<std::size_t>(m));
    } else if (tok[0] == "n") {
      if (n < 0) throw DimacsError(line_no, "node designator before problem line");
      if (count != 3) throw DimacsError(line_no, "expected 'n <id> s|t'");
      const std::int64_t id = parse_int(tok[1], line_no, "vertex id");
      if (id < 1 || id > n) throw DimacsError(line_no, "vertex id out of range");
      if (tok[2] == "s") {
        if (s >= 0) throw DimacsError(line_no, "duplicate source designator");
        s = id - 1;
      } else if (tok[2] == "t") {
        if (t >= 0) throw DimacsError(line_no, "duplicate sink designator");
        t = id - 1;
      } else {
        throw DimacsError(line_no, "unknown node designator '" + std::string(tok[2]) + "'");
      }
    } else if (tok[0] == "a") {
      if (n < 0) throw DimacsError(line_no, "arc before problem line");
      if (count != 4) throw DimacsError(line_no, "expected 'a <u> <v> <cap>'");
      const std::int64_t u = parse_int(tok[1], line_no, "vertex id");
      const std::int64_t v = parse_int(tok[2], line_no, "vertex id");
      const std::int64_t cap = parse_int(tok[3], line_no, "capacity");
      if (u < 1 || u > n || v < 1 || v > n) throw DimacsError(line_no, "vertex id out of range");
      if (cap < 0) throw DimacsError(line_no, "negative capacity");
      if (static_cast<std::int64_t>(edges.size()) == m) {
        throw DimacsError(line_no, "more arc lines than declared (" + std::to_string(m) + ")");
      }
      edges.push_back({static_cast<VertexId>(u - 1), static_cast<VertexId>(v - 1), cap});
    } else {
      throw DimacsError(line_no, "unknown line type '" + std::string(tok[0]) + "'");
    }
  }
  if (in.bad()) throw DimacsError(0, "read failure");
  if (n < 0) throw DimacsError(0, "missing problem line");
  if (s < 0) throw DimacsError(0, "missing source designator");
  if (t < 0) throw DimacsError(0, "missing sink designator");
  if (s == t) throw DimacsError(0, "source and sink are the same vertex");
  if (static_cast<std::int64_t>(edges.size()) != m) {
    throw DimacsError(problem_line, "declared " + std::to_string(m) + " arcs but found " +
                                   std::to_string(edges.size()));
  }

  ProblemInstance inst;
  inst.network = build_network(static_cast<VertexId>(n), static_cast<VertexId>(s),
                               static_cast<VertexId>(t), edges);
  inst.name = std::move(name);
  inst.meta = "dimacs";
  return inst;
}

ProblemInstance read_dimacs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  auto name = path;
  if (const auto slash = name.find_last_of('/'); slash != std::string::npos) {
    name = name.substr(slash + 1);
  }
  auto inst = parse_dimacs(in, name);
  inst.meta = "file:" + path;
  return inst;
}

void write_dimacs(const ProblemInstance& inst, std::ostream& out) {
  const FlowNetwork& net = inst.network;
  out << "c " << inst.name << '\n';
  if (!inst.meta.empty()) out << "c " << inst.meta << '\n';
  out << "p max " << net.vertex_count() << ' ' << net.edge_count() << '\n';
  out << "n " << net.source() + 1 << " s\n";
  out << "n " << net.sink() + 1 << " t\n";
  for (const EdgeSpec& e : net.edges()) {
    out << "a " << e.from + 1 << ' ' << e.to + 1 << ' ' << e.cap << '\n';
  }
  out.flush();
  if (!out) throw std::runtime_error("write_dimacs: output stream failure");
}

void write_dimacs_file(const ProblemInstance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_dimacs(inst, out);
}

void write_flow_result(const FlowNetwork& net, const FlowAssignment& f, std::ostream& out) {
  out << "s " << f.value << '\n';
  for (VertexId v = 0; v < net.vertex_count(); ++v) {
    for (ArcId a = net.first_out(v); a < net.end_out(v); ++a) {
      if (net.is_forward(a) && f.flow[a] > 0) {
        out << "f " << v + 1 << ' ' << net.head(a) + 1 << ' ' << f.flow[a] << '\n';
      }
    }
  }
  out.flush();
  if (!out) throw std::runtime_error("write_flow_result: output stream failure");
}

FlowFile parse_flow_file(std::istream& in) {
  FlowFile file;
  bool have_value = false;
  std::string line;
  std::int64_t line_no = 0;
  std::string_view tok[5];
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t count = tokenize(line, tok, 5);
    if (count == 0 || tok[0] == "c") continue;
    if (tok[0] == "s") {
      if (have_value) throw DimacsError(line_no, "duplicate value line");
      if (count != 2) throw DimacsError(line_no, "expected 's <value>'");
      file.value = parse_int(tok[1], line_no, "flow value");
      have_value = true;
    } else if (tok[0] == "f") {
      if (count != 4) throw DimacsError(line_no, "expected 'f <u> <v> <flow>'");
      const std::int64_t u = parse_int(tok[1], line_no, "vertex id");
      const std::int64_t v = parse_int(tok[2], line_no, "vertex id");
      const std::int64_t x = parse_int(tok[3], line_no, "flow");
      if (u < 1 || v < 1 || u > std::numeric_limits<VertexId>::max() ||
          v > std::numeric_limits<VertexId>::max()) {
        throw DimacsError(line_no, "vertex id out of range");
      }
      file.arcs.push_back({static_cast<VertexId>(u - 1), static_cast<VertexId>(v - 1), x});
      file.lines.push_back(line_no);
    } else {
      throw DimacsError(line_no, "unknown line type '" + std::string(tok[0]) + "'");
    }
  }
  if (!have_value) throw DimacsError(0, "missing value line");
  return file;
}

FlowAssignment match_flow_file(const FlowNetwork& net, const FlowFile& file) {
  FlowAssignment f;
  f.flow.assign(static_cast<std::size_t>(net.arc_count()), 0);
  f.value = file.value;
  // Next unused arc per (u, v), keyed as u * n + v.
  std::unordered_map<std::int64_t, ArcId> cursor;
  const std::int64_t n = net.vertex_count();
  for (std::size_t i = 0; i < file.arcs.size(); ++i) {
    const EdgeSpec& e = file.arcs[i];
    if (e.from >= n || e.to >= n) throw DimacsError(file.lines[i], "vertex id out of range");
    const std::int64_t key = std::int64_t{e.from} * n + e.to;
    auto [it, inserted] = cursor.try_emplace(key, net.first_out(e.from));
    ArcId a = it->second;
    while (a < net.end_out(e.from) && !(net.is_forward(a) && net.head(a) == e.to)) ++a;
    if (a == net.end_out(e.from)) {
      throw DimacsError(file.lines[i], "no unused arc " + std::to_string(e.from + 1) + " -> " +
                                           std::to_string(e.to + 1));
    }
    f.flow[a] = e.cap;
    f.flow[net.reverse(a)] = -e.cap;
    it->second = a + 1;
  }
  return f;
}

}  // namespace parflow
