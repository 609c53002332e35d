#include "pcmmap/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

namespace pcmmap {

namespace {

std::vector<std::string> tokenize(const std::string& raw) {
  std::string line = raw.substr(0, raw.find('#'));
  std::istringstream ss(line);
  std::vector<std::string> tokens;
  std::string tok;
  while (ss >> tok) tokens.push_back(tok);
  return tokens;
}

std::uint64_t parse_uint(const std::string& tok, std::size_t line, const char* what) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, std::string("expected non-negative integer for ") + what + ", got '" + tok + "'");
  }
  return value;
}

double parse_weight(const std::string& tok, std::size_t line) {
  double value = 0.0;
  std::istringstream ss(tok);
  ss.imbue(std::locale::classic());
  ss >> value;
  if (ss.fail() || !ss.eof()) throw ParseError(line, "malformed weight '" + tok + "'");
  if (!std::isfinite(value)) throw ParseError(line, "non-finite weight");
  if (value <= 0.0) throw ParseError(line, "non-positive weight");
  return value;
}

std::string format_weight(double w) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), w);
  return std::string(buf, ptr);
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

}  // namespace

Circuit parse_circuit(std::istream& in) {
  std::optional<std::size_t> num_vars;
  std::optional<NodeId> root;
  std::vector<Node> nodes;
  std::string raw;
  std::size_t line = 0;

  while (std::getline(in, raw)) {
    ++line;
    const auto tok = tokenize(raw);
    if (tok.empty()) continue;
    if (root) throw ParseError(line, "content after root declaration");
    const std::string& kind = tok[0];

    if (kind == "pc") {
      if (num_vars) throw ParseError(line, "duplicate header");
      if (tok.size() != 2) throw ParseError(line, "header must be 'pc <num_vars>'");
      num_vars = parse_uint(tok[1], line, "num_vars");
      continue;
    }
    if (!num_vars) throw ParseError(line, "missing 'pc <num_vars>' header");

    if (kind == "r") {
      if (tok.size() != 2) throw ParseError(line, "root line must be 'r <id>'");
      const auto id = parse_uint(tok[1], line, "root id");
      if (id >= nodes.size()) throw ParseError(line, "root references undefined node " + tok[1]);
      root = static_cast<NodeId>(id);
      continue;
    }

    if (tok.size() < 2) throw ParseError(line, "missing node id");
    const auto id = parse_uint(tok[1], line, "node id");
    if (id < nodes.size()) throw ParseError(line, "duplicate id " + tok[1]);
    if (id > nodes.size()) throw ParseError(line, "ids must be dense; expected " + std::to_string(nodes.size()));

    Node n;
    if (kind == "l") {
      if (tok.size() != 4) throw ParseError(line, "leaf line must be 'l <id> <var> <value>'");
      const auto var = parse_uint(tok[2], line, "variable");
      if (var >= *num_vars) throw ParseError(line, "variable " + tok[2] + " out of range");
      const auto value = parse_uint(tok[3], line, "value");
      if (value > 1) throw ParseError(line, "leaf value must be 0 or 1");
      n.kind = NodeKind::Leaf;
      n.var = static_cast<Var>(var);
      n.value = value == 1;
    } else if (kind == "p" || kind == "s") {
      if (tok.size() < 3) throw ParseError(line, "missing child count");
      const auto k = parse_uint(tok[2], line, "child count");
      if (k == 0) throw ParseError(line, "inner node needs at least one child");
      const std::size_t per_child = kind == "s" ? 2 : 1;
      if (tok.size() != 3 + per_child * k) {
        throw ParseError(line, "expected " + std::to_string(k) + " children" + (kind == "s" ? " with weights" : ""));
      }
      n.kind = kind == "s" ? NodeKind::Sum : NodeKind::Product;
      for (std::size_t i = 0; i < k; ++i) {
        const std::string& ctok = tok[3 + per_child * i];
        const auto child = parse_uint(ctok, line, "child id");
        if (child >= id) throw ParseError(line, "forward reference to node " + ctok);
        n.children.push_back(static_cast<NodeId>(child));
        if (kind == "s") n.weights.push_back(parse_weight(tok[4 + per_child * i], line));
      }
    } else {
      throw ParseError(line, "unknown record type '" + kind + "'");
    }
    nodes.push_back(std::move(n));
  }
  if (!num_vars) throw ParseError(line, "missing 'pc <num_vars>' header");
  if (!root) throw ParseError(line, "missing root line");
  try {
    return Circuit(*num_vars, std::move(nodes), *root);
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, e.what());
  }
}

Circuit read_circuit(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_circuit(in);
}

void write_circuit(std::ostream& out, const Circuit& circuit) {
  out << "pc " << circuit.num_vars() << '\n';
  for (NodeId id = 0; id < circuit.size(); ++id) {
    const Node& n = circuit.node(id);
    switch (n.kind) {
      case NodeKind::Leaf:
        out << "l " << id << ' ' << n.var << ' ' << (n.value ? 1 : 0) << '\n';
        break;
      case NodeKind::Product:
        out << "p " << id << ' ' << n.children.size();
        for (NodeId c : n.children) out << ' ' << c;
        out << '\n';
        break;
      case NodeKind::Sum:
        out << "s " << id << ' ' << n.children.size();
        for (std::size_t k = 0; k < n.children.size(); ++k) out << ' ' << n.children[k] << ' ' << format_weight(n.weights[k]);
        out << '\n';
        break;
    }
  }
  out << "r " << circuit.root() << '\n';
}

void save_circuit(const std::filesystem::path& path, const Circuit& circuit) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_circuit(out, circuit);
}

MmapInstance parse_instance(std::istream& in, std::size_t num_vars) {
  MmapInstance inst;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto tok = tokenize(raw);
    if (tok.empty()) continue;
    if (tok[0] == "q") {
      for (std::size_t i = 1; i < tok.size(); ++i) {
        const auto v = parse_uint(tok[i], line, "query variable");
        if (v >= num_vars) throw ParseError(line, "query variable " + tok[i] + " out of range");
        inst.query.push_back(static_cast<Var>(v));
      }
    } else if (tok[0] == "e") {
      for (std::size_t i = 1; i < tok.size(); ++i) {
        const auto eq = tok[i].find('=');
        if (eq == std::string::npos) throw ParseError(line, "evidence must be '<var>=<0|1>', got '" + tok[i] + "'");
        const auto v = parse_uint(tok[i].substr(0, eq), line, "evidence variable");
        const auto value = parse_uint(tok[i].substr(eq + 1), line, "evidence value");
        if (v >= num_vars) throw ParseError(line, "evidence variable " + std::to_string(v) + " out of range");
        if (value > 1) throw ParseError(line, "evidence value must be 0 or 1");
        inst.evidence.push_back({static_cast<Var>(v), value == 1});
      }
    } else {
      throw ParseError(line, "unknown record type '" + tok[0] + "'");
    }
  }
  std::sort(inst.query.begin(), inst.query.end());
  if (std::adjacent_find(inst.query.begin(), inst.query.end()) != inst.query.end()) {
    throw ParseError(line, "duplicate query variable");
  }
  try {
    inst.validate(num_vars);
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, e.what());
  }
  return inst;
}

MmapInstance read_instance(const std::filesystem::path& path, std::size_t num_vars) {
  auto in = open(path);
  return parse_instance(in, num_vars);
}

void write_instance(std::ostream& out, const MmapInstance& instance) {
  out << 'q';
  for (Var v : instance.query) out << ' ' << v;
  out << '\n';
  if (!instance.evidence.empty()) {
    out << 'e';
    for (const Literal& lit : instance.evidence) out << ' ' << lit.var << '=' << (lit.value ? 1 : 0);
    out << '\n';
  }
}

}  // namespace pcmmap
