#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "pcmmap/circuit.hpp"
#include "pcmmap/solver.hpp"

namespace pcmmap {

/// Syntax or validation failure in a circuit or instance file.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : std::runtime_error("line " + std::to_string(line) + ": " + reason), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Circuit text format, one node per line, ids dense and topologically ordered:
//   pc <num_vars>
//   l <id> <var> <value>
//   p <id> <k> <child_0> ... <child_{k-1}>
//   s <id> <k> <child_0> <w_0> ... <child_{k-1}> <w_{k-1}>
//   r <id>
// '#' starts a comment.
Circuit parse_circuit(std::istream& in);
Circuit read_circuit(const std::filesystem::path& path);
void write_circuit(std::ostream& out, const Circuit& circuit);
void save_circuit(const std::filesystem::path& path, const Circuit& circuit);

// Instance format: `q <var> ...` and `e <var>=<0|1> ...` lines, '#' comments.
// Indexes are validated against `num_vars`.
MmapInstance parse_instance(std::istream& in, std::size_t num_vars);
MmapInstance read_instance(const std::filesystem::path& path, std::size_t num_vars);
void write_instance(std::ostream& out, const MmapInstance& instance);

}  // namespace pcmmap
