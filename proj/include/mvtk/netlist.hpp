#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mvtk/cells.hpp"

namespace mvtk {

using NetId = std::uint32_t;
inline constexpr NetId kNoNet = std::numeric_limits<NetId>::max();

struct Net {
  NetId id = kNoNet;
  std::string name;  // optional label; exporter synthesizes one if empty
};

struct Instance {
  CellKind kind{};
  std::vector<NetId> inputs;
  NetId output = kNoNet;
};

/// An acyclic single-output network of cell instances. Built once via the
/// add_* calls, then treated as immutable; all analysis functions take it
/// by const reference and keep their scratch per call.
class Netlist {
public:
  NetId add_net(std::string name = {});
  NetId add_input(std::string name);

  /// Declares an existing net as a primary input (input order follows the
  /// call order, as with add_input).
  void mark_input(NetId net) { inputs_.push_back(net); }

  /// Creates the output net and appends the instance; returns the new net.
  NetId add_cell(CellKind kind, std::vector<NetId> inputs, std::string output_name = {});

  /// Appends an instance driving an existing net (used by the parser).
  void connect_cell(CellKind kind, std::vector<NetId> inputs, NetId output);

  void set_output(NetId net) { output_ = net; }

  std::size_t net_count() const { return nets_.size(); }
  std::span<const Net> nets() const { return nets_; }
  const std::string& net_name(NetId id) const { return nets_.at(id).name; }
  std::span<const NetId> primary_inputs() const { return inputs_; }
  NetId primary_output() const { return output_; }
  std::span<const Instance> instances() const { return instances_; }
  bool is_primary_input(NetId id) const;

  /// Index of the instance driving `id`, if any (first one, for
  /// not-yet-validated netlists).
  std::optional<std::uint32_t> driver_of(NetId id) const;

private:
  std::vector<Net> nets_;
  std::vector<NetId> inputs_;
  NetId output_ = kNoNet;
  std::vector<Instance> instances_;
};

struct ValidationError {
  enum class Kind {
    BadNetRef,
    ArityMismatch,
    MultiplyDriven,
    InputDriven,
    Undriven,
    Cycle,
    MissingOutput,
    UnreachableOutput,
  };
  Kind kind{};
  std::string message;
};

/// Checks all structural invariants; nullopt means the netlist is valid.
/// Reports the first violation with the offending net/instance identity.
std::optional<ValidationError> validate(const Netlist& netlist);

/// Throws std::invalid_argument with the validation message on failure.
void validate_or_throw(const Netlist& netlist);

/// Instance indices in topological order, ties broken by creation index.
/// nullopt if the instance graph has a cycle.
std::optional<std::vector<std::uint32_t>> topological_order(const Netlist& netlist);

/// Zero-delay evaluation. Returns every net's value indexed by NetId
/// (fault injection needs the internal values, not just the output).
/// Precondition: validate() passes and inputs matches the input count.
std::vector<Bit> evaluate(const Netlist& netlist, std::span<const Bit> inputs);
std::vector<Bit> evaluate(const Netlist& netlist, std::span<const Bit> inputs,
                          std::span<const std::uint32_t> order);

/// Output column for all 2^n input vectors in ascending order; the first
/// primary input is the most significant index bit. Guarded at n <= 20.
std::vector<Bit> truth_table(const Netlist& netlist);

enum class DepthMode {
  UnitLevels,     // every instance counts 1
  WeightedDelay,  // sum of delay_weight along the path
};

/// Longest input-to-output path weight (0 for an instance-free netlist).
double logic_depth(const Netlist& netlist, const CellTable& table, DepthMode mode);

struct ParseError : std::runtime_error {
  ParseError(int line_number, int column_number, const std::string& what);
  int line = 0;
  int column = 0;
};

/// Netlist text format:
///   inputs X Y Z
///   output V
///   w = XOR2(X, Y)
///   V = AO22(w, Z, X, Y)
/// Identifiers are [A-Za-z_][A-Za-z0-9_]*; `#` starts a comment. Exactly one
/// `inputs` and one `output` line are required. Structural problems
/// (undriven nets, arity, cycles) surface as ParseError via validate().
Netlist parse_netlist(std::string_view text);

/// Canonical text form: headers first, then instances in topological order
/// (creation index breaks ties). Deterministic, byte-stable across runs.
std::string export_netlist(const Netlist& netlist);

/// Graph equality up to net ids, with instances matched in canonical
/// topological order. Net names are not compared.
bool structurally_equal(const Netlist& a, const Netlist& b);

}  // namespace mvtk
