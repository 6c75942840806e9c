#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mvtk/netlist.hpp"
#include "mvtk/voters.hpp"

namespace mvtk {

enum class FaultModel : std::uint8_t { Stuck0, Stuck1, Flip };

std::string_view to_string(FaultModel model);

struct NetFault {
  NetId net = kNoNet;
  FaultModel model = FaultModel::Flip;
};

/// Zero-delay evaluation with faults applied as net values are produced
/// (primary inputs included). Every fanout branch of a faulted net sees the
/// faulty value. Flip inverts the value the net would have carried.
std::vector<Bit> evaluate_with_faults(const Netlist& netlist, std::span<const Bit> inputs,
                                      std::span<const NetFault> faults);

/// A function module triplicated behind a voter. Each copy keeps its own
/// primary inputs: composed inputs are copy 1's, then copy 2's, then
/// copy 3's, so a module input vector v is applied as (v, v, v).
struct TmrSystem {
  Netlist module;
  Netlist voter;
  Netlist composed;
  std::array<NetId, 3> copy_outputs{};  // nets feeding voter inputs X, Y, Z
  unsigned module_inputs = 0;
};

/// Triplicates `module` and wires the copies into a 3-input voter.
/// Throws std::invalid_argument if either netlist is invalid or the voter
/// does not have exactly 3 inputs.
TmrSystem compose_tmr(const Netlist& module, const Netlist& voter);

struct SiteTally {
  std::string site;
  std::size_t cases = 0;
  std::size_t propagated = 0;

  bool operator==(const SiteTally&) const = default;
};

struct MaskingReport {
  std::size_t total_cases = 0;
  std::size_t masked = 0;
  std::size_t propagated = 0;
  double sensitivity = 0;  // propagated / total_cases
  std::vector<SiteTally> per_site;

  bool operator==(const MaskingReport&) const = default;
};

struct SamplingSpec {
  std::size_t vectors = 1024;
  std::uint64_t seed = 1;
};

struct MaskingOptions {
  unsigned max_exhaustive_inputs = 16;
  std::optional<SamplingSpec> sampling;  // fallback for wide modules
};

/// Single-module fault campaign: every module input vector x every copy
/// index x every model in {stuck0, stuck1, flip}, compared against the
/// fault-free output. Exhaustive up to max_exhaustive_inputs module inputs;
/// beyond that a sampling spec is required (std::domain_error otherwise).
MaskingReport module_fault_masking(const TmrSystem& system, const MaskingOptions& options = {});

/// SET sensitivity of a 3-input voter: every instance output net is flipped
/// for every one of the 8 input vectors; a case propagates iff the voter
/// output changes. Value-override injection.
MaskingReport voter_set_sensitivity(const Netlist& voter);

/// Same campaign through an independent mechanism: for each site the voter
/// is rebuilt with the driven net replaced by its complement (an inverter
/// spliced after the driver) and re-evaluated. Must agree with
/// voter_set_sensitivity case for case.
MaskingReport voter_set_sensitivity_by_mutation(const Netlist& voter);

struct CampaignRow {
  VoterId id{};
  std::size_t nets = 0;
  std::size_t cases = 0;
  std::size_t propagated = 0;
  double sensitivity = 0;
  double area_proxy = 0;
  double delay_proxy = 0;
  double power_proxy = 0;  // for the FOM-vs-sensitivity tradeoff view
  double fom_proxy = 0;
};

struct CampaignOptions {
  std::size_t vectors = 1024;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

/// Comparative SET/proxy report over a set of voters. Rows are deduplicated
/// and ordered by VoterId; output does not depend on the thread count.
std::vector<CampaignRow> campaign(std::span<const VoterId> ids, const CellTable& table,
                                  const CampaignOptions& options = {});

}  // namespace mvtk
