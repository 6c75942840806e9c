#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mvtk/netlist.hpp"

namespace mvtk {

/// The 14 canonical 3-input majority voter structures, in catalog order.
enum class VoterId : std::uint8_t {
  AO_MV,     // 3x AND2 into OR3
  NAND_MV,   // 3x NAND2 into NAND3
  KP_MV,     // priority encoding: two XOR2, INV+AND2 encoder, MUX2
  BN_MV,     // XOR2 select, MUX2 over (Y, Z)
  XNM_MV,    // XNOR2 select, MUX2 over (Z, Y)
  X2AO_MV,   // (X^Y)Z + XY with discrete gates
  XAO22_MV,  // XOR2 into AO22
  OAO22_MV,  // OR2 into AO22
  AOA22_MV,  // AND2 into OA22
  OAAO_MV,   // OA21 into AO21
  AOOA_MV,   // AO21 into OA21
  AO222_MV,  // single AO222 cell
  OA222_MV,  // single OA222 cell
  MUX41_MV,  // single 4:1 MUX, selects (X, Y)
};

inline constexpr std::size_t kVoterCount = 14;

std::span<const VoterId> all_voters();

std::string_view voter_name(VoterId id);

/// Accepts the canonical names plus the alias OA022_MV for OAO22_MV.
std::optional<VoterId> parse_voter_id(std::string_view name);

/// Majority of three: 1 iff at least two inputs are 1.
constexpr Bit majority(Bit x, Bit y, Bit z) {
  return ((x & y) | (y & z) | (x & z)) & 1;
}

/// Canonical netlist for a voter, inputs (X, Y, Z), output V.
Netlist build_voter(VoterId id);

struct EquivalenceReport {
  bool equivalent = true;
  std::vector<std::array<Bit, 3>> counterexamples;  // (x, y, z) where output != majority
};

/// Exhaustive comparison against majority() over all 8 input vectors for
/// any valid 3-input netlist.
EquivalenceReport check_majority_equivalence(const Netlist& netlist);

EquivalenceReport verify_voter(VoterId id);

}  // namespace mvtk
