#include "mvtk/voters.hpp"

namespace mvtk {

namespace {

constexpr std::array<VoterId, kVoterCount> kAllVoters = {
    VoterId::AO_MV,    VoterId::NAND_MV,  VoterId::KP_MV,    VoterId::BN_MV,
    VoterId::XNM_MV,   VoterId::X2AO_MV,  VoterId::XAO22_MV, VoterId::OAO22_MV,
    VoterId::AOA22_MV, VoterId::OAAO_MV,  VoterId::AOOA_MV,  VoterId::AO222_MV,
    VoterId::OA222_MV, VoterId::MUX41_MV,
};

constexpr std::array<std::string_view, kVoterCount> kVoterNames = {
    "AO_MV",    "NAND_MV",  "KP_MV",    "BN_MV",  "XNM_MV",   "X2AO_MV",  "XAO22_MV",
    "OAO22_MV", "AOA22_MV", "OAAO_MV",  "AOOA_MV", "AO222_MV", "OA222_MV", "MUX41_MV",
};

}  // namespace

std::span<const VoterId> all_voters() { return kAllVoters; }

std::string_view voter_name(VoterId id) { return kVoterNames[static_cast<std::size_t>(id)]; }

std::optional<VoterId> parse_voter_id(std::string_view name) {
  if (name == "OA022_MV") return VoterId::OAO22_MV;
  for (std::size_t i = 0; i < kVoterCount; ++i)
    if (kVoterNames[i] == name) return kAllVoters[i];
  return std::nullopt;
}

Netlist build_voter(VoterId id) {
  Netlist n;
  const NetId x = n.add_input("X");
  const NetId y = n.add_input("Y");
  const NetId z = n.add_input("Z");

  NetId v = kNoNet;
  switch (id) {
    case VoterId::AO_MV: {
      const NetId a1 = n.add_cell(CellKind::AND2, {x, y}, "a1");
      const NetId a2 = n.add_cell(CellKind::AND2, {y, z}, "a2");
      const NetId a3 = n.add_cell(CellKind::AND2, {x, z}, "a3");
      v = n.add_cell(CellKind::OR3, {a1, a2, a3}, "V");
      break;
    }
    case VoterId::NAND_MV: {
      const NetId n1 = n.add_cell(CellKind::NAND2, {x, y}, "n1");
      const NetId n2 = n.add_cell(CellKind::NAND2, {y, z}, "n2");
      const NetId n3 = n.add_cell(CellKind::NAND2, {x, z}, "n3");
      v = n.add_cell(CellKind::NAND3, {n1, n2, n3}, "V");
      break;
    }
    case VoterId::KP_MV: {
      // Priority encoder: sel = (X^Y) & ~(Y^Z); MUX passes X when sel=0, Z when sel=1.
      const NetId e1 = n.add_cell(CellKind::XOR2, {x, y}, "e1");
      const NetId e2 = n.add_cell(CellKind::XOR2, {y, z}, "e2");
      const NetId e2n = n.add_cell(CellKind::INV, {e2}, "e2n");
      const NetId sel = n.add_cell(CellKind::AND2, {e1, e2n}, "sel");
      v = n.add_cell(CellKind::MUX2, {sel, x, z}, "V");
      break;
    }
    case VoterId::BN_MV: {
      const NetId s = n.add_cell(CellKind::XOR2, {x, y}, "s");
      v = n.add_cell(CellKind::MUX2, {s, y, z}, "V");
      break;
    }
    case VoterId::XNM_MV: {
      const NetId s = n.add_cell(CellKind::XNOR2, {x, y}, "s");
      v = n.add_cell(CellKind::MUX2, {s, z, y}, "V");
      break;
    }
    case VoterId::X2AO_MV: {
      const NetId w = n.add_cell(CellKind::XOR2, {x, y}, "w");
      const NetId a1 = n.add_cell(CellKind::AND2, {w, z}, "a1");
      const NetId a2 = n.add_cell(CellKind::AND2, {x, y}, "a2");
      v = n.add_cell(CellKind::OR2, {a1, a2}, "V");
      break;
    }
    case VoterId::XAO22_MV: {
      const NetId w = n.add_cell(CellKind::XOR2, {x, y}, "w");
      v = n.add_cell(CellKind::AO22, {w, z, x, y}, "V");
      break;
    }
    case VoterId::OAO22_MV: {
      const NetId w = n.add_cell(CellKind::OR2, {x, y}, "w");
      v = n.add_cell(CellKind::AO22, {w, z, x, y}, "V");
      break;
    }
    case VoterId::AOA22_MV: {
      const NetId w = n.add_cell(CellKind::AND2, {y, z}, "w");
      v = n.add_cell(CellKind::OA22, {x, w, y, z}, "V");
      break;
    }
    case VoterId::OAAO_MV: {
      const NetId nn = n.add_cell(CellKind::OA21, {x, y, z}, "N");
      v = n.add_cell(CellKind::AO21, {x, y, nn}, "V");
      break;
    }
    case VoterId::AOOA_MV: {
      const NetId k = n.add_cell(CellKind::AO21, {y, z, x}, "K");
      v = n.add_cell(CellKind::OA21, {y, z, k}, "V");
      break;
    }
    case VoterId::AO222_MV:
      v = n.add_cell(CellKind::AO222, {x, y, y, z, x, z}, "V");
      break;
    case VoterId::OA222_MV:
      v = n.add_cell(CellKind::OA222, {x, y, y, z, x, z}, "V");
      break;
    case VoterId::MUX41_MV:
      v = n.add_cell(CellKind::MUX4, {x, y, x, z, z, y}, "V");
      break;
  }
  n.set_output(v);
  return n;
}

EquivalenceReport check_majority_equivalence(const Netlist& netlist) {
  validate_or_throw(netlist);
  if (netlist.primary_inputs().size() != 3)
    throw std::invalid_argument("majority equivalence needs a 3-input netlist");

  EquivalenceReport report;
  const auto table = truth_table(netlist);
  for (unsigned v = 0; v < 8; ++v) {
    const Bit x = (v >> 2) & 1, y = (v >> 1) & 1, z = v & 1;
    if (table[v] != majority(x, y, z)) {
      report.equivalent = false;
      report.counterexamples.push_back({x, y, z});
    }
  }
  return report;
}

EquivalenceReport verify_voter(VoterId id) { return check_majority_equivalence(build_voter(id)); }

}  // namespace mvtk
