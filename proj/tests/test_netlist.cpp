#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mvtk/netlist.hpp"
#include "mvtk/voters.hpp"
#include "oracles.hpp"

using namespace mvtk;

namespace {

Netlist single_inverter() {
  Netlist n;
  const NetId a = n.add_input("a");
  n.set_output(n.add_cell(CellKind::INV, {a}, "y"));
  return n;
}

ValidationError::Kind kind_of(const Netlist& n) {
  const auto error = validate(n);
  REQUIRE(error.has_value());
  return error->kind;
}

}  // namespace

TEST_CASE("validate accepts the voter netlists") {
  for (VoterId id : all_voters()) CHECK_FALSE(validate(build_voter(id)).has_value());
  CHECK_FALSE(validate(single_inverter()).has_value());
}

TEST_CASE("validate reports arity mismatch") {
  Netlist n;
  const NetId x = n.add_input("x");
  const NetId y = n.add_input("y");
  const NetId z = n.add_input("z");
  n.set_output(n.add_cell(CellKind::XOR2, {x, y, z}, "v"));
  CHECK(kind_of(n) == ValidationError::Kind::ArityMismatch);
}

TEST_CASE("validate reports multiply driven nets") {
  Netlist n;
  const NetId x = n.add_input("x");
  const NetId y = n.add_input("y");
  const NetId v = n.add_cell(CellKind::AND2, {x, y}, "v");
  n.connect_cell(CellKind::OR2, {x, y}, v);
  n.set_output(v);
  CHECK(kind_of(n) == ValidationError::Kind::MultiplyDriven);
}

TEST_CASE("validate reports undriven nets") {
  Netlist n;
  const NetId x = n.add_input("x");
  const NetId ghost = n.add_net("ghost");
  n.set_output(n.add_cell(CellKind::AND2, {x, ghost}, "v"));
  CHECK(kind_of(n) == ValidationError::Kind::Undriven);
}

TEST_CASE("validate reports cycles") {
  Netlist n;
  const NetId x = n.add_input("x");
  const NetId a = n.add_net("a");
  const NetId b = n.add_net("b");
  n.connect_cell(CellKind::AND2, {x, b}, a);
  n.connect_cell(CellKind::INV, {a}, b);
  n.set_output(a);
  CHECK(kind_of(n) == ValidationError::Kind::Cycle);
}

TEST_CASE("validate reports a missing output") {
  Netlist n;
  n.add_input("x");
  CHECK(kind_of(n) == ValidationError::Kind::MissingOutput);
}

TEST_CASE("validate reports driven primary inputs") {
  Netlist n;
  const NetId x = n.add_input("x");
  const NetId y = n.add_input("y");
  n.connect_cell(CellKind::INV, {x}, y);
  n.set_output(y);
  CHECK(kind_of(n) == ValidationError::Kind::InputDriven);
}

TEST_CASE("evaluate spot values") {
  const Netlist ao = build_voter(VoterId::AO_MV);
  CHECK(evaluate(ao, std::vector<Bit>{1, 1, 0})[ao.primary_output()] == 1);
  CHECK(evaluate(ao, std::vector<Bit>{0, 0, 0})[ao.primary_output()] == 0);

  const Netlist oa222 = build_voter(VoterId::OA222_MV);
  // Recomputed via the reference expansion of (X+Y)(Y+Z)(X+Z).
  const std::vector<Bit> v{1, 0, 1};
  CHECK(oracles::evaluate_reference(oa222, v)[oa222.primary_output()] == 1);
  CHECK(evaluate(oa222, v)[oa222.primary_output()] == 1);
}

TEST_CASE("evaluate returns internal net values") {
  const Netlist ao = build_voter(VoterId::AO_MV);
  const auto values = evaluate(ao, std::vector<Bit>{1, 1, 0});
  // a1 = XY = 1, a2 = YZ = 0, a3 = XZ = 0
  const auto instances = ao.instances();
  CHECK(values[instances[0].output] == 1);
  CHECK(values[instances[1].output] == 0);
  CHECK(values[instances[2].output] == 0);
}

TEST_CASE("truth tables") {
  const std::vector<Bit> majority_table{0, 0, 0, 1, 0, 1, 1, 1};
  CHECK(truth_table(build_voter(VoterId::AO_MV)) == majority_table);
  CHECK(truth_table(build_voter(VoterId::NAND_MV)) == truth_table(build_voter(VoterId::AO_MV)));
  CHECK(truth_table(single_inverter()) == std::vector<Bit>{1, 0});
}

TEST_CASE("truth_table matches the recursive reference on all voters") {
  for (VoterId id : all_voters()) {
    const Netlist voter = build_voter(id);
    CAPTURE(voter_name(id));
    CHECK(truth_table(voter) == oracles::truth_table_reference(voter));
  }
}

TEST_CASE("logic depth") {
  const CellTable table = default_cell_table();
  CHECK(logic_depth(build_voter(VoterId::AO222_MV), table, DepthMode::UnitLevels) == 1.0);
  CHECK(logic_depth(build_voter(VoterId::AO_MV), table, DepthMode::UnitLevels) == 2.0);
  CHECK(logic_depth(build_voter(VoterId::KP_MV), table, DepthMode::UnitLevels) == 4.0);

  // Weighted: XOR2(2) -> INV(1) -> AND2(1) -> MUX2(2) along the long arm.
  CHECK(logic_depth(build_voter(VoterId::KP_MV), table, DepthMode::WeightedDelay) == 6.0);
  CHECK(logic_depth(build_voter(VoterId::BN_MV), table, DepthMode::WeightedDelay) == 4.0);
}

TEST_CASE("truth_table guards the input width") {
  Netlist wide;
  NetId acc = wide.add_input("a0");
  for (int i = 1; i < 21; ++i)
    acc = wide.add_cell(CellKind::AND2, {acc, wide.add_input("a" + std::to_string(i))});
  wide.set_output(acc);
  REQUIRE_FALSE(validate(wide).has_value());
  CHECK_THROWS_AS(truth_table(wide), std::domain_error);
}

TEST_CASE("unit depth is at least one whenever the output is gated") {
  const CellTable table = default_cell_table();
  Xorshift64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const Netlist n = oracles::random_netlist(rng);
    CHECK(logic_depth(n, table, DepthMode::UnitLevels) >= 1.0);
    CHECK(logic_depth(n, table, DepthMode::WeightedDelay) >=
          logic_depth(n, table, DepthMode::UnitLevels));
  }
}

TEST_CASE("an inverter in series adds exactly one level") {
  const CellTable table = default_cell_table();
  for (VoterId id : {VoterId::AO_MV, VoterId::KP_MV, VoterId::AO222_MV}) {
    Netlist voter = build_voter(id);
    const double before = logic_depth(voter, table, DepthMode::UnitLevels);
    voter.set_output(voter.add_cell(CellKind::INV, {voter.primary_output()}, "Vn"));
    REQUIRE_FALSE(validate(voter).has_value());
    CHECK(logic_depth(voter, table, DepthMode::UnitLevels) == before + 1.0);
  }
}

TEST_CASE("export format") {
  const std::string text = export_netlist(build_voter(VoterId::AO222_MV));
  CHECK(text == "inputs X Y Z\noutput V\nV = AO222(X, Y, Y, Z, X, Z)\n");
  CHECK(text == export_netlist(build_voter(VoterId::AO222_MV)));  // byte-stable
}

TEST_CASE("parse/export round trip on the voters") {
  for (VoterId id : all_voters()) {
    const Netlist voter = build_voter(id);
    const std::string text = export_netlist(voter);
    const Netlist parsed = parse_netlist(text);
    CAPTURE(voter_name(id));
    CHECK(structurally_equal(parsed, voter));
    CHECK(export_netlist(parsed) == text);
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(parsed.net_name(parsed.primary_inputs()[i]) ==
            voter.net_name(voter.primary_inputs()[i]));
  }
}

TEST_CASE("parse/export round trip on random netlists") {
  Xorshift64 rng(2024);
  for (int i = 0; i < 200; ++i) {
    const Netlist original = oracles::random_netlist(rng);
    REQUIRE_FALSE(validate(original).has_value());
    const std::string text = export_netlist(original);
    const Netlist parsed = parse_netlist(text);
    CHECK(structurally_equal(parsed, original));
    CHECK(export_netlist(parsed) == text);
  }
}

TEST_CASE("parse accepts hand-written text") {
  const Netlist bn = parse_netlist(
      "# two-gate voter\n"
      "inputs X Y Z\n"
      "output V\n"
      "s = XOR2(X, Y)\n"
      "V = MUX2(s, Y, Z)\n");
  CHECK(bn.instances().size() == 2);
  CHECK(structurally_equal(bn, build_voter(VoterId::BN_MV)));
  const std::vector<Bit> majority_table{0, 0, 0, 1, 0, 1, 1, 1};
  CHECK(truth_table(bn) == majority_table);
}

TEST_CASE("parse errors carry locations") {
  SUBCASE("missing comma") {
    try {
      parse_netlist("inputs a b\noutput v\nv = AND2(a b)\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line == 3);
      CHECK(e.column > 1);
    }
  }

  SUBCASE("unexpected character") {
    CHECK_THROWS_AS(parse_netlist("inputs a\noutput v\nv = INV(a);\n"), ParseError);
  }

  SUBCASE("unknown cell kind") {
    CHECK_THROWS_AS(parse_netlist("inputs a\noutput v\nv = NOR9(a)\n"), ParseError);
  }

  SUBCASE("missing headers") {
    CHECK_THROWS_AS(parse_netlist("v = INV(a)\n"), ParseError);
    CHECK_THROWS_AS(parse_netlist("inputs a\nv = INV(a)\n"), ParseError);
  }

  SUBCASE("undefined net reference is a semantic error") {
    try {
      parse_netlist("inputs a\noutput v\nv = AND2(a, ghost)\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("ghost") != std::string::npos);
      CHECK(e.line == 3);
    }
  }

  SUBCASE("arity mismatch is reported via validation") {
    CHECK_THROWS_AS(parse_netlist("inputs a b c\noutput v\nv = XOR2(a, b, c)\n"), ParseError);
  }
}

TEST_CASE("structurally_equal discriminates") {
  const Netlist bn = build_voter(VoterId::BN_MV);
  CHECK(structurally_equal(bn, bn));
  CHECK_FALSE(structurally_equal(bn, build_voter(VoterId::XNM_MV)));

  // Same shape, one swapped wire.
  const Netlist swapped = parse_netlist(
      "inputs X Y Z\noutput V\ns = XOR2(X, Y)\nV = MUX2(s, Z, Y)\n");
  CHECK_FALSE(structurally_equal(bn, swapped));
}
