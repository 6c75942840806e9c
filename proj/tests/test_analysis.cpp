#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "mvtk/analysis.hpp"
#include "mvtk/voters.hpp"
#include "oracles.hpp"

using namespace mvtk;

namespace {

const std::string kTable1 = std::string(MVTK_FIXTURE_DIR) + "/table1.csv";

double fom_of(const RankReport& report, std::string_view name) {
  for (const RankedRecord& entry : report.ranked)
    if (entry.record.estimate.name == name) return entry.record.fom;
  FAIL("missing record: " << name);
  return 0;
}

}  // namespace

TEST_CASE("compute_fom") {
  CHECK(compute_fom(3.518, 0.13, 8.39) == doctest::Approx(26.06).epsilon(0).scale(1).epsilon(0.0005));
  CHECK(std::abs(compute_fom(3.518, 0.13, 8.39) - 26.06) <= 0.01);
  CHECK(std::abs(compute_fom(1.111, 0.10, 3.30) - 272.75) <= 0.01);
  CHECK(compute_fom(1, 1, 1) == 100.0);

  CHECK_THROWS_AS(compute_fom(0, 1, 1), std::domain_error);
  CHECK_THROWS_AS(compute_fom(1, -2, 1), std::domain_error);
  CHECK_THROWS_AS(compute_fom(1, 1, 0), std::domain_error);
}

TEST_CASE("fom scaling laws") {
  Xorshift64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const auto draw = [&] { return 0.05 + static_cast<double>(rng.next() % 10000) / 500.0; };
    const double p = draw(), d = draw(), a = draw(), c = draw();
    const double base = compute_fom(p, d, a);
    CHECK(compute_fom(c * p, d, a) == doctest::Approx(base / c));
    CHECK(compute_fom(p, c * d, a) == doctest::Approx(base / c));
    CHECK(compute_fom(p, d, c * a) == doctest::Approx(base / c));
    CHECK(compute_fom(c * p, c * d, c * a) == doctest::Approx(base / (c * c * c)));
  }
}

TEST_CASE("xorshift64 sequence is reproducible and seed 0 is remapped") {
  Xorshift64 a(1), b(1);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Xorshift64 zero(0);
  CHECK(zero.state != 0);
  CHECK(zero.next() != 0);
  CHECK(random_vector_indices(3, 16, 42) == random_vector_indices(3, 16, 42));
  CHECK(random_vector_indices(3, 16, 42) != random_vector_indices(3, 16, 43));
  for (std::uint32_t index : random_vector_indices(3, 256, 9)) CHECK(index < 8);
}

TEST_CASE("area proxy") {
  const CellTable table = default_cell_table();
  CHECK(transistor_area(build_voter(VoterId::AO222_MV), table) == 12);
  CHECK(transistor_area(build_voter(VoterId::OA222_MV), table) == 12);
  // 3x NAND2 at 4 plus NAND3 at 6.
  CHECK(transistor_area(build_voter(VoterId::NAND_MV), table) == 18);
  CHECK(transistor_area(build_voter(VoterId::AO_MV), table) == 26);
}

TEST_CASE("area proxy grows with every added instance") {
  const CellTable table = default_cell_table();
  Xorshift64 rng(11);
  for (int i = 0; i < 50; ++i) {
    Netlist n = oracles::random_netlist(rng);
    const int before = transistor_area(n, table);
    const CellKind kind = all_cell_kinds()[rng.next() % kCellKindCount];
    std::vector<NetId> ins(arity(kind));
    for (NetId& in : ins) in = static_cast<NetId>(rng.next() % n.net_count());
    n.set_output(n.add_cell(kind, std::move(ins)));
    CHECK(transistor_area(n, table) > before);
  }
}

TEST_CASE("switching power proxy") {
  const CellTable table = default_cell_table();
  const Netlist voter = build_voter(VoterId::AO_MV);

  SUBCASE("constant sequence has zero activity after the first vector") {
    const std::vector<std::uint32_t> zeros(32, 0);
    CHECK(switching_power_proxy(voter, table, zeros) == 0.0);
    const std::vector<std::uint32_t> ones(32, 7);
    CHECK(switching_power_proxy(voter, table, ones) == 0.0);
  }

  SUBCASE("single alternation charges the toggled nets") {
    // 000 -> 111 toggles a1, a2, a3 (AND2, load 3) and V (OR3, load 4).
    const std::vector<std::uint32_t> pair{0, 7};
    CHECK(switching_power_proxy(voter, table, pair) == doctest::Approx((3 * 3 + 4) / 2.0));
  }

  SUBCASE("matches the reference recomputation exactly") {
    for (VoterId id : {VoterId::AO_MV, VoterId::KP_MV, VoterId::OA222_MV, VoterId::MUX41_MV}) {
      const Netlist n = build_voter(id);
      for (std::uint64_t seed : {1ull, 77ull}) {
        const auto indices = random_vector_indices(3, 512, seed);
        CAPTURE(voter_name(id));
        CHECK(switching_power_proxy(n, table, indices) ==
              oracles::power_reference(n, table, indices));
      }
    }
  }
}

TEST_CASE("estimate_ppa") {
  const CellTable table = default_cell_table();
  const Netlist voter = build_voter(VoterId::AO222_MV);
  const PpaEstimate estimate = estimate_ppa(voter, "AO222_MV", table, 1024, 1);

  CHECK(estimate.name == "AO222_MV");
  CHECK(estimate.source == PpaSource::Proxy);
  CHECK(estimate.area == 12.0);
  CHECK(estimate.delay == 1.0);
  CHECK(estimate.power > 0.0);

  SUBCASE("deterministic for fixed seed") {
    const PpaEstimate again = estimate_ppa(voter, "AO222_MV", table, 1024, 1);
    CHECK(again.power == estimate.power);
    const PpaEstimate other = estimate_ppa(voter, "AO222_MV", table, 1024, 2);
    CHECK(other.power != estimate.power);
  }

  SUBCASE("needs at least one vector") {
    CHECK_THROWS_AS(estimate_ppa(voter, "AO222_MV", table, 0, 1), std::domain_error);
  }
}

TEST_CASE("ingest_measurements on the published table") {
  const auto estimates = ingest_measurements_file(kTable1);
  REQUIRE(estimates.size() == 14);

  std::set<std::string> names;
  for (const PpaEstimate& e : estimates) {
    CHECK(e.source == PpaSource::Ingested);
    CHECK(e.power > 0);
    CHECK(e.delay > 0);
    CHECK(e.area > 0);
    names.insert(e.name);
  }
  CHECK(names.size() == 14);
  CHECK(names.count("OAO22_MV") == 1);  // normalized from OA022_MV
  CHECK(names.count("OA022_MV") == 0);

  // Values pass through untouched.
  for (const PpaEstimate& e : estimates)
    if (e.name == "OA222_MV") {
      CHECK(e.power == 1.111);
      CHECK(e.delay == 0.10);
      CHECK(e.area == 3.30);
    }
}

TEST_CASE("ingest_measurements rejects bad input") {
  const auto ingest = [](const std::string& text) {
    std::istringstream in(text);
    return ingest_measurements(in);
  };
  const std::string header = "name,power_uW,delay_ns,area_um2\n";

  CHECK_THROWS_AS(ingest("wrong,header\n"), CsvError);
  CHECK_THROWS_AS(ingest(header + "AO_MV,1.0,0.0,2.0\n"), CsvError);   // zero delay
  CHECK_THROWS_AS(ingest(header + "AO_MV,1.0,-0.1,2.0\n"), CsvError);  // negative
  CHECK_THROWS_AS(ingest(header + "WHO_MV,1.0,0.1,2.0\n"), CsvError);  // unknown name
  CHECK_THROWS_AS(ingest(header + "AO_MV,1.0,0.1\n"), CsvError);       // missing field
  CHECK_THROWS_AS(ingest(header + "AO_MV,1.0,x,2.0\n"), CsvError);     // non-numeric
  CHECK_THROWS_AS(ingest(header + "AO_MV,1,0.1,2\nAO_MV,2,0.2,3\n"), CsvError);  // duplicate
  CHECK(ingest(header + "AO_MV,1.0,0.1,2.0\n\n").size() == 1);  // blank row tolerated

  try {
    ingest(header + "AO_MV,1,0.1,2\nKP_MV,0,0.3,15\n");
    FAIL("expected CsvError");
  } catch (const CsvError& e) {
    CHECK(e.line == 3);
  }
}

TEST_CASE("rank_and_classify on the published table") {
  const RankReport report = rank_and_classify(fom_records(ingest_measurements_file(kTable1)));

  CHECK(std::abs(report.mean_fom - 82.33) <= 0.01);
  CHECK(report.ranked.front().record.estimate.name == "OA222_MV");
  CHECK(std::abs(report.ranked.front().record.fom - 272.75) <= 0.01);
  CHECK(std::abs(fom_of(report, "KP_MV") - 3.48) <= 0.01);
  CHECK(report.ranked.back().record.estimate.name == "KP_MV");

  const std::set<std::string> expected_above{"NAND_MV", "OAO22_MV", "AOA22_MV",
                                             "AOOA_MV",  "AO222_MV", "OA222_MV"};
  std::set<std::string> above;
  for (const RankedRecord& entry : report.ranked)
    if (entry.above_average) above.insert(entry.record.estimate.name);
  CHECK(above == expected_above);

  // Descending order.
  for (std::size_t i = 1; i < report.ranked.size(); ++i)
    CHECK(report.ranked[i - 1].record.fom >= report.ranked[i].record.fom);

  const double best = fom_of(report, "OA222_MV");
  CHECK(std::abs(best / fom_of(report, "AO222_MV") - 1.304) <= 0.002);
  CHECK(std::abs(best / fom_of(report, "NAND_MV") - 2.71) <= 0.02);
  CHECK(std::abs(best / fom_of(report, "KP_MV") - 78.4) <= 0.5);
  CHECK(std::abs(best / fom_of(report, "BN_MV") - 15.95) <= 0.1);

  const auto ratios = fom_ratio_table(report);
  CHECK(ratios[0][0] == 1.0);
  CHECK(std::abs(ratios[0][1] - best / fom_of(report, report.ranked[1].record.estimate.name)) <
        1e-12);
}

TEST_CASE("ranking order is invariant under common column scaling") {
  const auto estimates = ingest_measurements_file(kTable1);
  const RankReport base = rank_and_classify(fom_records(estimates));

  for (int column = 0; column < 3; ++column) {
    auto scaled = estimates;
    for (PpaEstimate& e : scaled) {
      (column == 0 ? e.power : column == 1 ? e.delay : e.area) *= 37.5;
    }
    const RankReport report = rank_and_classify(fom_records(scaled));
    for (std::size_t i = 0; i < report.ranked.size(); ++i)
      CHECK(report.ranked[i].record.estimate.name == base.ranked[i].record.estimate.name);
  }
}

TEST_CASE("rank_and_classify edge cases") {
  CHECK_THROWS_AS(rank_and_classify({}), std::invalid_argument);

  std::vector<FomRecord> one = fom_records(
      std::vector<PpaEstimate>{{"AO_MV", 1.0, 1.0, 1.0, PpaSource::Ingested}});
  const RankReport report = rank_and_classify(std::move(one));
  REQUIRE(report.ranked.size() == 1);
  CHECK(report.ranked[0].above_average);  // a single record ties the mean
  CHECK(report.mean_fom == 100.0);
}

TEST_CASE("report rounding is half-up at two decimals") {
  CHECK(format_fixed(26.064, 2) == "26.06");
  CHECK(format_fixed(82.334, 2) == "82.33");
  // Exactly representable halves round up, not to even.
  CHECK(format_fixed(0.125, 2) == "0.13");
  CHECK(format_fixed(0.375, 2) == "0.38");
  CHECK(format_fixed(2.5, 0) == "3");
  CHECK(round_half_up(-0.125, 2) == doctest::Approx(-0.13));
}
