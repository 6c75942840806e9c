#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mvtk/netlist.hpp"

namespace mvtk {

/// xorshift64: x ^= x<<13; x ^= x>>7; x ^= x<<17. A zero seed (invalid for
/// xorshift) is replaced by a fixed nonzero constant.
struct Xorshift64 {
  explicit Xorshift64(std::uint64_t seed);
  std::uint64_t next();
  std::uint64_t state;
};

/// `count` input assignments for an `input_count`-wide netlist, one PRNG
/// step each; the low bits of each step index the assignment (first input =
/// most significant bit, same convention as truth_table).
std::vector<std::uint32_t> random_vector_indices(unsigned input_count, std::size_t count,
                                                 std::uint64_t seed);

enum class PpaSource : std::uint8_t {
  Proxy,     // computed from the netlist and cell table, abstract units
  Ingested,  // measured values read from a CSV, physical units
};

std::string_view to_string(PpaSource source);

struct PpaEstimate {
  std::string name;
  double power = 0;
  double delay = 0;
  double area = 0;
  PpaSource source = PpaSource::Proxy;
};

/// Figure of merit, 100/(power*delay*area). Higher is better.
/// Throws std::domain_error unless all three arguments are > 0.
double compute_fom(double power, double delay, double area);

struct FomRecord {
  PpaEstimate estimate;
  double fom = 0;
};

/// Sum of transistor counts over all instances (the area proxy).
int transistor_area(const Netlist& netlist, const CellTable& table);

/// Average switching activity over an explicit vector sequence: for every
/// vector after the first, each instance-driven net that toggles charges
/// its driver's load_weight; the sum is divided by the sequence length.
double switching_power_proxy(const Netlist& netlist, const CellTable& table,
                             std::span<const std::uint32_t> vector_indices);

/// Proxy (power, delay, area) for a netlist: area = transistor sum, delay =
/// weighted logic depth, power = switching proxy over `vectors` PRNG-drawn
/// vectors. Deterministic for a fixed (netlist, table, vectors, seed).
PpaEstimate estimate_ppa(const Netlist& netlist, std::string name, const CellTable& table,
                         std::size_t vectors, std::uint64_t seed);

struct CsvError : std::runtime_error {
  CsvError(int line_number, const std::string& what);
  int line = 0;
};

/// Measurement CSV with header `name,power_uW,delay_ns,area_um2`, one row
/// per voter. Names are normalized (OA022_MV -> OAO22_MV); unknown or
/// duplicate names and non-positive values are rejected.
std::vector<PpaEstimate> ingest_measurements(std::istream& in);
std::vector<PpaEstimate> ingest_measurements_file(const std::string& path);

std::vector<FomRecord> fom_records(std::span<const PpaEstimate> estimates);

struct RankedRecord {
  FomRecord record;
  bool above_average = false;  // fom >= mean (ties classify above)
};

struct RankReport {
  std::vector<RankedRecord> ranked;  // descending FOM
  double mean_fom = 0;
};

/// Sorts by descending FOM (name ascending on ties) and labels each record
/// against the arithmetic mean. Throws std::invalid_argument when empty.
RankReport rank_and_classify(std::vector<FomRecord> records);

/// ratios[i][j] = fom(ranked[i]) / fom(ranked[j]).
std::vector<std::vector<double>> fom_ratio_table(const RankReport& report);

/// Round half away from zero at `decimals` places (report presentation).
double round_half_up(double value, int decimals);
std::string format_fixed(double value, int decimals);

}  // namespace mvtk
