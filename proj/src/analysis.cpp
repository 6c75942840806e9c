#include "mvtk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <set>

#include "mvtk/voters.hpp"
#include "text_util.hpp"

namespace mvtk {

Xorshift64::Xorshift64(std::uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ull) {}

std::uint64_t Xorshift64::next() {
  std::uint64_t x = state;
  x ^= x << 13;
  x ^= x >> 7;
  x ^= x << 17;
  state = x;
  return x;
}

std::vector<std::uint32_t> random_vector_indices(unsigned input_count, std::size_t count,
                                                 std::uint64_t seed) {
  if (input_count == 0 || input_count > 20)
    throw std::domain_error("random_vector_indices: input count out of range");
  const std::uint32_t mask = (1u << input_count) - 1;
  Xorshift64 rng(seed);
  std::vector<std::uint32_t> indices(count);
  for (auto& index : indices) index = static_cast<std::uint32_t>(rng.next()) & mask;
  return indices;
}

std::string_view to_string(PpaSource source) {
  return source == PpaSource::Proxy ? "proxy" : "ingested";
}

double compute_fom(double power, double delay, double area) {
  if (!(power > 0)) throw std::domain_error("compute_fom: power must be > 0");
  if (!(delay > 0)) throw std::domain_error("compute_fom: delay must be > 0");
  if (!(area > 0)) throw std::domain_error("compute_fom: area must be > 0");
  return 100.0 / (power * delay * area);
}

int transistor_area(const Netlist& netlist, const CellTable& table) {
  int total = 0;
  for (const Instance& inst : netlist.instances()) total += table[inst.kind].transistors;
  return total;
}

double switching_power_proxy(const Netlist& netlist, const CellTable& table,
                             std::span<const std::uint32_t> vector_indices) {
  if (vector_indices.empty())
    throw std::invalid_argument("switching_power_proxy: empty vector sequence");
  const auto order = topological_order(netlist);
  if (!order) throw std::invalid_argument("switching_power_proxy: netlist has a cycle");

  const auto n = netlist.primary_inputs().size();
  std::vector<Bit> inputs(n, 0);
  const auto bits_of = [&](std::uint32_t index) {
    for (std::size_t i = 0; i < n; ++i) inputs[i] = (index >> (n - 1 - i)) & 1;
  };

  bits_of(vector_indices[0]);
  std::vector<Bit> previous = evaluate(netlist, inputs, *order);

  double total = 0;
  for (std::size_t v = 1; v < vector_indices.size(); ++v) {
    bits_of(vector_indices[v]);
    const std::vector<Bit> current = evaluate(netlist, inputs, *order);
    for (const Instance& inst : netlist.instances())
      if (current[inst.output] != previous[inst.output]) total += table[inst.kind].load_weight;
    previous = current;
  }
  return total / static_cast<double>(vector_indices.size());
}

PpaEstimate estimate_ppa(const Netlist& netlist, std::string name, const CellTable& table,
                         std::size_t vectors, std::uint64_t seed) {
  validate_or_throw(netlist);
  if (vectors < 1) throw std::domain_error("estimate_ppa: need at least one vector");

  PpaEstimate estimate;
  estimate.name = std::move(name);
  estimate.source = PpaSource::Proxy;
  estimate.area = transistor_area(netlist, table);
  estimate.delay = logic_depth(netlist, table, DepthMode::WeightedDelay);
  const auto input_count = static_cast<unsigned>(netlist.primary_inputs().size());
  estimate.power =
      switching_power_proxy(netlist, table, random_vector_indices(input_count, vectors, seed));
  return estimate;
}

CsvError::CsvError(int line_number, const std::string& what)
    : std::runtime_error("csv line " + std::to_string(line_number) + ": " + what),
      line(line_number) {}

std::vector<PpaEstimate> ingest_measurements(std::istream& in) {
  std::string raw;
  int line_no = 0;

  if (!std::getline(in, raw)) throw CsvError(1, "empty input");
  ++line_no;
  if (detail::trim(raw) != "name,power_uW,delay_ns,area_um2")
    throw CsvError(1, "expected header `name,power_uW,delay_ns,area_um2`");

  std::vector<PpaEstimate> estimates;
  std::set<std::string> seen;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::trim(raw);
    if (line.empty()) continue;

    const auto fields = detail::split(line, ',');
    if (fields.size() != 4)
      throw CsvError(line_no, "expected 4 fields, got " + std::to_string(fields.size()));

    const auto id = parse_voter_id(detail::trim(fields[0]));
    if (!id) throw CsvError(line_no, "unknown voter `" + std::string(detail::trim(fields[0])) + "`");
    const std::string name(voter_name(*id));
    if (!seen.insert(name).second) throw CsvError(line_no, "duplicate voter `" + name + "`");

    PpaEstimate estimate;
    estimate.name = name;
    estimate.source = PpaSource::Ingested;
    const char* labels[] = {"power", "delay", "area"};
    double* slots[] = {&estimate.power, &estimate.delay, &estimate.area};
    for (int i = 0; i < 3; ++i) {
      const auto value = detail::parse_double(fields[i + 1]);
      if (!value)
        throw CsvError(line_no, std::string("bad ") + labels[i] + " value `" +
                                    std::string(detail::trim(fields[i + 1])) + "`");
      if (!(*value > 0))
        throw CsvError(line_no, std::string(labels[i]) + " must be > 0");
      *slots[i] = *value;
    }
    estimates.push_back(std::move(estimate));
  }
  return estimates;
}

std::vector<PpaEstimate> ingest_measurements_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open measurement csv: " + path);
  return ingest_measurements(in);
}

std::vector<FomRecord> fom_records(std::span<const PpaEstimate> estimates) {
  std::vector<FomRecord> records;
  records.reserve(estimates.size());
  for (const PpaEstimate& estimate : estimates)
    records.push_back({estimate, compute_fom(estimate.power, estimate.delay, estimate.area)});
  return records;
}

RankReport rank_and_classify(std::vector<FomRecord> records) {
  if (records.empty()) throw std::invalid_argument("rank_and_classify: no records");

  std::sort(records.begin(), records.end(), [](const FomRecord& a, const FomRecord& b) {
    if (a.fom != b.fom) return a.fom > b.fom;
    return a.estimate.name < b.estimate.name;
  });

  double sum = 0;
  for (const FomRecord& record : records) sum += record.fom;

  RankReport report;
  report.mean_fom = sum / static_cast<double>(records.size());
  report.ranked.reserve(records.size());
  for (FomRecord& record : records) {
    const bool above = record.fom >= report.mean_fom;
    report.ranked.push_back({std::move(record), above});
  }
  return report;
}

std::vector<std::vector<double>> fom_ratio_table(const RankReport& report) {
  const auto n = report.ranked.size();
  std::vector<std::vector<double>> ratios(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      ratios[i][j] = report.ranked[i].record.fom / report.ranked[j].record.fom;
  return ratios;
}

double round_half_up(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::floor(std::abs(value) * scale + 0.5) / scale * (value < 0 ? -1 : 1);
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, round_half_up(value, decimals));
  return buf;
}

}  // namespace mvtk
