#include "mvtk/cells.hpp"

#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "text_util.hpp"

namespace mvtk {

namespace {

constexpr std::array<CellKind, kCellKindCount> kAllKinds = {
    CellKind::INV,   CellKind::AND2,  CellKind::OR2,   CellKind::OR3,
    CellKind::NAND2, CellKind::NAND3, CellKind::XOR2,  CellKind::XNOR2,
    CellKind::AO21,  CellKind::OA21,  CellKind::AO22,  CellKind::OA22,
    CellKind::AO222, CellKind::OA222, CellKind::MUX2,  CellKind::MUX4,
};

constexpr std::array<std::string_view, kCellKindCount> kKindNames = {
    "INV", "AND2", "OR2", "OR3", "NAND2", "NAND3", "XOR2", "XNOR2",
    "AO21", "OA21", "AO22", "OA22", "AO222", "OA222", "MUX2", "MUX4",
};

std::size_t index_of(CellKind kind) { return static_cast<std::size_t>(kind); }

}  // namespace

std::span<const CellKind> all_cell_kinds() { return kAllKinds; }

unsigned arity(CellKind kind) {
  switch (kind) {
    case CellKind::INV: return 1;
    case CellKind::AND2:
    case CellKind::OR2:
    case CellKind::NAND2:
    case CellKind::XOR2:
    case CellKind::XNOR2: return 2;
    case CellKind::OR3:
    case CellKind::NAND3:
    case CellKind::AO21:
    case CellKind::OA21:
    case CellKind::MUX2: return 3;
    case CellKind::AO22:
    case CellKind::OA22: return 4;
    case CellKind::AO222:
    case CellKind::OA222:
    case CellKind::MUX4: return 6;
  }
  return 0;
}

std::string_view cell_name(CellKind kind) { return kKindNames[index_of(kind)]; }

std::optional<CellKind> parse_cell_kind(std::string_view name) {
  for (std::size_t i = 0; i < kCellKindCount; ++i)
    if (kKindNames[i] == name) return kAllKinds[i];
  return std::nullopt;
}

Bit cell_eval(CellKind kind, std::span<const Bit> in) {
  if (in.size() != arity(kind))
    throw std::invalid_argument("cell_eval: " + std::string(cell_name(kind)) + " expects " +
                                std::to_string(arity(kind)) + " inputs, got " +
                                std::to_string(in.size()));
  switch (kind) {
    case CellKind::INV: return !in[0];
    case CellKind::AND2: return in[0] & in[1];
    case CellKind::OR2: return in[0] | in[1];
    case CellKind::OR3: return in[0] | in[1] | in[2];
    case CellKind::NAND2: return !(in[0] & in[1]);
    case CellKind::NAND3: return !(in[0] & in[1] & in[2]);
    case CellKind::XOR2: return in[0] ^ in[1];
    case CellKind::XNOR2: return !(in[0] ^ in[1]);
    case CellKind::AO21: return (in[0] & in[1]) | in[2];
    case CellKind::OA21: return (in[0] | in[1]) & in[2];
    case CellKind::AO22: return (in[0] & in[1]) | (in[2] & in[3]);
    case CellKind::OA22: return (in[0] | in[1]) & (in[2] | in[3]);
    case CellKind::AO222: return (in[0] & in[1]) | (in[2] & in[3]) | (in[4] & in[5]);
    case CellKind::OA222: return (in[0] | in[1]) & (in[2] | in[3]) & (in[4] | in[5]);
    case CellKind::MUX2: return in[0] ? in[2] : in[1];
    case CellKind::MUX4: return in[2 + 2 * in[0] + in[1]];
  }
  throw std::invalid_argument("cell_eval: unknown kind");
}

const CellParams& CellTable::operator[](CellKind kind) const { return entries_[index_of(kind)]; }

void CellTable::set(const CellParams& params) { entries_[index_of(params.kind)] = params; }

CellTable default_cell_table() {
  struct Row {
    CellKind kind;
    int transistors;
    double delay_weight;
  };
  constexpr Row rows[] = {
      {CellKind::INV, 2, 1},   {CellKind::AND2, 6, 1},  {CellKind::OR2, 6, 1},
      {CellKind::OR3, 8, 1},   {CellKind::NAND2, 4, 1}, {CellKind::NAND3, 6, 1},
      {CellKind::XOR2, 12, 2}, {CellKind::XNOR2, 12, 2},
      {CellKind::AO21, 8, 1},  {CellKind::OA21, 8, 1},  {CellKind::AO22, 10, 1},
      {CellKind::OA22, 10, 1}, {CellKind::AO222, 12, 1}, {CellKind::OA222, 12, 1},
      {CellKind::MUX2, 12, 2}, {CellKind::MUX4, 28, 2},
  };
  CellTable table;
  for (const Row& row : rows)
    table.set({row.kind, row.transistors, row.delay_weight, row.transistors / 2.0});
  return table;
}

bool has_pinned_transistor_count(CellKind kind) {
  return kind == CellKind::AO22 || kind == CellKind::OA22 || kind == CellKind::AO222 ||
         kind == CellKind::OA222;
}

ConfigError::ConfigError(int line_number, const std::string& what)
    : std::runtime_error("cell config line " + std::to_string(line_number) + ": " + what),
      line(line_number) {}

CellConfigResult load_cell_table(std::istream& in, const CellConfigOptions& options) {
  CellConfigResult result;
  result.table = default_cell_table();
  const CellTable defaults = result.table;

  std::set<std::string> seen_keys;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected `KIND.field = value`");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value_text = detail::trim(line.substr(eq + 1));

    const auto dot = key.find('.');
    if (dot == std::string_view::npos)
      throw ConfigError(line_no, "expected `KIND.field` key, got `" + std::string(key) + "`");
    const auto kind_name = key.substr(0, dot);
    const auto field = key.substr(dot + 1);

    const auto kind = parse_cell_kind(kind_name);
    if (!kind) throw ConfigError(line_no, "unknown cell kind `" + std::string(kind_name) + "`");

    if (!seen_keys.insert(std::string(key)).second)
      result.warnings.push_back("line " + std::to_string(line_no) + ": duplicate key `" +
                                std::string(key) + "`, last value wins");

    CellParams params = result.table[*kind];
    if (field == "transistors") {
      const auto value = detail::parse_int(value_text);
      if (!value) throw ConfigError(line_no, "bad integer `" + std::string(value_text) + "`");
      if (*value < 2) throw ConfigError(line_no, "transistors must be >= 2");
      if (has_pinned_transistor_count(*kind) && *value != defaults[*kind].transistors &&
          !options.allow_pinned_override)
        throw ConfigError(line_no, std::string(kind_name) +
                                       ".transistors is pinned; set allow_pinned_override to change it");
      params.transistors = static_cast<int>(*value);
    } else if (field == "delay_weight" || field == "load_weight") {
      const auto value = detail::parse_double(value_text);
      if (!value) throw ConfigError(line_no, "bad number `" + std::string(value_text) + "`");
      if (*value <= 0) throw ConfigError(line_no, std::string(field) + " must be > 0");
      (field == "delay_weight" ? params.delay_weight : params.load_weight) = *value;
    } else {
      throw ConfigError(line_no, "unknown field `" + std::string(field) + "`");
    }
    result.table.set(params);
  }
  return result;
}

CellConfigResult load_cell_table_file(const std::string& path, const CellConfigOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open cell config: " + path);
  return load_cell_table(in, options);
}

std::string serialize_cell_table(const CellTable& table) {
  std::ostringstream out;
  out << "# cell parameter table\n";
  for (CellKind kind : kAllKinds) {
    const CellParams& params = table[kind];
    const auto name = cell_name(kind);
    out << name << ".transistors = " << params.transistors << "\n";
    out << name << ".delay_weight = " << detail::format_double(params.delay_weight) << "\n";
    out << name << ".load_weight = " << detail::format_double(params.load_weight) << "\n";
  }
  return std::move(out).str();
}

}  // namespace mvtk
