#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mvtk {

using Bit = std::uint8_t;

/// The cell catalog: every gate kind the voter constructions draw from.
/// AO/OA cells are static-CMOS complex gates (AO22 = AB + CD as one cell,
/// OA22 = (A+B)(C+D), AO222/OA222 the three-term forms).
enum class CellKind : std::uint8_t {
  INV,
  AND2,
  OR2,
  OR3,
  NAND2,
  NAND3,
  XOR2,
  XNOR2,
  AO21,
  OA21,
  AO22,
  OA22,
  AO222,
  OA222,
  MUX2,
  MUX4,
};

inline constexpr std::size_t kCellKindCount = 16;

std::span<const CellKind> all_cell_kinds();

/// Input count of a kind (INV=1 ... MUX4/AO222/OA222=6).
unsigned arity(CellKind kind);

std::string_view cell_name(CellKind kind);
std::optional<CellKind> parse_cell_kind(std::string_view name);

/// Boolean function of a single cell, zero-delay.
/// MUX2 input order is (sel, d0, d1); MUX4 is (s1, s0, d0, d1, d2, d3)
/// selecting d[2*s1+s0]. Throws std::invalid_argument on arity mismatch.
Bit cell_eval(CellKind kind, std::span<const Bit> inputs);

/// Physical proxy parameters of one cell. Area proxy is the transistor
/// count; delay_weight is accumulated along paths; load_weight is charged
/// per output toggle by the switching-activity proxy.
struct CellParams {
  CellKind kind{};
  int transistors = 0;
  double delay_weight = 1.0;
  double load_weight = 1.0;

  bool operator==(const CellParams&) const = default;
};

class CellTable {
public:
  const CellParams& operator[](CellKind kind) const;
  void set(const CellParams& params);

  bool operator==(const CellTable&) const = default;

private:
  std::array<CellParams, kCellKindCount> entries_{};
};

/// Default parameter table. Complex-gate transistor counts AO22/OA22=10 and
/// AO222/OA222=12 are pinned (see has_pinned_transistor_count); the rest
/// follow static-CMOS composition (NAND2=4, AND2=6, ...). delay_weight is 1
/// except for the heavier XOR/XNOR/MUX cells (2); load_weight is
/// transistors/2.
CellTable default_cell_table();

/// True for the transistor counts the area arithmetic depends on
/// (AO22, OA22, AO222, OA222). Overriding them in a config file is
/// rejected unless CellConfigOptions::allow_pinned_override is set.
bool has_pinned_transistor_count(CellKind kind);

struct ConfigError : std::runtime_error {
  ConfigError(int line_number, const std::string& what);
  int line = 0;
};

struct CellConfigOptions {
  bool allow_pinned_override = false;
};

struct CellConfigResult {
  CellTable table;
  std::vector<std::string> warnings;  // e.g. duplicate keys (last wins)
};

/// Overlay a config onto the default table. Format is line-oriented
/// `KIND.field = value` with fields transistors, delay_weight, load_weight;
/// `#` starts a comment; blank lines are ignored.
CellConfigResult load_cell_table(std::istream& in, const CellConfigOptions& options = {});
CellConfigResult load_cell_table_file(const std::string& path, const CellConfigOptions& options = {});

/// Config-format dump of a full table; load_cell_table round-trips it.
std::string serialize_cell_table(const CellTable& table);

}  // namespace mvtk
