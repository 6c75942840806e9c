#include "mvtk/netlist.hpp"

#include <algorithm>
#include <array>
#include <queue>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "text_util.hpp"

namespace mvtk {

NetId Netlist::add_net(std::string name) {
  const NetId id = static_cast<NetId>(nets_.size());
  nets_.push_back({id, std::move(name)});
  return id;
}

NetId Netlist::add_input(std::string name) {
  const NetId id = add_net(std::move(name));
  inputs_.push_back(id);
  return id;
}

NetId Netlist::add_cell(CellKind kind, std::vector<NetId> inputs, std::string output_name) {
  const NetId out = add_net(std::move(output_name));
  instances_.push_back({kind, std::move(inputs), out});
  return out;
}

void Netlist::connect_cell(CellKind kind, std::vector<NetId> inputs, NetId output) {
  instances_.push_back({kind, std::move(inputs), output});
}

bool Netlist::is_primary_input(NetId id) const {
  return std::find(inputs_.begin(), inputs_.end(), id) != inputs_.end();
}

std::optional<std::uint32_t> Netlist::driver_of(NetId id) const {
  for (std::uint32_t i = 0; i < instances_.size(); ++i)
    if (instances_[i].output == id) return i;
  return std::nullopt;
}

namespace {

std::string net_label(const Netlist& netlist, NetId id) {
  const auto& name = netlist.net_name(id);
  if (!name.empty()) return "`" + name + "` (net " + std::to_string(id) + ")";
  return "net " + std::to_string(id);
}

}  // namespace

std::optional<ValidationError> validate(const Netlist& netlist) {
  using Kind = ValidationError::Kind;
  const auto nets = netlist.net_count();

  if (netlist.primary_output() == kNoNet)
    return ValidationError{Kind::MissingOutput, "no primary output set"};
  if (netlist.primary_output() >= nets)
    return ValidationError{Kind::BadNetRef, "primary output refers to a nonexistent net"};
  for (NetId in : netlist.primary_inputs())
    if (in >= nets)
      return ValidationError{Kind::BadNetRef, "primary input refers to a nonexistent net"};

  {
    std::unordered_set<NetId> seen;
    for (NetId in : netlist.primary_inputs())
      if (!seen.insert(in).second)
        return ValidationError{Kind::BadNetRef,
                               "duplicate primary input " + net_label(netlist, in)};
  }

  const auto instances = netlist.instances();
  for (std::uint32_t i = 0; i < instances.size(); ++i) {
    const Instance& inst = instances[i];
    if (inst.output >= nets)
      return ValidationError{Kind::BadNetRef,
                             "instance " + std::to_string(i) + " output net does not exist"};
    for (NetId in : inst.inputs)
      if (in >= nets)
        return ValidationError{Kind::BadNetRef,
                               "instance " + std::to_string(i) + " input net does not exist"};
    if (inst.inputs.size() != arity(inst.kind))
      return ValidationError{
          Kind::ArityMismatch,
          "instance " + std::to_string(i) + " (" + std::string(cell_name(inst.kind)) + " -> " +
              net_label(netlist, inst.output) + ") has " + std::to_string(inst.inputs.size()) +
              " inputs, expected " + std::to_string(arity(inst.kind))};
  }

  std::vector<std::uint32_t> driver_count(nets, 0);
  for (const Instance& inst : instances) ++driver_count[inst.output];
  for (NetId id = 0; id < nets; ++id) {
    if (driver_count[id] > 1)
      return ValidationError{Kind::MultiplyDriven,
                             net_label(netlist, id) + " is driven by " +
                                 std::to_string(driver_count[id]) + " instances"};
    if (driver_count[id] == 1 && netlist.is_primary_input(id))
      return ValidationError{Kind::InputDriven,
                             "primary input " + net_label(netlist, id) + " is driven by an instance"};
    if (driver_count[id] == 0 && !netlist.is_primary_input(id))
      return ValidationError{Kind::Undriven, net_label(netlist, id) + " is not driven"};
  }

  if (!topological_order(netlist))
    return ValidationError{Kind::Cycle, "instance graph has a cycle"};

  // Cone of the output must touch a primary input. With the checks above
  // this only fires on degenerate graphs, but the contract promises it.
  {
    std::vector<char> visited(nets, 0);
    std::vector<NetId> stack = {netlist.primary_output()};
    bool reachable = false;
    while (!stack.empty() && !reachable) {
      const NetId id = stack.back();
      stack.pop_back();
      if (visited[id]) continue;
      visited[id] = 1;
      if (netlist.is_primary_input(id)) {
        reachable = true;
        break;
      }
      if (const auto driver = netlist.driver_of(id))
        for (NetId in : instances[*driver].inputs) stack.push_back(in);
    }
    if (!reachable)
      return ValidationError{Kind::UnreachableOutput,
                             "primary output is not reachable from any primary input"};
  }

  return std::nullopt;
}

void validate_or_throw(const Netlist& netlist) {
  if (const auto error = validate(netlist))
    throw std::invalid_argument("invalid netlist: " + error->message);
}

std::optional<std::vector<std::uint32_t>> topological_order(const Netlist& netlist) {
  const auto instances = netlist.instances();
  const auto count = static_cast<std::uint32_t>(instances.size());

  std::unordered_map<NetId, std::uint32_t> driver;
  driver.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) driver.emplace(instances[i].output, i);

  std::vector<std::vector<std::uint32_t>> fanout(count);
  std::vector<std::uint32_t> indegree(count, 0);
  for (std::uint32_t i = 0; i < count; ++i) {
    for (NetId in : instances[i].inputs) {
      const auto it = driver.find(in);
      if (it == driver.end()) continue;
      fanout[it->second].push_back(i);
      ++indegree[i];
    }
  }

  std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> ready;
  for (std::uint32_t i = 0; i < count; ++i)
    if (indegree[i] == 0) ready.push(i);

  std::vector<std::uint32_t> order;
  order.reserve(count);
  while (!ready.empty()) {
    const std::uint32_t i = ready.top();
    ready.pop();
    order.push_back(i);
    for (std::uint32_t next : fanout[i])
      if (--indegree[next] == 0) ready.push(next);
  }
  if (order.size() != count) return std::nullopt;
  return order;
}

std::vector<Bit> evaluate(const Netlist& netlist, std::span<const Bit> inputs) {
  const auto order = topological_order(netlist);
  if (!order) throw std::invalid_argument("evaluate: netlist has a cycle");
  return evaluate(netlist, inputs, *order);
}

std::vector<Bit> evaluate(const Netlist& netlist, std::span<const Bit> inputs,
                          std::span<const std::uint32_t> order) {
  const auto primary = netlist.primary_inputs();
  if (inputs.size() != primary.size())
    throw std::invalid_argument("evaluate: expected " + std::to_string(primary.size()) +
                                " input bits, got " + std::to_string(inputs.size()));
  std::vector<Bit> values(netlist.net_count(), 0);
  for (std::size_t i = 0; i < primary.size(); ++i) values[primary[i]] = inputs[i] ? 1 : 0;

  const auto instances = netlist.instances();
  std::array<Bit, 8> scratch{};
  for (std::uint32_t index : order) {
    const Instance& inst = instances[index];
    for (std::size_t j = 0; j < inst.inputs.size(); ++j) scratch[j] = values[inst.inputs[j]];
    values[inst.output] = cell_eval(inst.kind, std::span(scratch.data(), inst.inputs.size()));
  }
  return values;
}

std::vector<Bit> truth_table(const Netlist& netlist) {
  const auto n = netlist.primary_inputs().size();
  if (n > 20) throw std::domain_error("truth_table: more than 20 primary inputs");
  const auto order = topological_order(netlist);
  if (!order) throw std::invalid_argument("truth_table: netlist has a cycle");

  const std::size_t rows = std::size_t{1} << n;
  std::vector<Bit> table(rows, 0);
  std::vector<Bit> inputs(n, 0);
  for (std::size_t v = 0; v < rows; ++v) {
    for (std::size_t i = 0; i < n; ++i) inputs[i] = (v >> (n - 1 - i)) & 1;
    table[v] = evaluate(netlist, inputs, *order)[netlist.primary_output()];
  }
  return table;
}

double logic_depth(const Netlist& netlist, const CellTable& table, DepthMode mode) {
  const auto order = topological_order(netlist);
  if (!order) throw std::invalid_argument("logic_depth: netlist has a cycle");

  std::vector<double> depth(netlist.net_count(), 0.0);
  const auto instances = netlist.instances();
  for (std::uint32_t index : *order) {
    const Instance& inst = instances[index];
    double arrival = 0.0;
    for (NetId in : inst.inputs) arrival = std::max(arrival, depth[in]);
    const double weight = mode == DepthMode::UnitLevels ? 1.0 : table[inst.kind].delay_weight;
    depth[inst.output] = std::max(depth[inst.output], arrival + weight);
  }
  return depth[netlist.primary_output()];
}

ParseError::ParseError(int line_number, int column_number, const std::string& what)
    : std::runtime_error("line " + std::to_string(line_number) + ":" +
                         std::to_string(column_number) + ": " + what),
      line(line_number),
      column(column_number) {}

namespace {

struct Token {
  std::string_view text;
  int column = 0;  // 1-based
  char symbol = 0; // one of = ( ) , or 0 for identifiers
};

std::vector<Token> tokenize_line(std::string_view line, int line_no) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '#') break;
    const int column = static_cast<int>(i) + 1;
    if (c == '=' || c == '(' || c == ')' || c == ',') {
      tokens.push_back({line.substr(i, 1), column, c});
      ++i;
      continue;
    }
    if (detail::is_ident_start(c)) {
      std::size_t j = i + 1;
      while (j < line.size() && detail::is_ident_char(line[j])) ++j;
      tokens.push_back({line.substr(i, j - i), column, 0});
      i = j;
      continue;
    }
    throw ParseError(line_no, column, std::string("unexpected character `") + c + "`");
  }
  return tokens;
}

struct SourceLoc {
  int line = 0;
  int column = 0;
};

}  // namespace

Netlist parse_netlist(std::string_view text) {
  struct InstanceLine {
    std::string output;
    CellKind kind{};
    std::vector<std::string> inputs;
    SourceLoc loc;
  };

  std::vector<std::string> input_names;
  std::string output_name;
  std::vector<InstanceLine> instance_lines;
  std::unordered_map<std::string, SourceLoc> first_use;
  SourceLoc inputs_loc, output_loc;

  const auto note_use = [&](std::string_view name, int line_no, int column) {
    first_use.try_emplace(std::string(name), SourceLoc{line_no, column});
  };

  int line_no = 0;
  for (std::string_view line : detail::split(text, '\n')) {
    ++line_no;
    const auto tokens = tokenize_line(line, line_no);
    if (tokens.empty()) continue;

    const auto expect_ident = [&](std::size_t i, const char* what) -> const Token& {
      if (i >= tokens.size())
        throw ParseError(line_no, static_cast<int>(line.size()) + 1,
                         std::string("expected ") + what);
      if (tokens[i].symbol != 0)
        throw ParseError(line_no, tokens[i].column,
                         std::string("expected ") + what + ", got `" +
                             std::string(tokens[i].text) + "`");
      return tokens[i];
    };

    if (tokens[0].symbol == 0 && tokens[0].text == "inputs") {
      if (!input_names.empty())
        throw ParseError(line_no, tokens[0].column, "duplicate `inputs` line");
      if (tokens.size() < 2)
        throw ParseError(line_no, tokens[0].column, "`inputs` needs at least one net name");
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        const Token& tok = expect_ident(i, "a net name");
        if (std::find(input_names.begin(), input_names.end(), tok.text) != input_names.end())
          throw ParseError(line_no, tok.column,
                           "duplicate input `" + std::string(tok.text) + "`");
        input_names.emplace_back(tok.text);
        note_use(tok.text, line_no, tok.column);
      }
      inputs_loc = {line_no, tokens[0].column};
      continue;
    }

    if (tokens[0].symbol == 0 && tokens[0].text == "output") {
      if (!output_name.empty())
        throw ParseError(line_no, tokens[0].column, "duplicate `output` line");
      const Token& tok = expect_ident(1, "the output net name");
      if (tokens.size() > 2)
        throw ParseError(line_no, tokens[2].column, "`output` takes exactly one net name");
      output_name = std::string(tok.text);
      note_use(tok.text, line_no, tok.column);
      output_loc = {line_no, tok.column};
      continue;
    }

    // <net> = <KIND>(<net>, ...)
    InstanceLine inst;
    const Token& lhs = expect_ident(0, "a net name");
    inst.output = std::string(lhs.text);
    inst.loc = {line_no, lhs.column};
    note_use(lhs.text, line_no, lhs.column);

    if (tokens.size() < 2 || tokens[1].symbol != '=')
      throw ParseError(line_no, tokens.size() < 2 ? lhs.column : tokens[1].column,
                       "expected `=` after net name");
    const Token& kind_tok = expect_ident(2, "a cell kind");
    const auto kind = parse_cell_kind(kind_tok.text);
    if (!kind)
      throw ParseError(line_no, kind_tok.column,
                       "unknown cell kind `" + std::string(kind_tok.text) + "`");
    inst.kind = *kind;

    if (tokens.size() < 4 || tokens[3].symbol != '(')
      throw ParseError(line_no, tokens.size() < 4 ? kind_tok.column : tokens[3].column,
                       "expected `(` after cell kind");
    std::size_t i = 4;
    while (true) {
      const Token& arg = expect_ident(i, "a net name");
      inst.inputs.emplace_back(arg.text);
      note_use(arg.text, line_no, arg.column);
      ++i;
      if (i >= tokens.size())
        throw ParseError(line_no, static_cast<int>(line.size()) + 1, "expected `,` or `)`");
      if (tokens[i].symbol == ',') {
        ++i;
        continue;
      }
      if (tokens[i].symbol == ')') {
        ++i;
        break;
      }
      throw ParseError(line_no, tokens[i].column, "expected `,` or `)`");
    }
    if (i != tokens.size())
      throw ParseError(line_no, tokens[i].column, "trailing text after instance");
    instance_lines.push_back(std::move(inst));
  }

  if (input_names.empty()) throw ParseError(line_no + 1, 1, "missing `inputs` line");
  if (output_name.empty()) throw ParseError(line_no + 1, 1, "missing `output` line");

  Netlist netlist;
  std::unordered_map<std::string, NetId> by_name;
  for (const std::string& name : input_names) by_name.emplace(name, netlist.add_input(name));
  const auto net_of = [&](const std::string& name) {
    const auto it = by_name.find(name);
    if (it != by_name.end()) return it->second;
    const NetId id = netlist.add_net(name);
    by_name.emplace(name, id);
    return id;
  };
  for (const InstanceLine& inst : instance_lines) {
    std::vector<NetId> inputs;
    inputs.reserve(inst.inputs.size());
    for (const std::string& name : inst.inputs) inputs.push_back(net_of(name));
    netlist.connect_cell(inst.kind, std::move(inputs), net_of(inst.output));
  }
  netlist.set_output(net_of(output_name));

  if (const auto error = validate(netlist)) {
    // Best-effort source location: the first use of a net named in the message.
    SourceLoc loc{};
    for (const auto& [name, where] : first_use) {
      if (error->message.find("`" + name + "`") != std::string::npos &&
          (loc.line == 0 || where.line < loc.line ||
           (where.line == loc.line && where.column < loc.column)))
        loc = where;
    }
    throw ParseError(loc.line, loc.column, "invalid netlist: " + error->message);
  }
  return netlist;
}

namespace {

std::vector<std::string> export_names(const Netlist& netlist) {
  std::unordered_map<std::string_view, int> uses;
  for (const Net& net : netlist.nets())
    if (!net.name.empty() && detail::is_identifier(net.name)) ++uses[net.name];

  std::unordered_set<std::string> taken;
  std::vector<std::string> names(netlist.net_count());
  for (const Net& net : netlist.nets())
    if (!net.name.empty() && detail::is_identifier(net.name) && uses[net.name] == 1) {
      names[net.id] = net.name;
      taken.insert(net.name);
    }
  for (const Net& net : netlist.nets()) {
    if (!names[net.id].empty()) continue;
    std::string candidate = "n" + std::to_string(net.id);
    while (taken.count(candidate)) candidate += "_";
    taken.insert(candidate);
    names[net.id] = std::move(candidate);
  }
  return names;
}

}  // namespace

std::string export_netlist(const Netlist& netlist) {
  const auto order = topological_order(netlist);
  if (!order) throw std::invalid_argument("export_netlist: netlist has a cycle");
  const auto names = export_names(netlist);

  std::ostringstream out;
  out << "inputs";
  for (NetId in : netlist.primary_inputs()) out << " " << names[in];
  out << "\n";
  out << "output " << names[netlist.primary_output()] << "\n";

  const auto instances = netlist.instances();
  for (std::uint32_t index : *order) {
    const Instance& inst = instances[index];
    out << names[inst.output] << " = " << cell_name(inst.kind) << "(";
    for (std::size_t j = 0; j < inst.inputs.size(); ++j) {
      if (j) out << ", ";
      out << names[inst.inputs[j]];
    }
    out << ")\n";
  }
  return std::move(out).str();
}

bool structurally_equal(const Netlist& a, const Netlist& b) {
  if (a.primary_inputs().size() != b.primary_inputs().size()) return false;
  if (a.instances().size() != b.instances().size()) return false;
  const auto order_a = topological_order(a);
  const auto order_b = topological_order(b);
  if (!order_a || !order_b) return false;

  std::vector<NetId> map(a.net_count(), kNoNet);
  std::vector<NetId> reverse(b.net_count(), kNoNet);
  const auto bind = [&](NetId from, NetId to) {
    if (map[from] != kNoNet) return map[from] == to;
    if (reverse[to] != kNoNet) return false;
    map[from] = to;
    reverse[to] = from;
    return true;
  };

  for (std::size_t i = 0; i < a.primary_inputs().size(); ++i)
    if (!bind(a.primary_inputs()[i], b.primary_inputs()[i])) return false;

  for (std::size_t k = 0; k < order_a->size(); ++k) {
    const Instance& ia = a.instances()[(*order_a)[k]];
    const Instance& ib = b.instances()[(*order_b)[k]];
    if (ia.kind != ib.kind || ia.inputs.size() != ib.inputs.size()) return false;
    for (std::size_t j = 0; j < ia.inputs.size(); ++j)
      if (map[ia.inputs[j]] == kNoNet || map[ia.inputs[j]] != ib.inputs[j]) return false;
    if (!bind(ia.output, ib.output)) return false;
  }
  return map[a.primary_output()] == b.primary_output();
}

}  // namespace mvtk
