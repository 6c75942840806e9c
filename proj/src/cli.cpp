#include "mvtk/cli.hpp"

#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "mvtk/analysis.hpp"
#include "mvtk/faultsim.hpp"
#include "mvtk/voters.hpp"

namespace mvtk {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { Table, Csv, Md };

Format parse_format(const std::string& name) {
  if (name == "table") return Format::Table;
  if (name == "csv") return Format::Csv;
  if (name == "md") return Format::Md;
  throw UsageError("unknown format `" + name + "` (expected table, csv, or md)");
}

class TextTable {
public:
  TextTable(std::vector<std::string> headers, std::vector<bool> right_align)
      : headers_(std::move(headers)), right_align_(std::move(right_align)) {}

  void add_row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

  void print(std::ostream& out, Format format) const {
    switch (format) {
      case Format::Csv: print_csv(out); return;
      case Format::Md: print_md(out); return;
      case Format::Table: print_aligned(out); return;
    }
  }

private:
  void print_csv(std::ostream& out) const {
    print_joined(out, headers_);
    for (const auto& row : rows_) print_joined(out, row);
  }

  static void print_joined(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ",";
      out << cells[i];
    }
    out << "\n";
  }

  void print_md(std::ostream& out) const {
    const auto line = [&](const std::vector<std::string>& cells) {
      out << "|";
      for (const auto& cell : cells) out << " " << cell << " |";
      out << "\n";
    };
    line(headers_);
    out << "|";
    for (std::size_t i = 0; i < headers_.size(); ++i)
      out << (right_align_[i] ? " ---: |" : " --- |");
    out << "\n";
    for (const auto& row : rows_) line(row);
  }

  void print_aligned(std::ostream& out) const {
    std::vector<std::size_t> width(headers_.size(), 0);
    const auto measure = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) width[i] = std::max(width[i], cells[i].size());
    };
    measure(headers_);
    for (const auto& row : rows_) measure(row);

    const auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << "  ";
        const auto pad = width[i] - cells[i].size();
        if (right_align_[i]) out << std::string(pad, ' ') << cells[i];
        else out << cells[i] << std::string(i + 1 < cells.size() ? pad : 0, ' ');
      }
      out << "\n";
    };
    line(headers_);
    for (const auto& row : rows_) line(row);
  }

  std::vector<std::string> headers_;
  std::vector<bool> right_align_;
  std::vector<std::vector<std::string>> rows_;
};

std::string format_int(double value) { return format_fixed(value, 0); }

std::vector<VoterId> resolve_voters(const std::vector<std::string>& names) {
  const auto everyone = all_voters();
  if (names.empty()) return {everyone.begin(), everyone.end()};
  std::vector<VoterId> ids;
  for (const std::string& name : names) {
    if (name == "all") return {everyone.begin(), everyone.end()};
    const auto id = parse_voter_id(name);
    if (!id) throw UsageError("unknown voter `" + name + "` (see `mvtk list`)");
    ids.push_back(*id);
  }
  return ids;
}

CellTable load_cells(const std::string& path, bool allow_override, std::ostream& out) {
  if (path.empty()) return default_cell_table();
  const auto result = load_cell_table_file(path, {.allow_pinned_override = allow_override});
  for (const std::string& warning : result.warnings) out << "# warning: " << warning << "\n";
  return result.table;
}

// Per-command output options; --out redirects the report to a file.
struct OutputOptions {
  std::string format = "table";
  std::string path;
};

class ReportSink {
public:
  ReportSink(const OutputOptions& options, std::ostream& fallback) {
    if (options.path.empty()) {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(options.path);
      if (!*file_) throw std::runtime_error("cannot open output file: " + options.path);
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }

private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

void add_output_options(CLI::App* cmd, OutputOptions& options) {
  cmd->add_option("--format", options.format, "report format: table, csv, or md")
      ->check(CLI::IsMember({"table", "csv", "md"}));
  cmd->add_option("--out", options.path, "write the report to a file instead of stdout");
}

int cmd_list(std::ostream& out) {
  for (VoterId id : all_voters()) out << voter_name(id) << "\n";
  return 0;
}

int cmd_verify(const std::vector<std::string>& names, const std::string& netlist_path,
               std::ostream& out) {
  struct Item {
    std::string label;
    EquivalenceReport report;
  };
  std::vector<Item> items;

  if (!netlist_path.empty()) {
    std::ifstream in(netlist_path);
    if (!in) throw std::runtime_error("cannot open netlist: " + netlist_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    items.push_back({netlist_path, check_majority_equivalence(parse_netlist(buffer.str()))});
  } else {
    for (VoterId id : resolve_voters(names))
      items.push_back({std::string(voter_name(id)), verify_voter(id)});
  }

  std::size_t good = 0;
  for (const Item& item : items) {
    if (item.report.equivalent) {
      ++good;
      out << item.label << ": equivalent\n";
    } else {
      const auto& cex = item.report.counterexamples.front();
      out << item.label << ": NOT equivalent, counterexample (X,Y,Z)=(" << int(cex[0]) << ","
          << int(cex[1]) << "," << int(cex[2]) << ")\n";
    }
  }
  out << good << "/" << items.size() << " equivalent\n";
  return good == items.size() ? 0 : 1;
}

VoterId resolve_voter(const std::string& name) {
  const auto id = parse_voter_id(name);
  if (!id) throw UsageError("unknown voter `" + name + "` (see `mvtk list`)");
  return *id;
}

int cmd_export(VoterId id, std::ostream& out) {
  out << export_netlist(build_voter(id));
  return 0;
}

int cmd_analyze(const std::vector<VoterId>& ids, const CellTable& table, std::size_t vectors,
                std::uint64_t seed, Format format, std::ostream& out) {
  TextTable report({"name", "source", "power", "delay", "area", "fom"},
                   {false, false, true, true, true, true});
  for (VoterId id : ids) {
    const Netlist voter = build_voter(id);
    const PpaEstimate e =
        estimate_ppa(voter, std::string(voter_name(id)), table, vectors, seed);
    const double fom = e.power > 0 ? compute_fom(e.power, e.delay, e.area)
                                   : std::numeric_limits<double>::quiet_NaN();
    report.add_row({e.name, std::string(to_string(e.source)), format_fixed(e.power, 4),
                    format_fixed(e.delay, 2), format_int(e.area), format_fixed(fom, 2)});
  }
  report.print(out, format);
  return 0;
}

int cmd_rank(const std::string& csv_path, bool ratios, Format format, std::ostream& out) {
  const auto estimates = ingest_measurements_file(csv_path);
  const RankReport report = rank_and_classify(fom_records(estimates));

  TextTable table({"rank", "name", "source", "power", "delay", "area", "fom", "class"},
                  {true, false, false, true, true, true, true, false});
  int rank = 0;
  for (const RankedRecord& entry : report.ranked) {
    const PpaEstimate& e = entry.record.estimate;
    table.add_row({std::to_string(++rank), e.name, std::string(to_string(e.source)),
                   format_fixed(e.power, 3), format_fixed(e.delay, 2), format_fixed(e.area, 2),
                   format_fixed(entry.record.fom, 2),
                   entry.above_average ? "above-average" : "below-average"});
  }
  table.print(out, format);
  if (format == Format::Csv) out << "# mean_fom = " << format_fixed(report.mean_fom, 2) << "\n";
  else out << "mean fom: " << format_fixed(report.mean_fom, 2) << "\n";

  if (ratios) {
    out << "\n";
    std::vector<std::string> headers = {"fom ratio"};
    std::vector<bool> align = {false};
    for (const RankedRecord& entry : report.ranked) {
      headers.push_back(entry.record.estimate.name);
      align.push_back(true);
    }
    TextTable matrix(std::move(headers), std::move(align));
    const auto values = fom_ratio_table(report);
    for (std::size_t i = 0; i < report.ranked.size(); ++i) {
      std::vector<std::string> row = {report.ranked[i].record.estimate.name};
      for (std::size_t j = 0; j < report.ranked.size(); ++j)
        row.push_back(format_fixed(values[i][j], 3));
      matrix.add_row(std::move(row));
    }
    matrix.print(out, format);
  }
  return 0;
}

int cmd_inject(VoterId id, Format format, std::ostream& out) {
  const MaskingReport report = voter_set_sensitivity(build_voter(id));

  TextTable table({"net", "cases", "propagated", "sensitivity"}, {false, true, true, true});
  for (const SiteTally& site : report.per_site)
    table.add_row({site.site, std::to_string(site.cases), std::to_string(site.propagated),
                   format_fixed(static_cast<double>(site.propagated) /
                                    static_cast<double>(site.cases),
                                4)});
  table.add_row({"TOTAL", std::to_string(report.total_cases), std::to_string(report.propagated),
                 format_fixed(report.sensitivity, 4)});
  table.print(out, format);
  return 0;
}

int cmd_campaign(const std::vector<VoterId>& ids, const CellTable& table,
                 const CampaignOptions& options, bool tradeoff, Format format,
                 std::ostream& out) {
  const auto rows = campaign(ids, table, options);

  TextTable report(
      {"voter", "nets", "cases", "propagated", "sensitivity", "area_proxy", "delay_proxy"},
      {false, true, true, true, true, true, true});
  for (const CampaignRow& row : rows)
    report.add_row({std::string(voter_name(row.id)), std::to_string(row.nets),
                    std::to_string(row.cases), std::to_string(row.propagated),
                    format_fixed(row.sensitivity, 4), format_int(row.area_proxy),
                    format_fixed(row.delay_proxy, 2)});
  report.print(out, format);

  if (tradeoff) {
    out << "\n";
    TextTable extra({"voter", "fom_proxy", "sensitivity"}, {false, true, true});
    for (const CampaignRow& row : rows)
      extra.add_row({std::string(voter_name(row.id)), format_fixed(row.fom_proxy, 4),
                     format_fixed(row.sensitivity, 4)});
    extra.print(out, format);
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> with_program = {"mvtk"};
  with_program.insert(with_program.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(with_program.size());
  for (const std::string& arg : with_program) argv.push_back(arg.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gate-level modeling and analysis of TMR majority voters"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "print the voter catalog");

  std::vector<std::string> verify_names;
  std::string verify_netlist;
  auto* verify = app.add_subcommand("verify", "check majority equivalence exhaustively");
  auto* verify_pos = verify->add_option("voter", verify_names, "voter names, or `all` (default)");
  verify->add_option("--netlist", verify_netlist, "verify a netlist file instead")
      ->excludes(verify_pos);

  std::string export_name;
  OutputOptions export_output;
  auto* exp = app.add_subcommand("export", "print a voter's canonical netlist");
  exp->add_option("voter", export_name, "voter name")->required();
  exp->add_option("--out", export_output.path, "write to a file instead of stdout");

  std::vector<std::string> analyze_names;
  std::string analyze_cells;
  bool analyze_allow_override = false;
  std::size_t analyze_vectors = 1024;
  std::uint64_t analyze_seed = 1;
  OutputOptions analyze_output;
  auto* analyze = app.add_subcommand("analyze", "proxy power/delay/area and FOM");
  analyze->add_option("voter", analyze_names, "voter names, or `all` (default)");
  analyze->add_option("--cells", analyze_cells, "cell parameter config file");
  analyze->add_flag("--allow-override", analyze_allow_override,
                    "permit overriding pinned transistor counts");
  analyze->add_option("--vectors", analyze_vectors, "input vectors for the power proxy")
      ->default_val(std::size_t{1024});
  analyze->add_option("--seed", analyze_seed, "PRNG seed for the power proxy")
      ->default_val(std::uint64_t{1});
  add_output_options(analyze, analyze_output);

  std::string rank_csv;
  bool rank_ratios = false;
  OutputOptions rank_output;
  auto* rank = app.add_subcommand("rank", "rank measured PPA data by FOM");
  rank->add_option("--csv", rank_csv, "measurement CSV (name,power_uW,delay_ns,area_um2)")
      ->required();
  rank->add_flag("--ratios", rank_ratios, "also print the pairwise FOM ratio matrix");
  add_output_options(rank, rank_output);

  std::string inject_name;
  OutputOptions inject_output;
  auto* inject = app.add_subcommand("inject", "per-net SET sensitivity of a voter");
  inject->add_option("voter", inject_name, "voter name")->required();
  add_output_options(inject, inject_output);

  std::vector<std::string> campaign_names;
  std::string campaign_cells;
  bool campaign_allow_override = false;
  bool campaign_tradeoff = false;
  CampaignOptions campaign_options;
  OutputOptions campaign_output;
  auto* camp = app.add_subcommand("campaign", "comparative SET/proxy report over voters");
  camp->add_option("voter", campaign_names, "voter names, or `all` (default)");
  camp->add_option("--cells", campaign_cells, "cell parameter config file");
  camp->add_flag("--allow-override", campaign_allow_override,
                 "permit overriding pinned transistor counts");
  camp->add_option("--vectors", campaign_options.vectors, "input vectors for the power proxy")
      ->default_val(std::size_t{1024});
  camp->add_option("--seed", campaign_options.seed, "PRNG seed for the power proxy")
      ->default_val(std::uint64_t{1});
  camp->add_option("--threads", campaign_options.threads, "worker threads")
      ->default_val(1u);
  camp->add_flag("--tradeoff", campaign_tradeoff, "also print the FOM-vs-sensitivity table");
  add_output_options(camp, campaign_output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << "run `mvtk --help` for usage\n";
    return 2;
  }

  try {
    // Voter names are resolved before any output file or config is touched.
    if (app.got_subcommand(list)) return cmd_list(out);
    if (app.got_subcommand(verify)) return cmd_verify(verify_names, verify_netlist, out);
    if (app.got_subcommand(exp)) {
      const VoterId id = resolve_voter(export_name);
      ReportSink sink(export_output, out);
      return cmd_export(id, sink.stream());
    }
    if (app.got_subcommand(analyze)) {
      const auto ids = resolve_voters(analyze_names);
      ReportSink sink(analyze_output, out);
      const CellTable table = load_cells(analyze_cells, analyze_allow_override, sink.stream());
      return cmd_analyze(ids, table, analyze_vectors, analyze_seed,
                         parse_format(analyze_output.format), sink.stream());
    }
    if (app.got_subcommand(rank)) {
      ReportSink sink(rank_output, out);
      return cmd_rank(rank_csv, rank_ratios, parse_format(rank_output.format), sink.stream());
    }
    if (app.got_subcommand(inject)) {
      const VoterId id = resolve_voter(inject_name);
      ReportSink sink(inject_output, out);
      return cmd_inject(id, parse_format(inject_output.format), sink.stream());
    }
    if (app.got_subcommand(camp)) {
      const auto ids = resolve_voters(campaign_names);
      ReportSink sink(campaign_output, out);
      const CellTable table = load_cells(campaign_cells, campaign_allow_override, sink.stream());
      return cmd_campaign(ids, table, campaign_options, campaign_tradeoff,
                          parse_format(campaign_output.format), sink.stream());
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace mvtk
