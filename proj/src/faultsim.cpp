#include "mvtk/faultsim.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <thread>

#include "mvtk/analysis.hpp"

namespace mvtk {

std::string_view to_string(FaultModel model) {
  switch (model) {
    case FaultModel::Stuck0: return "stuck0";
    case FaultModel::Stuck1: return "stuck1";
    case FaultModel::Flip: return "flip";
  }
  return "?";
}

std::vector<Bit> evaluate_with_faults(const Netlist& netlist, std::span<const Bit> inputs,
                                      std::span<const NetFault> faults) {
  const auto order = topological_order(netlist);
  if (!order) throw std::invalid_argument("evaluate_with_faults: netlist has a cycle");

  const auto apply = [&](NetId net, Bit value) -> Bit {
    for (const NetFault& fault : faults) {
      if (fault.net != net) continue;
      switch (fault.model) {
        case FaultModel::Stuck0: return 0;
        case FaultModel::Stuck1: return 1;
        case FaultModel::Flip: return !value;
      }
    }
    return value;
  };

  const auto primary = netlist.primary_inputs();
  if (inputs.size() != primary.size())
    throw std::invalid_argument("evaluate_with_faults: input width mismatch");

  std::vector<Bit> values(netlist.net_count(), 0);
  for (std::size_t i = 0; i < primary.size(); ++i)
    values[primary[i]] = apply(primary[i], inputs[i] ? 1 : 0);

  const auto instances = netlist.instances();
  std::array<Bit, 8> scratch{};
  for (std::uint32_t index : *order) {
    const Instance& inst = instances[index];
    for (std::size_t j = 0; j < inst.inputs.size(); ++j) scratch[j] = values[inst.inputs[j]];
    values[inst.output] =
        apply(inst.output, cell_eval(inst.kind, std::span(scratch.data(), inst.inputs.size())));
  }
  return values;
}

TmrSystem compose_tmr(const Netlist& module, const Netlist& voter) {
  validate_or_throw(module);
  validate_or_throw(voter);
  if (voter.primary_inputs().size() != 3)
    throw std::invalid_argument("compose_tmr: voter must have exactly 3 inputs");
  if (module.primary_inputs().empty())
    throw std::invalid_argument("compose_tmr: module has no primary inputs");

  TmrSystem system;
  system.module = module;
  system.voter = voter;
  system.module_inputs = static_cast<unsigned>(module.primary_inputs().size());

  Netlist& composed = system.composed;
  for (int copy = 0; copy < 3; ++copy) {
    const std::string suffix = "_" + std::to_string(copy + 1);
    const std::string prefix = "m" + std::to_string(copy + 1) + "_";

    std::vector<NetId> map(module.net_count(), kNoNet);
    for (NetId in : module.primary_inputs()) {
      const auto& name = module.net_name(in);
      map[in] = composed.add_input((name.empty() ? "in" + std::to_string(in) : name) + suffix);
    }
    for (const Net& net : module.nets()) {
      if (map[net.id] != kNoNet) continue;
      map[net.id] = composed.add_net(net.name.empty() ? "" : prefix + net.name);
    }
    for (const Instance& inst : module.instances()) {
      std::vector<NetId> ins;
      ins.reserve(inst.inputs.size());
      for (NetId in : inst.inputs) ins.push_back(map[in]);
      composed.connect_cell(inst.kind, std::move(ins), map[inst.output]);
    }
    system.copy_outputs[copy] = map[module.primary_output()];
  }

  std::vector<NetId> map(voter.net_count(), kNoNet);
  for (std::size_t i = 0; i < 3; ++i) map[voter.primary_inputs()[i]] = system.copy_outputs[i];
  for (const Net& net : voter.nets()) {
    if (map[net.id] != kNoNet) continue;
    map[net.id] = composed.add_net(net.name.empty() ? "" : "v_" + net.name);
  }
  for (const Instance& inst : voter.instances()) {
    std::vector<NetId> ins;
    ins.reserve(inst.inputs.size());
    for (NetId in : inst.inputs) ins.push_back(map[in]);
    composed.connect_cell(inst.kind, std::move(ins), map[inst.output]);
  }
  composed.set_output(map[voter.primary_output()]);

  validate_or_throw(composed);
  return system;
}

namespace {

constexpr std::array<FaultModel, 3> kAllModels = {FaultModel::Stuck0, FaultModel::Stuck1,
                                                  FaultModel::Flip};

void finalize(MaskingReport& report) {
  for (const SiteTally& site : report.per_site) {
    report.total_cases += site.cases;
    report.propagated += site.propagated;
  }
  report.masked = report.total_cases - report.propagated;
  report.sensitivity = report.total_cases
                           ? static_cast<double>(report.propagated) /
                                 static_cast<double>(report.total_cases)
                           : 0.0;
}

}  // namespace

MaskingReport module_fault_masking(const TmrSystem& system, const MaskingOptions& options) {
  const unsigned width = system.module_inputs;

  std::vector<std::uint32_t> vectors;
  if (width <= options.max_exhaustive_inputs) {
    vectors.resize(std::size_t{1} << width);
    for (std::size_t v = 0; v < vectors.size(); ++v) vectors[v] = static_cast<std::uint32_t>(v);
  } else if (options.sampling) {
    vectors = random_vector_indices(width, options.sampling->vectors, options.sampling->seed);
  } else {
    throw std::domain_error(
        "module_fault_masking: module has " + std::to_string(width) +
        " inputs, beyond the exhaustive guard of " + std::to_string(options.max_exhaustive_inputs) +
        "; set MaskingOptions::sampling to run a sampled campaign");
  }

  MaskingReport report;
  for (int copy = 0; copy < 3; ++copy)
    for (FaultModel model : kAllModels)
      report.per_site.push_back(
          {"copy" + std::to_string(copy + 1) + ":" + std::string(to_string(model)), 0, 0});

  const auto order = topological_order(system.composed);
  const NetId out = system.composed.primary_output();

  std::vector<Bit> inputs(3 * width, 0);
  for (std::uint32_t v : vectors) {
    for (unsigned i = 0; i < width; ++i) {
      const Bit bit = (v >> (width - 1 - i)) & 1;
      inputs[i] = inputs[width + i] = inputs[2 * width + i] = bit;
    }
    const Bit good = evaluate(system.composed, inputs, *order)[out];

    std::size_t site = 0;
    for (int copy = 0; copy < 3; ++copy) {
      for (FaultModel model : kAllModels) {
        const NetFault fault{system.copy_outputs[copy], model};
        const Bit faulty = evaluate_with_faults(system.composed, inputs, {&fault, 1})[out];
        ++report.per_site[site].cases;
        if (faulty != good) ++report.per_site[site].propagated;
        ++site;
      }
    }
  }
  finalize(report);
  return report;
}

MaskingReport voter_set_sensitivity(const Netlist& voter) {
  validate_or_throw(voter);
  if (voter.primary_inputs().size() != 3)
    throw std::invalid_argument("voter_set_sensitivity: voter must have exactly 3 inputs");

  const auto order = topological_order(voter);
  const NetId out = voter.primary_output();
  const auto instances = voter.instances();

  MaskingReport report;
  for (const Instance& inst : instances) {
    const auto& name = voter.net_name(inst.output);
    report.per_site.push_back(
        {name.empty() ? "net" + std::to_string(inst.output) : name, 0, 0});
  }

  std::array<Bit, 3> inputs{};
  for (unsigned v = 0; v < 8; ++v) {
    inputs = {static_cast<Bit>((v >> 2) & 1), static_cast<Bit>((v >> 1) & 1),
              static_cast<Bit>(v & 1)};
    const Bit good = evaluate(voter, inputs, *order)[out];
    for (std::size_t site = 0; site < instances.size(); ++site) {
      const NetFault fault{instances[site].output, FaultModel::Flip};
      const Bit faulty = evaluate_with_faults(voter, inputs, {&fault, 1})[out];
      ++report.per_site[site].cases;
      if (faulty != good) ++report.per_site[site].propagated;
    }
  }
  finalize(report);
  return report;
}

namespace {

// Rebuilds `voter` with `target` re-driven through an inverter: the original
// driver now feeds a fresh net and an INV restores the original net id, so
// every consumer (and the output) sees the complemented value.
Netlist complement_net(const Netlist& voter, NetId target) {
  Netlist mutated;
  for (const Net& net : voter.nets()) mutated.add_net(net.name);
  for (NetId in : voter.primary_inputs()) mutated.mark_input(in);

  for (const Instance& inst : voter.instances()) {
    if (inst.output == target) {
      const auto& name = voter.net_name(target);
      const NetId staged = mutated.add_net(name.empty() ? "" : name + "_pre");
      mutated.connect_cell(inst.kind, inst.inputs, staged);
      mutated.connect_cell(CellKind::INV, {staged}, target);
    } else {
      mutated.connect_cell(inst.kind, inst.inputs, inst.output);
    }
  }
  mutated.set_output(voter.primary_output());
  return mutated;
}

}  // namespace

MaskingReport voter_set_sensitivity_by_mutation(const Netlist& voter) {
  validate_or_throw(voter);
  if (voter.primary_inputs().size() != 3)
    throw std::invalid_argument("voter_set_sensitivity_by_mutation: voter must have exactly 3 inputs");

  const auto order = topological_order(voter);
  const NetId out = voter.primary_output();
  const auto instances = voter.instances();

  MaskingReport report;
  std::vector<Netlist> mutants;
  mutants.reserve(instances.size());
  for (const Instance& inst : instances) {
    const auto& name = voter.net_name(inst.output);
    report.per_site.push_back(
        {name.empty() ? "net" + std::to_string(inst.output) : name, 0, 0});
    mutants.push_back(complement_net(voter, inst.output));
    validate_or_throw(mutants.back());
  }

  std::array<Bit, 3> inputs{};
  for (unsigned v = 0; v < 8; ++v) {
    inputs = {static_cast<Bit>((v >> 2) & 1), static_cast<Bit>((v >> 1) & 1),
              static_cast<Bit>(v & 1)};
    const Bit good = evaluate(voter, inputs, *order)[out];
    for (std::size_t site = 0; site < mutants.size(); ++site) {
      const Bit faulty = evaluate(mutants[site], inputs)[mutants[site].primary_output()];
      ++report.per_site[site].cases;
      if (faulty != good) ++report.per_site[site].propagated;
    }
  }
  finalize(report);
  return report;
}

std::vector<CampaignRow> campaign(std::span<const VoterId> ids, const CellTable& table,
                                  const CampaignOptions& options) {
  if (ids.empty()) throw std::invalid_argument("campaign: no voters given");
  if (options.vectors < 1) throw std::domain_error("campaign: need at least one vector");

  std::vector<VoterId> ordered(ids.begin(), ids.end());
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

  std::vector<CampaignRow> rows(ordered.size());
  const auto run_one = [&](std::size_t slot) {
    const VoterId id = ordered[slot];
    const Netlist voter = build_voter(id);
    const MaskingReport report = voter_set_sensitivity(voter);
    const PpaEstimate estimate =
        estimate_ppa(voter, std::string(voter_name(id)), table, options.vectors, options.seed);

    CampaignRow& row = rows[slot];
    row.id = id;
    row.nets = voter.instances().size();
    row.cases = report.total_cases;
    row.propagated = report.propagated;
    row.sensitivity = report.sensitivity;
    row.area_proxy = estimate.area;
    row.delay_proxy = estimate.delay;
    row.power_proxy = estimate.power;
    // A single-vector run has no transitions and no meaningful FOM.
    row.fom_proxy = estimate.power > 0
                        ? compute_fom(estimate.power, estimate.delay, estimate.area)
                        : std::numeric_limits<double>::quiet_NaN();
  };

  if (options.threads <= 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    const unsigned workers = std::min<unsigned>(options.threads, rows.size());
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < rows.size(); i = next.fetch_add(1)) run_one(i);
      });
    for (std::thread& t : pool) t.join();
  }
  return rows;
}

}  // namespace mvtk
