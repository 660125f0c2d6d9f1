#include "pgm/approx/engine.hpp"

#include <algorithm>
#include <array>

#include "pgm/core/error.hpp"
#include "pgm/exact/elimination.hpp"
#include "pgm/exact/junction_tree.hpp"

namespace pgm {

namespace {

constexpr std::array<std::pair<Engine, std::string_view>, 8> kEngines{{
    {Engine::kVe, "ve"},
    {Engine::kJt, "jt"},
    {Engine::kPls, "pls"},
    {Engine::kLw, "lw"},
    {Engine::kSis, "sis"},
    {Engine::kAis, "ais"},
    {Engine::kEpis, "epis"},
    {Engine::kLbp, "lbp"},
}};

MarginalSet select(MarginalSet all, const std::vector<VarId>& queries) {
  if (queries.empty()) return all;
  MarginalSet out;
  for (VarId q : queries) {
    auto it = all.find(q);
    if (it == all.end()) throw Error(ErrorCode::kInvalidArgument, "unknown query variable id " + std::to_string(q));
    out.emplace(q, std::move(it->second));
  }
  return out;
}

StateIndex argmax(const PotentialTable& t) {
  const auto& v = t.values();
  return static_cast<StateIndex>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

Engine parse_engine(std::string_view name) {
  for (const auto& [engine, label] : kEngines) {
    if (label == name) return engine;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown engine '" + std::string(name) + "' (expected ve, jt, pls, lw, sis, ais, epis or lbp)");
}

std::string_view engine_name(Engine engine) noexcept {
  for (const auto& [e, label] : kEngines) {
    if (e == engine) return label;
  }
  return "?";
}

bool is_exact(Engine engine) noexcept { return engine == Engine::kVe || engine == Engine::kJt; }

InferenceResult infer(const Network& net, const Evidence& evidence, Engine engine, const std::vector<VarId>& queries,
                      const SamplerConfig& cfg, const Executor& exec) {
  validate_evidence(net.variables(), evidence);
  for (VarId q : queries) {
    if (q < 0 || static_cast<std::size_t>(q) >= net.size()) {
      throw Error(ErrorCode::kInvalidArgument, "unknown query variable id " + std::to_string(q));
    }
  }
  InferenceResult out;
  switch (engine) {
    case Engine::kVe: {
      std::vector<VarId> targets = queries;
      if (targets.empty()) {
        for (std::size_t v = 0; v < net.size(); ++v) targets.push_back(static_cast<VarId>(v));
      }
      std::vector<PotentialTable> tables(targets.size());
      exec.parallel_for(targets.size(), [&](std::size_t k) {
        tables[k] = variable_elimination(net, targets[k], evidence, exec);
      });
      for (std::size_t k = 0; k < targets.size(); ++k) out.marginals.emplace(targets[k], std::move(tables[k]));
      return out;
    }
    case Engine::kJt: {
      const JunctionTree tree = jt_propagate(build_junction_tree(net), evidence, exec);
      if (queries.empty()) {
        out.marginals = tree.marginals();
      } else {
        for (VarId q : queries) out.marginals.emplace(q, tree.query(q));
      }
      return out;
    }
    case Engine::kLbp: {
      LbpResult r = loopy_belief_propagation(net, evidence, cfg.lbp, exec);
      out.marginals = select(std::move(r.beliefs), queries);
      out.diagnostics.converged = r.converged;
      out.diagnostics.iterations = r.iterations;
      return out;
    }
    default:
      break;
  }
  SamplerResult r;
  switch (engine) {
    case Engine::kPls: r = probabilistic_logic_sampling(net, evidence, cfg, exec); break;
    case Engine::kLw: r = likelihood_weighting(net, evidence, cfg, exec); break;
    case Engine::kSis: r = self_importance_sampling(net, evidence, cfg, exec); break;
    case Engine::kAis: r = ais_bn(net, evidence, cfg, exec); break;
    default: r = epis_bn(net, evidence, cfg, exec); break;
  }
  out.marginals = select(std::move(r.marginals), queries);
  out.diagnostics = r.diagnostics;
  return out;
}

ClassificationResult classify(const Network& net, const Dataset& data, VarId class_var, Engine engine,
                              const SamplerConfig& cfg, const Executor& exec) {
  validate_dataset(data);
  if (class_var < 0 || static_cast<std::size_t>(class_var) >= net.size()) {
    throw Error(ErrorCode::kInvalidArgument, "unknown class variable id " + std::to_string(class_var));
  }
  // Network id of each data column.
  std::vector<VarId> net_id(data.variables.size());
  std::size_t class_column = data.variables.size();
  for (std::size_t c = 0; c < data.variables.size(); ++c) {
    const auto id = net.find(data.variables[c].name);
    if (!id) {
      throw Error(ErrorCode::kVariableMismatch, "data column '" + data.variables[c].name + "' is not in the network");
    }
    if (net.variable(*id).states != data.variables[c].states) {
      throw Error(ErrorCode::kVariableMismatch, "column '" + data.variables[c].name + "' has different states");
    }
    net_id[c] = *id;
    if (*id == class_var) class_column = c;
  }
  if (class_column == data.variables.size()) {
    throw Error(ErrorCode::kVariableMismatch, "class variable '" + net.variable(class_var).name + "' is not in the data");
  }

  JunctionTree tree;
  if (engine == Engine::kJt) tree = build_junction_tree(net);

  ClassificationResult out;
  out.predictions.assign(data.n_rows, 0);
  exec.parallel_for(data.n_rows, [&](std::size_t r) {
    Evidence ev;
    for (std::size_t c = 0; c < data.variables.size(); ++c) {
      if (c != class_column) ev[net_id[c]] = data.columns[c][r];
    }
    try {
      PotentialTable posterior;
      if (engine == Engine::kJt) {
        posterior = jt_propagate(tree, ev, serial_executor()).query(class_var);
      } else if (engine == Engine::kVe) {
        posterior = variable_elimination(net, class_var, ev);
      } else {
        posterior = infer(net, ev, engine, {class_var}, cfg).marginals.at(class_var);
      }
      out.predictions[r] = argmax(posterior);
    } catch (const Error& e) {
      throw Error(e.code(), "row " + std::to_string(r) + ": " + e.what());
    }
  });

  const auto& truth = data.columns[class_column];
  std::size_t correct = 0;
  std::vector<std::size_t> freq(static_cast<std::size_t>(net.variable(class_var).cardinality()), 0);
  for (std::size_t r = 0; r < data.n_rows; ++r) {
    correct += out.predictions[r] == truth[r];
    ++freq[static_cast<std::size_t>(truth[r])];
  }
  const double rows = static_cast<double>(std::max<std::size_t>(data.n_rows, 1));
  out.accuracy = static_cast<double>(correct) / rows;
  out.majority_baseline = static_cast<double>(*std::max_element(freq.begin(), freq.end())) / rows;
  return out;
}

}  // namespace pgm
