#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "pgm/approx/engine.hpp"
#include "pgm/core/error.hpp"
#include "pgm/io/bif.hpp"
#include "pgm/io/convert.hpp"
#include "pgm/io/csv.hpp"
#include "pgm/io/graph_json.hpp"
#include "pgm/io/network_json.hpp"
#include "pgm/learn/mle.hpp"
#include "pgm/learn/orientation.hpp"
#include "pgm/sim/generate.hpp"
#include "pgm/sim/metrics.hpp"

namespace pgm::cli {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "failed writing '" + path + "'");
}

double round_digits(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

VarId lookup_variable(const Network& net, const std::string& name) {
  const auto id = net.find(name);
  if (!id) {
    std::vector<std::string> names;
    for (const auto& v : net.variables()) names.push_back(v.name);
    throw UsageError("unknown variable '" + name + "' (variables: " + join(names) + ")");
  }
  return *id;
}

std::vector<std::string> split_list(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (const auto& arg : args) {
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) out.push_back(item);
    }
  }
  return out;
}

Evidence parse_evidence(const Network& net, const std::vector<std::string>& specs) {
  Evidence ev;
  for (const auto& item : split_list(specs)) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("evidence '" + item + "' is not of the form VAR=state");
    const VarId v = lookup_variable(net, item.substr(0, eq));
    const auto& var = net.variable(v);
    const auto state = var.state_index(item.substr(eq + 1));
    if (!state) {
      throw UsageError("unknown state '" + item.substr(eq + 1) + "' for variable '" + var.name +
                       "' (valid states: " + join(var.states) + ")");
    }
    if (ev.contains(v) && ev[v] != *state) throw UsageError("conflicting evidence for '" + var.name + "'");
    ev[v] = *state;
  }
  return ev;
}

Engine engine_from(const std::string& name) {
  try {
    return parse_engine(name);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

Json distribution_json(const DiscreteVariable& var, const PotentialTable& t, int digits) {
  Json d = Json::object();
  for (std::size_t s = 0; s < var.states.size(); ++s) d[var.states[s]] = round_digits(t.values()[s], digits);
  return d;
}

Json diagnostics_json(Engine engine, const Diagnostics& diag) {
  Json d = Json::object();
  if (is_exact(engine)) return d;
  if (engine != Engine::kLbp) {
    d["samples"] = diag.samples;
    d["acceptance_rate"] = diag.acceptance_rate;
    d["effective_sample_size"] = diag.effective_sample_size;
  }
  if (engine == Engine::kLbp || engine == Engine::kEpis) {
    d["converged"] = diag.converged;
    d["iterations"] = diag.iterations;
  }
  return d;
}

void log(bool verbose, std::ostream& err, const std::string& msg) {
  if (verbose) err << "pgmtool: " << msg << "\n";
}

struct Common {
  std::size_t workers = 0;
  bool verbose = false;
};

struct SamplingFlags {
  std::size_t n = 100000;
  std::uint64_t seed = 0;

  void add(CLI::App* cmd) {
    cmd->add_option("--n", n, "Number of samples for sampling engines")->capture_default_str();
    cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
  }
  SamplerConfig config() const {
    if (n == 0) throw UsageError("--n must be >= 1");
    SamplerConfig cfg;
    cfg.n_samples = n;
    cfg.seed = seed;
    return cfg;
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete Bayesian network learning and inference", "pgmtool"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--workers", common.workers, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_flag("--verbose", common.verbose, "Log progress to standard error");
  app.fallthrough();

  // learn-structure
  auto* ls = app.add_subcommand("learn-structure", "PC-stable structure learning from CSV data");
  std::string ls_data, ls_out;
  double ls_alpha = 0.05;
  int ls_depth = -1;
  ls->add_option("--data", ls_data, "CSV file with a header")->required();
  ls->add_option("--alpha", ls_alpha, "Significance level of the CI tests")->capture_default_str();
  ls->add_option("--depth", ls_depth, "Largest conditioning set (-1 = unlimited)")->capture_default_str();
  ls->add_option("--out", ls_out, "Output prefix")->required();

  // learn-params
  auto* lp = app.add_subcommand("learn-params", "Maximum-likelihood CPTs for a given structure");
  std::string lp_data, lp_structure, lp_out;
  double lp_pseudo = 1.0;
  lp->add_option("--data", lp_data, "CSV file with a header")->required();
  lp->add_option("--structure", lp_structure, "Structure JSON, network JSON or BIF")->required();
  lp->add_option("--pseudocount", lp_pseudo, "Additive smoothing")->capture_default_str();
  lp->add_option("--out", lp_out, "Output BIF file")->required();

  // infer
  auto* inf = app.add_subcommand("infer", "Posterior marginals");
  std::string inf_model, inf_engine = "jt";
  std::vector<std::string> inf_evidence, inf_query;
  int inf_digits = 12;
  SamplingFlags inf_sampling;
  inf->add_option("--model", inf_model, "BIF or network JSON")->required();
  inf->add_option("--engine", inf_engine, "ve, jt, lbp, pls, lw, sis, ais or epis")->capture_default_str();
  inf->add_option("--evidence", inf_evidence, "VAR=state[,VAR=state...]");
  inf->add_option("--query", inf_query, "VAR[,VAR...] (default: all)");
  inf->add_option("--digits", inf_digits, "Significant digits of reported probabilities")
      ->capture_default_str()
      ->check(CLI::Range(1, 17));
  inf_sampling.add(inf);

  // generate
  auto* gen = app.add_subcommand("generate", "Forward-sample a dataset");
  std::string gen_model, gen_out;
  std::size_t gen_n = 0;
  std::uint64_t gen_seed = 0;
  gen->add_option("--model", gen_model, "BIF or network JSON")->required();
  gen->add_option("--n", gen_n, "Number of rows")->required();
  gen->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output CSV file")->required();

  // eval
  auto* ev = app.add_subcommand("eval", "Evaluation metrics");
  ev->require_subcommand(1);
  auto* ev_shd = ev->add_subcommand("shd", "Structural Hamming distance between CPDAGs");
  std::string shd_learned, shd_truth;
  ev_shd->add_option("--learned", shd_learned, "CPDAG JSON, structure JSON, network JSON or BIF")->required();
  ev_shd->add_option("--truth", shd_truth, "CPDAG JSON, structure JSON, network JSON or BIF")->required();
  auto* ev_h = ev->add_subcommand("hellinger", "Mean Hellinger distance between two infer outputs");
  std::string h_a, h_b;
  ev_h->add_option("--a", h_a, "Marginals JSON")->required();
  ev_h->add_option("--b", h_b, "Marginals JSON")->required();

  // convert
  auto* conv = app.add_subcommand("convert", "Convert a network between formats");
  std::string conv_in, conv_to, conv_out;
  conv->add_option("--in", conv_in, "BIF or network JSON")->required();
  conv->add_option("--to", conv_to, "bif, dot or json")->required();
  conv->add_option("--out", conv_out, "Output file (default: standard output)");

  // classify
  auto* cls = app.add_subcommand("classify", "Classify rows of a dataset");
  std::string cls_model, cls_data, cls_class, cls_engine = "jt";
  SamplingFlags cls_sampling;
  cls->add_option("--model", cls_model, "BIF or network JSON")->required();
  cls->add_option("--data", cls_data, "CSV file with a header")->required();
  cls->add_option("--class-var", cls_class, "Class variable")->required();
  cls->add_option("--engine", cls_engine, "Inference engine")->capture_default_str();
  cls_sampling.add(cls);

  std::vector<std::string> argv_store{"pgmtool"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    while (!target->get_subcommands().empty()) target = target->get_subcommands().front();
    out << target->help();
    return 0;
  } catch (const CLI::ParseError& e) {
    const CLI::App* target = &app;
    while (!target->get_subcommands().empty()) target = target->get_subcommands().front();
    err << "error: " << e.what() << "\n\n" << target->help();
    return 2;
  }

  try {
    const Executor exec(common.workers);
    const bool verbose = common.verbose;
    log(verbose, err, "using " + std::to_string(exec.workers()) + " worker(s)");
    const auto t0 = Clock::now();

    if (ls->parsed()) {
      if (!(ls_alpha > 0.0 && ls_alpha < 1.0)) throw UsageError("alpha must be in (0,1)");
      if (ls_depth < -1) throw UsageError("depth must be >= -1");
      const Dataset data = load_csv(read_file(ls_data));
      log(verbose, err, "loaded " + std::to_string(data.n_rows) + " rows");
      const PcResult r = learn_structure(data, {ls_alpha, ls_depth}, exec);
      const std::string cpdag_path = ls_out + ".cpdag.json";
      const std::string dag_path = ls_out + ".dag.bif-structure.json";
      write_file(cpdag_path, write_cpdag_json(data.variables, r.cpdag, r.search.sepsets));
      write_file(dag_path, write_structure_json({data.variables, r.dag_parents}));
      std::size_t directed = 0;
      for (const auto& e : r.cpdag.edges()) directed += e.directed;
      Json s;
      s["edges"] = r.cpdag.edge_count();
      s["directed_edges"] = directed;
      s["ci_tests"] = r.search.ci_tests;
      s["levels"] = r.search.levels;
      s["wall_time_s"] = seconds_since(t0);
      s["cpdag"] = cpdag_path;
      s["dag"] = dag_path;
      out << s.dump(2) << "\n";
    } else if (lp->parsed()) {
      if (!(lp_pseudo >= 0.0)) throw UsageError("pseudocount must be >= 0");
      const DagStructure structure = parse_structure_auto(read_file(lp_structure));
      const Dataset data = load_csv_with_schema(read_file(lp_data), structure.variables);
      const Network net = fit_mle(structure, data, lp_pseudo, exec);
      write_file(lp_out, write_bif(net));
      Json s;
      s["variables"] = net.size();
      s["rows"] = data.n_rows;
      s["pseudocount"] = lp_pseudo;
      s["wall_time_s"] = seconds_since(t0);
      s["out"] = lp_out;
      out << s.dump(2) << "\n";
    } else if (inf->parsed()) {
      const Engine engine = engine_from(inf_engine);
      const SamplerConfig cfg = inf_sampling.config();
      const Network net = parse_network_auto(read_file(inf_model));
      const Evidence evidence = parse_evidence(net, inf_evidence);
      std::vector<VarId> queries;
      for (const auto& q : split_list(inf_query)) queries.push_back(lookup_variable(net, q));
      const InferenceResult r = infer(net, evidence, engine, queries, cfg, exec);
      Json doc;
      doc["engine"] = std::string(engine_name(engine));
      Json je = Json::object();
      for (const auto& [v, s] : evidence) je[net.variable(v).name] = net.variable(v).states[static_cast<std::size_t>(s)];
      doc["evidence"] = std::move(je);
      Json jm = Json::object();
      const auto emit = [&](VarId v) {
        jm[net.variable(v).name] = distribution_json(net.variable(v), r.marginals.at(v), inf_digits);
      };
      if (queries.empty()) {
        for (const auto& [v, t] : r.marginals) emit(v);
      } else {
        for (VarId v : queries) emit(v);
      }
      doc["marginals"] = std::move(jm);
      doc["diagnostics"] = diagnostics_json(engine, r.diagnostics);
      log(verbose, err, "inference took " + std::to_string(seconds_since(t0)) + " s");
      out << doc.dump(2) << "\n";
    } else if (gen->parsed()) {
      if (gen_n == 0) throw UsageError("--n must be >= 1");
      const Network net = parse_network_auto(read_file(gen_model));
      const Dataset data = generate_dataset(net, gen_n, gen_seed, exec);
      write_file(gen_out, write_csv(data));
      Json s;
      s["rows"] = data.n_rows;
      s["seed"] = gen_seed;
      s["out"] = gen_out;
      out << s.dump(2) << "\n";
    } else if (ev_shd->parsed()) {
      const auto to_cpdag = [](const GraphDocument& d) {
        if (!d.is_dag) return d.graph;
        std::vector<std::vector<VarId>> parents(d.graph.size());
        for (const auto& e : d.graph.edges()) parents[static_cast<std::size_t>(e.to)].push_back(e.from);
        return dag_to_cpdag(parents);
      };
      const GraphDocument learned = parse_graph_auto(read_file(shd_learned));
      const GraphDocument truth = parse_graph_auto(read_file(shd_truth));
      const PdagGraph truth_aligned = align_graph(to_cpdag(truth), truth.variables, learned.variables);
      Json s;
      s["shd"] = shd(to_cpdag(learned), truth_aligned);
      out << s.dump() << "\n";
    } else if (ev_h->parsed()) {
      const auto load = [](const std::string& path) {
        try {
          return Json::parse(read_file(path)).at("marginals");
        } catch (const Json::exception& e) {
          throw Error(ErrorCode::kParse, "'" + path + "' is not an infer output: " + e.what());
        }
      };
      const Json a = load(h_a);
      const Json b = load(h_b);
      Json per = Json::object();
      double total = 0.0;
      std::size_t count = 0;
      for (const auto& [name, da] : a.items()) {
        if (!b.contains(name)) continue;
        const Json& db = b.at(name);
        std::vector<double> pa, pb;
        for (const auto& [state, p] : da.items()) {
          if (!db.contains(state)) throw Error(ErrorCode::kVariableMismatch, "state sets of '" + name + "' differ");
          pa.push_back(p.get<double>());
          pb.push_back(db.at(state).get<double>());
        }
        if (pa.size() != db.size()) throw Error(ErrorCode::kVariableMismatch, "state sets of '" + name + "' differ");
        const int card = static_cast<int>(pa.size());
        const double h = hellinger(PotentialTable({0}, {card}, pa), PotentialTable({0}, {card}, pb));
        per[name] = h;
        total += h;
        ++count;
      }
      if (count == 0) throw Error(ErrorCode::kVariableMismatch, "marginal sets share no variables");
      Json s;
      s["mean_hellinger"] = total / static_cast<double>(count);
      s["variables"] = std::move(per);
      out << s.dump(2) << "\n";
    } else if (conv->parsed()) {
      NetworkFormat format;
      try {
        format = parse_network_format(conv_to);
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      const std::string text = convert(parse_network_auto(read_file(conv_in)), format);
      if (conv_out.empty()) {
        out << text;
      } else {
        write_file(conv_out, text);
        Json s;
        s["format"] = conv_to;
        s["out"] = conv_out;
        out << s.dump(2) << "\n";
      }
    } else if (cls->parsed()) {
      const Engine engine = engine_from(cls_engine);
      const SamplerConfig cfg = cls_sampling.config();
      const Network net = parse_network_auto(read_file(cls_model));
      const VarId class_var = lookup_variable(net, cls_class);
      const Dataset data = load_csv_with_schema(read_file(cls_data), net.variables());
      const ClassificationResult r = classify(net, data, class_var, engine, cfg, exec);
      Json s;
      s["engine"] = std::string(engine_name(engine));
      s["class_var"] = cls_class;
      s["rows"] = data.n_rows;
      s["accuracy"] = r.accuracy;
      s["majority_baseline"] = r.majority_baseline;
      s["wall_time_s"] = seconds_since(t0);
      out << s.dump(2) << "\n";
    }
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace pgm::cli
