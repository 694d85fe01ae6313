// forkseq: check, generate, simulate, and explain shared-register traces.
//
// Exit codes across all subcommands: 0 the property holds (or the command
// succeeded), 1 the property fails, 2 the search was inconclusive, 3 the
// input was malformed or the invocation invalid.

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "forkseq/checkers.hpp"
#include "forkseq/explain.hpp"
#include "forkseq/history.hpp"
#include "forkseq/register_spec.hpp"
#include "forkseq/scenarios.hpp"
#include "forkseq/simulation.hpp"
#include "forkseq/trace_io.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitMalformed = 3;

int exit_code_for(forkseq::Outcome o) {
  switch (o) {
    case forkseq::Outcome::pass: return kExitPass;
    case forkseq::Outcome::fail: return kExitFail;
    case forkseq::Outcome::inconclusive: return kExitInconclusive;
  }
  return kExitMalformed;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

forkseq::TraceFile load_trace(const std::string& path) {
  return forkseq::parse_trace(read_file(path));
}

nlohmann::json op_json(const forkseq::Operation& op) {
  nlohmann::json j;
  j["client"] = op.client.value;
  j["op"] = op.op == forkseq::OpKind::read ? "read" : "write";
  j["reg"] = op.reg.name;
  if (op.op == forkseq::OpKind::write) {
    j["written"] = op.written.is_bottom() ? nlohmann::json() : nlohmann::json(op.written.str());
  }
  if (op.returned) {
    j["returned"] = op.returned->is_bottom() ? nlohmann::json() : nlohmann::json(op.returned->str());
  }
  j["inv_index"] = op.inv_index;
  if (op.res_index) j["res_index"] = *op.res_index;
  if (!op.label.empty()) j["label"] = op.label;
  return j;
}

nlohmann::json view_json(const forkseq::View& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& op : v.ops) arr.push_back(op_json(op));
  return arr;
}

struct CheckFlags {
  std::string trace_path;
  std::string property = "sc";
  std::vector<int> correct_clients;
  std::size_t max_ops = forkseq::SearchBudget{}.max_ops;
  std::size_t max_extensions = forkseq::SearchBudget{}.max_extensions;
  std::size_t max_nodes = forkseq::SearchBudget{}.max_nodes;
  bool json = false;
};

void add_budget_flags(CLI::App* cmd, CheckFlags& f) {
  cmd->add_option("--max-ops", f.max_ops, "Operation-count cap before the search gives up");
  cmd->add_option("--max-extensions", f.max_extensions, "Cap on completions of pending operations");
  cmd->add_option("--max-nodes", f.max_nodes, "Cap on search nodes per property check");
}

// Shared by check and explain: verdicts plus the precondition screening.
// Registers with several writers or repeated written values make the
// register-legality searches meaningless, so those traces are rejected as
// malformed rather than judged.
int screen_preconditions(const forkseq::TraceFile& t) {
  if (auto v = forkseq::check_unique_writes(t.history, t.registers)) {
    std::cerr << "malformed trace: " << v->message() << "\n";
    return kExitMalformed;
  }
  if (auto v = forkseq::check_single_writer(t.history, t.registers)) {
    std::cerr << "malformed trace: " << v->message() << "\n";
    return kExitMalformed;
  }
  return kExitPass;
}

int run_check(const CheckFlags& f) {
  forkseq::TraceFile t = load_trace(f.trace_path);
  forkseq::SearchBudget budget{f.max_ops, f.max_extensions, f.max_nodes};

  nlohmann::json report;
  report["property"] = f.property;
  forkseq::Outcome outcome = forkseq::Outcome::inconclusive;

  if (f.property == "sc" || f.property == "fsc") {
    if (int rc = screen_preconditions(t); rc != kExitPass) return rc;
  }

  if (f.property == "sc") {
    auto v = forkseq::check_sequential_consistency(t.history, t.registers, budget);
    outcome = v.outcome;
    if (v.witness) {
      std::string why;
      if (!forkseq::revalidate_sc_witness(t.history, t.registers, *v.witness, &why)) {
        std::cerr << "internal error: witness failed re-validation: " << why << "\n";
        return kExitMalformed;
      }
      report["witness"] = view_json(*v.witness);
      report["revalidated"] = true;
    }
    if (v.refutation) {
      nlohmann::json r;
      r["extensions_refuted"] = v.refutation->extensions_refuted;
      r["deepest_prefix"] = v.refutation->deepest_prefix;
      r["blocked"] = v.refutation->blocked;
      report["refutation"] = r;
    }
    if (v.reason) report["reason"] = *v.reason;
    report["budget_used"] = {{"extensions_tried", v.stats.extensions_tried},
                             {"nodes", v.stats.nodes}};
  } else if (f.property == "fsc") {
    auto v = forkseq::check_fork_sequential_consistency(t.history, t.registers, budget);
    outcome = v.outcome;
    if (v.views) {
      std::string why;
      if (!forkseq::revalidate_fsc_views(t.history, t.registers, *v.views, &why)) {
        std::cerr << "internal error: views failed re-validation: " << why << "\n";
        return kExitMalformed;
      }
      nlohmann::json views;
      for (const auto& [client, view] : *v.views) {
        views[std::to_string(client.value)] = view_json(view);
      }
      report["witness"] = views;
      report["revalidated"] = true;
    }
    if (v.reason) report["reason"] = *v.reason;
    report["budget_used"] = {{"extensions_tried", v.stats.extensions_tried},
                             {"nodes", v.stats.nodes}};
  } else if (f.property == "wf") {
    std::set<forkseq::ClientId> correct;
    for (int c : f.correct_clients) correct.insert(forkseq::ClientId{c});
    auto v = forkseq::check_wait_freedom(t.history, correct);
    outcome = v.outcome;
    if (v.pending) {
      report["pending"] = op_json(*v.pending);
      report["reason"] = "incomplete operation " + forkseq::describe(*v.pending);
    }
  } else {
    std::cerr << "unknown property: " << f.property << "\n";
    return kExitMalformed;
  }

  report["outcome"] = forkseq::to_string(outcome);
  if (f.json) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << f.property << ": " << forkseq::to_string(outcome) << "\n";
    if (report.contains("reason")) {
      std::cout << "  " << report["reason"].get<std::string>() << "\n";
    }
    if (report.contains("refutation")) {
      for (const auto& line : report["refutation"]["blocked"]) {
        std::cout << "  blocked: " << line.get<std::string>() << "\n";
      }
    }
  }
  return exit_code_for(outcome);
}

forkseq::Scenario build_scenario(const std::string& name, const forkseq::ScenarioParams& p) {
  if (name == "alpha") return forkseq::generate_alpha(p);
  if (name == "beta") return forkseq::generate_beta(p);
  if (name == "gamma") return forkseq::generate_gamma(p);
  throw std::invalid_argument("unknown scenario: " + name);
}

int run_generate(const std::string& scenario, int z, int l, const std::string& out) {
  forkseq::ScenarioParams p;
  p.z = z;
  p.l = l;
  forkseq::Scenario s = build_scenario(scenario, p);
  forkseq::TraceFile t;
  t.registers = s.registers;
  t.comment = s.comment;
  t.source = forkseq::TraceSource::generated;
  t.history = s.history;
  write_output(out, forkseq::serialize_trace(t));
  return kExitPass;
}

int run_simulate(const std::string& config_path, const std::string& builtin, int z,
                 const std::string& out) {
  forkseq::SimConfig cfg;
  if (!builtin.empty()) {
    if (builtin == "alpha") cfg = forkseq::alpha_config(z);
    else if (builtin == "beta") cfg = forkseq::beta_config(z);
    else if (builtin == "gamma") cfg = forkseq::gamma_config(z);
    else throw std::invalid_argument("unknown builtin config: " + builtin);
  } else {
    cfg = forkseq::parse_config(read_file(config_path));
  }

  forkseq::SimResult r = forkseq::run_simulation(cfg);
  forkseq::TraceFile t;
  t.registers = r.registers;
  t.source = forkseq::TraceSource::simulated;
  std::ostringstream comment;
  comment << "simulated run, "
          << (r.halted == forkseq::HaltReason::completed ? "halted: completed"
                                                         : "halted: step-limit")
          << ", " << r.delivered.size() << " messages delivered";
  if (!r.dangling_delays.empty()) {
    comment << ", " << r.dangling_delays.size() << " delay rule(s) never released";
  }
  t.comment = comment.str();
  t.history = r.history;
  write_output(out, forkseq::serialize_trace(t));
  return kExitPass;
}

int run_explain(const std::string& trace_path, const std::string& property) {
  forkseq::TraceFile t = load_trace(trace_path);
  forkseq::Explanation e;
  if (property == "sc" || property == "fsc") {
    if (int rc = screen_preconditions(t); rc != kExitPass) return rc;
  }
  if (property == "sc") {
    auto v = forkseq::check_sequential_consistency(t.history, t.registers);
    e = forkseq::explain_sc(t.history, t.registers, v);
  } else if (property == "fsc") {
    auto v = forkseq::check_fork_sequential_consistency(t.history, t.registers);
    e = forkseq::explain_fsc(t.history, t.registers, v);
  } else if (property == "wf") {
    auto v = forkseq::check_wait_freedom(t.history);
    e = forkseq::explain_wait_freedom(v);
  } else {
    std::cerr << "unknown property: " << property << "\n";
    return kExitMalformed;
  }
  std::cout << e.render();
  return exit_code_for(e.outcome);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shared-register trace checker: sequential consistency, fork sequential "
               "consistency, wait-freedom"};
  app.require_subcommand(1);

  CheckFlags cf;
  CLI::App* check = app.add_subcommand("check", "Decide a property of a trace file");
  check->add_option("trace", cf.trace_path, "Trace file to check")->required();
  check->add_option("--property", cf.property, "One of sc, fsc, wf")
      ->check(CLI::IsMember({"sc", "fsc", "wf"}));
  check->add_option("--correct-clients", cf.correct_clients,
                    "Clients assumed correct for wf (default: all)")
      ->delimiter(',');
  check->add_flag("--json", cf.json, "Emit the full report as JSON on stdout");
  add_budget_flags(check, cf);

  std::string gen_scenario;
  int gen_z = 4;
  int gen_l = 1;
  std::string gen_out;
  CLI::App* generate = app.add_subcommand("generate", "Emit a fixed two-client interleaving");
  generate->add_option("--scenario", gen_scenario, "One of alpha, beta, gamma")
      ->required()
      ->check(CLI::IsMember({"alpha", "beta", "gamma"}));
  generate->add_option("--z", gen_z, "Round in which the reader first sees the slow write");
  generate->add_option("--l", gen_l, "Index of the slow writer's read (must be 1)");
  generate->add_option("--out", gen_out, "Output path (default: stdout)");

  std::string sim_config;
  std::string sim_builtin;
  int sim_z = 4;
  std::string sim_out;
  CLI::App* simulate = app.add_subcommand("simulate", "Run a client/server simulation");
  auto* config_opt = simulate->add_option("--config", sim_config, "SimConfig JSON file");
  auto* builtin_opt = simulate->add_option("--builtin", sim_builtin,
                                           "Built-in config: alpha, beta or gamma")
                          ->check(CLI::IsMember({"alpha", "beta", "gamma"}));
  simulate->add_option("--z", sim_z, "Rounds parameter for --builtin");
  simulate->add_option("--out", sim_out, "Output path (default: stdout)");
  config_opt->excludes(builtin_opt);

  std::string exp_trace;
  std::string exp_property = "fsc";
  CLI::App* explain = app.add_subcommand("explain", "Walk through why a property fails");
  explain->add_option("trace", exp_trace, "Trace file to explain")->required();
  explain->add_option("--property", exp_property, "One of sc, fsc, wf")
      ->check(CLI::IsMember({"sc", "fsc", "wf"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitMalformed;
  }

  try {
    if (check->parsed()) return run_check(cf);
    if (generate->parsed()) return run_generate(gen_scenario, gen_z, gen_l, gen_out);
    if (simulate->parsed()) {
      if (sim_config.empty() && sim_builtin.empty()) {
        std::cerr << "simulate needs --config or --builtin\n";
        return kExitMalformed;
      }
      return run_simulate(sim_config, sim_builtin, sim_z, sim_out);
    }
    if (explain->parsed()) return run_explain(exp_trace, exp_property);
  } catch (const forkseq::TraceParseError& e) {
    std::cerr << "malformed trace: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMalformed;
  }
  return kExitMalformed;
}
