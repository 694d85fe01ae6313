// Thin python surface: strings in (trace/config text), plain dicts and
// strings out. The C++ types stay on the C++ side.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "forkseq/checkers.hpp"
#include "forkseq/explain.hpp"
#include "forkseq/history.hpp"
#include "forkseq/register_spec.hpp"
#include "forkseq/scenarios.hpp"
#include "forkseq/simulation.hpp"
#include "forkseq/trace_io.hpp"

namespace py = pybind11;
using namespace forkseq;

namespace {

TraceFile trace_from_text(const std::string& text) {
  try {
    return parse_trace(text);
  } catch (const TraceParseError& e) {
    throw py::value_error(e.what());
  }
}

py::object value_obj(const Value& v) {
  if (v.is_bottom()) return py::none();
  return py::str(v.str());
}

py::dict op_dict(const Operation& op) {
  py::dict d;
  d["client"] = op.client.value;
  d["op"] = op.op == OpKind::read ? "read" : "write";
  d["reg"] = op.reg.name;
  if (op.op == OpKind::write) d["written"] = value_obj(op.written);
  if (op.returned) d["returned"] = value_obj(*op.returned);
  d["inv_index"] = op.inv_index;
  if (op.res_index) d["res_index"] = *op.res_index;
  d["label"] = op.label;
  return d;
}

py::list view_list(const View& v) {
  py::list l;
  for (const auto& op : v.ops) l.append(op_dict(op));
  return l;
}

Scenario scenario_by_name(const std::string& name, int z, int l) {
  ScenarioParams p;
  p.z = z;
  p.l = l;
  if (name == "alpha") return generate_alpha(p);
  if (name == "beta") return generate_beta(p);
  if (name == "gamma") return generate_gamma(p);
  throw py::value_error("unknown scenario: " + name);
}

void screen(const TraceFile& t) {
  if (auto v = check_unique_writes(t.history, t.registers)) throw py::value_error(v->message());
  if (auto v = check_single_writer(t.history, t.registers)) throw py::value_error(v->message());
}

}  // namespace

PYBIND11_MODULE(_forkseq, m) {
  m.doc() = "Shared-register history checking: sequential consistency, fork "
            "sequential consistency, wait-freedom";

  m.def(
      "generate",
      [](const std::string& scenario, int z, int l) {
        Scenario s = scenario_by_name(scenario, z, l);
        TraceFile t;
        t.registers = s.registers;
        t.comment = s.comment;
        t.source = TraceSource::generated;
        t.history = s.history;
        return serialize_trace(t);
      },
      py::arg("scenario"), py::arg("z") = 4, py::arg("l") = 1,
      "Emit one of the fixed two-client interleavings (alpha, beta, gamma) as trace text.");

  m.def(
      "simulate",
      [](const std::string& config_json) {
        SimConfig cfg = parse_config(config_json);
        SimResult r = run_simulation(cfg);
        TraceFile t;
        t.registers = r.registers;
        t.source = TraceSource::simulated;
        t.comment = r.halted == HaltReason::completed ? "simulated run, halted: completed"
                                                      : "simulated run, halted: step-limit";
        t.history = r.history;
        return serialize_trace(t);
      },
      py::arg("config_json"),
      "Run a client/server simulation from a JSON config and return the trace text.");

  m.def(
      "builtin_config",
      [](const std::string& scenario, int z) {
        if (scenario == "alpha") return serialize_config(alpha_config(z));
        if (scenario == "beta") return serialize_config(beta_config(z));
        if (scenario == "gamma") return serialize_config(gamma_config(z));
        throw py::value_error("unknown scenario: " + scenario);
      },
      py::arg("scenario"), py::arg("z") = 4,
      "JSON config reproducing a fixed interleaving under the simulator.");

  m.def(
      "check",
      [](const std::string& trace_text, const std::string& property) {
        TraceFile t = trace_from_text(trace_text);
        py::dict out;
        out["property"] = property;
        if (property == "sc" || property == "fsc") screen(t);
        if (property == "sc") {
          auto v = check_sequential_consistency(t.history, t.registers);
          out["outcome"] = to_string(v.outcome);
          if (v.witness) out["witness"] = view_list(*v.witness);
          if (v.reason) out["reason"] = *v.reason;
        } else if (property == "fsc") {
          auto v = check_fork_sequential_consistency(t.history, t.registers);
          out["outcome"] = to_string(v.outcome);
          if (v.views) {
            py::dict views;
            for (const auto& [client, view] : *v.views) {
              views[py::int_(client.value)] = view_list(view);
            }
            out["witness"] = views;
          }
          if (v.reason) out["reason"] = *v.reason;
        } else if (property == "wf") {
          auto v = check_wait_freedom(t.history);
          out["outcome"] = to_string(v.outcome);
          if (v.pending) out["pending"] = op_dict(*v.pending);
        } else {
          throw py::value_error("unknown property: " + property);
        }
        return out;
      },
      py::arg("trace_text"), py::arg("property") = "sc",
      "Decide sc, fsc or wf on trace text; returns a dict with at least 'outcome'.");

  m.def(
      "explain",
      [](const std::string& trace_text, const std::string& property) {
        TraceFile t = trace_from_text(trace_text);
        if (property == "sc" || property == "fsc") screen(t);
        if (property == "sc") {
          auto v = check_sequential_consistency(t.history, t.registers);
          return explain_sc(t.history, t.registers, v).render();
        }
        if (property == "fsc") {
          auto v = check_fork_sequential_consistency(t.history, t.registers);
          return explain_fsc(t.history, t.registers, v).render();
        }
        if (property == "wf") {
          return explain_wait_freedom(check_wait_freedom(t.history)).render();
        }
        throw py::value_error("unknown property: " + property);
      },
      py::arg("trace_text"), py::arg("property") = "fsc",
      "Prose walk through why a property fails on trace text.");
}
