#include "forkseq/trace_io.hpp"

#include <sstream>

#include "json.hpp"

namespace forkseq {

std::string to_string(TraceSource s) {
  switch (s) {
    case TraceSource::generated: return "generated";
    case TraceSource::simulated: return "simulated";
    case TraceSource::external: return "external";
  }
  return "?";
}

TraceParseError::TraceParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

std::string serialize_trace(const TraceFile& t) {
  std::ostringstream out;
  nlohmann::json header;
  nlohmann::json regs = nlohmann::json::object();
  for (const auto& [reg, writer] : t.registers.registers()) regs[reg.name] = writer.value;
  header["comment"] = t.comment;
  header["registers"] = std::move(regs);
  header["source"] = to_string(t.source);
  out << header.dump() << "\n";
  for (const Event& e : t.history.events()) {
    nlohmann::json line;
    line["kind"] = e.kind == EventKind::invocation ? "inv" : "res";
    line["client"] = e.client.value;
    line["op"] = e.op == OpKind::write ? "write" : "read";
    line["reg"] = e.reg.name;
    if (e.value) {
      if (e.value->is_bottom()) {
        line["value"] = nullptr;
      } else {
        line["value"] = e.value->str();
      }
    }
    line["label"] = e.label;
    out << line.dump() << "\n";
  }
  return out.str();
}

namespace {

TraceSource parse_source(const std::string& s, std::size_t line) {
  if (s == "generated") return TraceSource::generated;
  if (s == "simulated") return TraceSource::simulated;
  if (s == "external") return TraceSource::external;
  throw TraceParseError(line, "unknown source tag: " + s);
}

}  // namespace

TraceFile parse_trace(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  TraceFile t;
  bool have_header = false;
  std::vector<Event> events;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw TraceParseError(line_no, std::string("not valid JSON: ") + e.what());
    }
    try {
      if (!have_header) {
        if (!j.contains("registers")) {
          throw TraceParseError(line_no, "first line must be a header with a registers map");
        }
        for (const auto& [name, writer] : j.at("registers").items()) {
          if (!writer.is_number_integer()) {
            throw TraceParseError(line_no, "register writer must be a client id");
          }
          t.registers.add_register(RegisterId{name}, ClientId{writer.get<int>()});
        }
        t.comment = j.value("comment", std::string());
        t.source = parse_source(j.value("source", std::string("external")), line_no);
        have_header = true;
        continue;
      }
      Event e;
      const std::string kind = j.at("kind").get<std::string>();
      if (kind == "inv") {
        e.kind = EventKind::invocation;
      } else if (kind == "res") {
        e.kind = EventKind::response;
      } else {
        throw TraceParseError(line_no, "kind must be inv or res");
      }
      e.client = ClientId{j.at("client").get<int>()};
      const std::string op = j.at("op").get<std::string>();
      if (op == "write") {
        e.op = OpKind::write;
      } else if (op == "read") {
        e.op = OpKind::read;
      } else {
        throw TraceParseError(line_no, "op must be read or write");
      }
      e.reg = RegisterId{j.at("reg").get<std::string>()};
      if (j.contains("value")) {
        if (j.at("value").is_null()) {
          e.value = Value::bottom();
        } else if (j.at("value").is_string()) {
          e.value = Value::data(j.at("value").get<std::string>());
        } else {
          throw TraceParseError(line_no, "value must be a string or null");
        }
      }
      e.label = j.value("label", std::string());
      events.push_back(std::move(e));
    } catch (const nlohmann::json::exception& e) {
      throw TraceParseError(line_no, std::string("missing or mistyped field: ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw TraceParseError(line_no, e.what());
    }
  }
  if (!have_header) throw TraceParseError(line_no, "trace has no header line");
  t.history = History(std::move(events));
  return t;
}

}  // namespace forkseq
