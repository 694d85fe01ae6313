#include <random>

#include "doctest.h"

#include "forkseq/history.hpp"
#include "forkseq/register_spec.hpp"
#include "forkseq/scenarios.hpp"
#include "forkseq/trace_io.hpp"
#include "support/enumerate.hpp"

using namespace forkseq;
using namespace forkseq::testsupport;

namespace {

TraceFile sample_trace() {
  TraceFile t;
  t.registers = RegisterSpec::swmr_defaults(2);
  t.comment = "two clients, one write each";
  t.source = TraceSource::generated;
  std::vector<Event> events;
  Event e;
  e.kind = EventKind::invocation;
  e.client = ClientId{1};
  e.op = OpKind::write;
  e.reg = RegisterId{"X1"};
  e.value = Value::data("u");
  e.label = "w_1";
  events.push_back(e);
  e.kind = EventKind::response;
  e.value.reset();
  events.push_back(e);
  e.kind = EventKind::invocation;
  e.client = ClientId{2};
  e.op = OpKind::read;
  e.reg = RegisterId{"X1"};
  e.label = "r_2^1";
  events.push_back(e);
  e.kind = EventKind::response;
  e.value = Value::bottom();
  events.push_back(e);
  t.history = History(std::move(events));
  return t;
}

}  // namespace

TEST_CASE("a trace survives a serialize/parse round trip") {
  TraceFile t = sample_trace();
  TraceFile back = parse_trace(serialize_trace(t));
  CHECK(back.registers == t.registers);
  CHECK(back.comment == t.comment);
  CHECK(back.source == t.source);
  CHECK(back.history == t.history);
  // Event equality ignores labels, so check those separately.
  REQUIRE(back.history.size() == t.history.size());
  for (std::size_t i = 0; i < t.history.size(); ++i) {
    CHECK(back.history.events()[i].label == t.history.events()[i].label);
  }
  // Serialization is canonical: a second pass gives the same bytes.
  CHECK(serialize_trace(back) == serialize_trace(t));
}

TEST_CASE("the fixed interleavings round-trip for every size") {
  for (int z = 4; z <= 6; ++z) {
    ScenarioParams p;
    p.z = z;
    for (const Scenario& s : {generate_alpha(p), generate_beta(p), generate_gamma(p)}) {
      TraceFile t;
      t.registers = s.registers;
      t.comment = s.comment;
      t.source = TraceSource::generated;
      t.history = s.history;
      TraceFile back = parse_trace(serialize_trace(t));
      CHECK(back.history == t.history);
      CHECK(back.registers == t.registers);
      CHECK(back.comment == t.comment);
    }
  }
}

TEST_CASE("enumerated two-client histories round-trip") {
  RegisterSpec spec = RegisterSpec::swmr_defaults(2);
  std::vector<Value> alphabet = {Value::data("a"), Value::data("b")};
  std::mt19937_64 rng(11);
  int checked = 0;
  for_each_pair(spec, alphabet, 2, true, 2, true, [&](const SeqPair& pair) {
    if (rng() % 17 != 0) return;
    TraceFile t;
    t.registers = spec;
    t.source = TraceSource::external;
    t.history = round_robin_history(pair);
    TraceFile back = parse_trace(serialize_trace(t));
    CHECK(back.history == t.history);
    ++checked;
  });
  CHECK(checked > 50);
}

TEST_CASE("bottom is encoded as JSON null, never as a string") {
  std::string text = serialize_trace(sample_trace());
  CHECK(text.find("\"value\":null") != std::string::npos);
  CHECK(text.find("bot") == std::string::npos);
  TraceFile back = parse_trace(text);
  auto ops = back.history.operations();
  REQUIRE(ops.size() == 2);
  REQUIRE(ops[1].returned.has_value());
  CHECK(ops[1].returned->is_bottom());
}

TEST_CASE("each source tag survives the round trip") {
  for (TraceSource s :
       {TraceSource::generated, TraceSource::simulated, TraceSource::external}) {
    TraceFile t = sample_trace();
    t.source = s;
    CHECK(parse_trace(serialize_trace(t)).source == s);
  }
}

TEST_CASE("blank and whitespace lines are skipped") {
  TraceFile t = sample_trace();
  std::string text = serialize_trace(t);
  // Inject noise after the header line.
  auto pos = text.find('\n');
  std::string padded =
      text.substr(0, pos + 1) + "\n  \t\n" + text.substr(pos + 1) + "\n\n";
  TraceFile back = parse_trace(padded);
  CHECK(back.history == t.history);
}

TEST_CASE("a missing header is rejected") {
  CHECK_THROWS_AS(parse_trace(""), TraceParseError);
  try {
    parse_trace("{\"kind\":\"inv\",\"client\":1,\"op\":\"read\",\"reg\":\"X1\"}\n");
    FAIL("expected a parse error");
  } catch (const TraceParseError& e) {
    CHECK(e.line() == 1);
    CHECK(std::string(e.what()).find("header") != std::string::npos);
  }
}

TEST_CASE("a non-JSON line is reported with its line number") {
  std::string text = serialize_trace(sample_trace());
  try {
    parse_trace(text + "this is not json\n");
    FAIL("expected a parse error");
  } catch (const TraceParseError& e) {
    CHECK(e.line() == 6);  // header + four events + the bad line
    CHECK(std::string(e.what()).find("line 6") != std::string::npos);
  }
}

TEST_CASE("field errors name the offense") {
  const std::string header =
      "{\"registers\":{\"X1\":1},\"comment\":\"\",\"source\":\"external\"}\n";

  try {
    parse_trace(header +
                "{\"kind\":\"begin\",\"client\":1,\"op\":\"read\",\"reg\":\"X1\"}\n");
    FAIL("expected a parse error");
  } catch (const TraceParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("kind") != std::string::npos);
  }

  try {
    parse_trace(header + "{\"kind\":\"inv\",\"client\":1,\"op\":\"swap\",\"reg\":\"X1\"}\n");
    FAIL("expected a parse error");
  } catch (const TraceParseError& e) {
    CHECK(std::string(e.what()).find("op") != std::string::npos);
  }

  // Missing required field.
  CHECK_THROWS_AS(parse_trace(header + "{\"kind\":\"inv\",\"client\":1,\"op\":\"read\"}\n"),
                  TraceParseError);
  // Numeric value.
  CHECK_THROWS_AS(
      parse_trace(header +
                  "{\"kind\":\"res\",\"client\":1,\"op\":\"read\",\"reg\":\"X1\","
                  "\"value\":3}\n"),
      TraceParseError);
  // Unknown source tag.
  CHECK_THROWS_AS(parse_trace("{\"registers\":{\"X1\":1},\"source\":\"dream\"}\n"),
                  TraceParseError);
  // Register writer must be an integer client id.
  CHECK_THROWS_AS(parse_trace("{\"registers\":{\"X1\":\"C1\"}}\n"), TraceParseError);
}

TEST_CASE("shape violations parse but leave the history malformed") {
  const std::string header = "{\"registers\":{\"X1\":1}}\n";
  // A write response carrying a value parses at the trace layer; the history
  // layer flags it.
  TraceFile t = parse_trace(
      header +
      "{\"kind\":\"inv\",\"client\":1,\"op\":\"write\",\"reg\":\"X1\",\"value\":\"u\"}\n" +
      "{\"kind\":\"res\",\"client\":1,\"op\":\"write\",\"reg\":\"X1\",\"value\":\"u\"}\n");
  CHECK_FALSE(t.history.well_formed());
  REQUIRE(t.history.violation().has_value());
  CHECK(t.history.violation()->rule == "write-res-value");
  CHECK(t.history.violation()->event_index == 1);
  CHECK_THROWS_AS(t.history.operations(), std::logic_error);
}

TEST_CASE("header defaults apply when optional fields are absent") {
  TraceFile t = parse_trace("{\"registers\":{\"X1\":1,\"X2\":2}}\n");
  CHECK(t.comment.empty());
  CHECK(t.source == TraceSource::external);
  CHECK(t.registers.writer_of(RegisterId{"X2"}) == ClientId{2});
  CHECK(t.history.size() == 0);
}
