#include <map>

#include "doctest.h"

#include "forkseq/checkers.hpp"
#include "forkseq/history.hpp"
#include "forkseq/register_spec.hpp"
#include "forkseq/scenarios.hpp"
#include "forkseq/simulation.hpp"
#include "forkseq/trace_io.hpp"

using namespace forkseq;

namespace {

ScriptOp write_op(const std::string& reg, const std::string& v, const std::string& label = "") {
  ScriptOp op;
  op.op = OpKind::write;
  op.reg = RegisterId{reg};
  op.value = Value::data(v);
  op.label = label;
  return op;
}

ScriptOp read_op(const std::string& reg, const std::string& label = "") {
  ScriptOp op;
  op.op = OpKind::read;
  op.reg = RegisterId{reg};
  op.label = label;
  return op;
}

SimConfig two_client_base() {
  SimConfig cfg;
  cfg.registers = RegisterSpec::swmr_defaults(2);
  cfg.clients.resize(2);
  cfg.clients[0].id = ClientId{1};
  cfg.clients[1].id = ClientId{2};
  return cfg;
}

}  // namespace

TEST_CASE("empty scripts complete immediately with an empty history") {
  SimConfig cfg = two_client_base();
  auto r = run_simulation(cfg);
  CHECK(r.history.size() == 0);
  CHECK(r.halted == HaltReason::completed);
  CHECK(r.delivered.empty());
  CHECK(r.dangling_delays.empty());
}

TEST_CASE("a correct server sequentializes write then read") {
  SimConfig cfg = two_client_base();
  cfg.clients[1].ops = {write_op("X2", "v1"), read_op("X2")};
  auto r = run_simulation(cfg);
  CHECK(r.halted == HaltReason::completed);
  auto ops = r.history.operations();
  REQUIRE(ops.size() == 2);
  CHECK(to_string(*ops[1].returned) == "v1");
}

TEST_CASE("the reader's opening rounds see only the initial value") {
  SimConfig cfg = two_client_base();
  cfg.clients[1].ops = {write_op("X2", "v1"), read_op("X1"), write_op("X2", "v2"),
                        read_op("X1")};
  auto r = run_simulation(cfg);
  CHECK(r.halted == HaltReason::completed);
  auto ops = r.history.operations();
  REQUIRE(ops.size() == 4);
  for (const auto& op : ops) {
    CHECK(op.complete());
    if (op.op == OpKind::read) CHECK(op.returned->is_bottom());
  }
}

TEST_CASE("builtin configs reproduce the generated interleavings event for event") {
  for (int z = 4; z <= 6; ++z) {
    ScenarioParams p;
    p.z = z;

    auto alpha = run_simulation(alpha_config(z));
    CHECK(alpha.halted == HaltReason::completed);
    CHECK(alpha.dangling_delays.empty());
    CHECK(alpha.history == generate_alpha(p).history);

    auto beta = run_simulation(beta_config(z));
    CHECK(beta.halted == HaltReason::completed);
    CHECK(beta.history == generate_beta(p).history);

    auto gamma = run_simulation(gamma_config(z));
    CHECK(gamma.halted == HaltReason::completed);
    CHECK(gamma.history == generate_gamma(p).history);
  }
}

TEST_CASE("the forked run serializes byte-identically to the generated one") {
  auto sim = run_simulation(gamma_config(4));
  auto gen = generate_gamma({});

  TraceFile a;
  a.registers = sim.registers;
  a.source = TraceSource::external;
  a.history = sim.history;
  TraceFile b;
  b.registers = gen.registers;
  b.source = TraceSource::external;
  b.history = gen.history;
  CHECK(serialize_trace(a) == serialize_trace(b));
}

TEST_CASE("identical configs give identical results, step for step") {
  SimConfig cfg = gamma_config(5);
  auto r1 = run_simulation(cfg);
  auto r2 = run_simulation(cfg);
  CHECK(r1.history == r2.history);
  REQUIRE(r1.delivered.size() == r2.delivered.size());
  for (std::size_t i = 0; i < r1.delivered.size(); ++i) {
    CHECK(r1.delivered[i].from == r2.delivered[i].from);
    CHECK(r1.delivered[i].to == r2.delivered[i].to);
    CHECK(r1.delivered[i].ordinal == r2.delivered[i].ordinal);
    CHECK(r1.delivered[i].send_step == r2.delivered[i].send_step);
  }
}

TEST_CASE("the random scheduler is deterministic per seed and FIFO per channel") {
  SimConfig cfg = two_client_base();
  cfg.clients[0].ops = {write_op("X1", "u"), read_op("X2"), read_op("X1")};
  cfg.clients[1].ops = {write_op("X2", "v1"), read_op("X1"), write_op("X2", "v2")};
  cfg.random_schedule = true;

  for (std::uint64_t seed : {1u, 7u, 42u}) {
    cfg.seed = seed;
    auto r1 = run_simulation(cfg);
    auto r2 = run_simulation(cfg);
    CHECK(r1.history == r2.history);
    CHECK(r1.halted == HaltReason::completed);

    // FIFO: per channel, both send steps and ordinals only grow.
    std::map<std::pair<int, int>, std::pair<std::size_t, std::size_t>> last;
    for (const Message& m : r1.delivered) {
      auto key = std::make_pair(m.from, m.to);
      auto it = last.find(key);
      if (it != last.end()) {
        CHECK(m.ordinal > it->second.first);
        CHECK(m.send_step >= it->second.second);
      }
      last[key] = {m.ordinal, m.send_step};
    }

    // A correct-server run stays sequentially consistent and wait-free.
    auto sc = check_sequential_consistency(r1.history, cfg.registers);
    CHECK(sc.outcome == Outcome::pass);
    CHECK(check_wait_freedom(r1.history).outcome == Outcome::pass);
  }
}

TEST_CASE("delay rules shift delivery without reordering the channel") {
  SimConfig cfg = two_client_base();
  cfg.clients[0].ops = {write_op("X1", "u"), read_op("X1")};
  cfg.clients[1].ops = {write_op("X2", "v1"), write_op("X2", "v2")};
  // Hold the writer's first request until the other client finishes both ops.
  DelayRule rule;
  rule.from = 1;
  rule.ordinal = 1;
  rule.until = Gate{2, 2};
  cfg.delays = {rule};

  auto r = run_simulation(cfg);
  CHECK(r.halted == HaltReason::completed);
  CHECK(r.dangling_delays.empty());

  // Client 1's first request arrives after both of client 2's, and client
  // 1's second request still arrives after its first.
  std::vector<std::size_t> c1_deliveries;
  std::size_t c2_deliveries_before_c1 = 0;
  bool c1_seen = false;
  for (const Message& m : r.delivered) {
    if (m.to != kServerParty) continue;
    if (m.from == 1) {
      c1_seen = true;
      c1_deliveries.push_back(m.ordinal);
    }
    if (m.from == 2 && !c1_seen) ++c2_deliveries_before_c1;
  }
  CHECK(c2_deliveries_before_c1 == 2);
  REQUIRE(c1_deliveries.size() == 2);
  CHECK(c1_deliveries[0] < c1_deliveries[1]);
}

TEST_CASE("a delay rule whose gate never opens is flagged and flushed") {
  SimConfig cfg = two_client_base();
  cfg.clients[0].ops = {write_op("X1", "u")};
  DelayRule rule;
  rule.from = 1;
  rule.ordinal = 1;
  rule.until = Gate{2, 99};
  cfg.delays = {rule};

  auto r = run_simulation(cfg);
  CHECK(r.halted == HaltReason::completed);
  REQUIRE(r.dangling_delays.size() == 1);
  CHECK(r.dangling_delays[0] == 0);
  // The message was still delivered in the end and the operation completed.
  auto ops = r.history.operations();
  REQUIRE(ops.size() == 1);
  CHECK(ops[0].complete());
}

TEST_CASE("a zero step budget halts with an empty history") {
  SimConfig cfg = two_client_base();
  cfg.clients[0].ops = {write_op("X1", "u")};
  cfg.max_steps = 0;
  auto r = run_simulation(cfg);
  CHECK(r.history.size() == 0);
  CHECK(r.halted == HaltReason::step_limit);
}

TEST_CASE("a small step budget returns a well-formed partial history") {
  SimConfig cfg = gamma_config(4);
  cfg.max_steps = 5;
  auto r = run_simulation(cfg);
  CHECK(r.halted == HaltReason::step_limit);
  CHECK(r.history.well_formed());
  CHECK(r.history.size() < generate_gamma({}).history.size());
}

TEST_CASE("a second non-victim message in transit at the split aborts the run") {
  // The two bystanders invoke first (low ids win the priority scheduler), both
  // requests are withheld past the victim's whole script, and so both cross
  // the split point in transit.
  SimConfig cfg;
  cfg.registers = RegisterSpec::swmr_defaults(3);
  cfg.clients.resize(3);
  cfg.clients[0].id = ClientId{1};
  cfg.clients[0].ops = {write_op("X1", "a")};
  cfg.clients[1].id = ClientId{2};
  cfg.clients[1].ops = {write_op("X2", "b")};
  cfg.clients[2].id = ClientId{3};
  cfg.clients[2].ops = {write_op("X3", "v1"), write_op("X3", "v2"), write_op("X3", "v3"),
                        read_op("X1")};
  cfg.server = ServerKind::forking;
  cfg.fork_z = 4;
  cfg.fork_victim = ClientId{3};
  DelayRule r1;
  r1.from = 1;
  r1.ordinal = 1;
  r1.until = Gate{3, 4};
  DelayRule r2;
  r2.from = 2;
  r2.ordinal = 1;
  r2.until = Gate{3, 4};
  cfg.delays = {r1, r2};

  CHECK_THROWS_AS(run_simulation(cfg), std::logic_error);
}

TEST_CASE("configs round-trip through their serialization") {
  for (const SimConfig& cfg : {alpha_config(5), beta_config(4), gamma_config(6)}) {
    std::string text = serialize_config(cfg);
    SimConfig back = parse_config(text);
    CHECK(serialize_config(back) == text);
    CHECK(run_simulation(back).history == run_simulation(cfg).history);
  }
}

TEST_CASE("invalid configs are rejected with a reason") {
  SimConfig cfg = two_client_base();
  cfg.clients[0].ops = {read_op("X9")};
  CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);

  cfg = two_client_base();
  ScriptOp bad_write;
  bad_write.op = OpKind::write;
  bad_write.reg = RegisterId{"X1"};
  cfg.clients[0].ops = {bad_write};
  CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);

  cfg = two_client_base();
  ScriptOp bad_read = read_op("X1");
  bad_read.value = Value::data("x");
  cfg.clients[0].ops = {bad_read};
  CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);

  cfg = two_client_base();
  cfg.clients[1].id = ClientId{1};
  CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);

  cfg = two_client_base();
  cfg.server = ServerKind::forking;
  cfg.fork_z = 3;
  CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);

  cfg = two_client_base();
  cfg.server = ServerKind::forking;
  cfg.fork_victim = ClientId{7};
  CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);

  cfg = two_client_base();
  DelayRule rule;
  rule.from = 1;
  rule.ordinal = 0;
  cfg.delays = {rule};
  CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);

  CHECK_THROWS_AS(parse_config("not json"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("{}"), std::invalid_argument);
}
