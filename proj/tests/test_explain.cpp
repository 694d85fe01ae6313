#include <string>
#include <vector>

#include "doctest.h"

#include "forkseq/checkers.hpp"
#include "forkseq/explain.hpp"
#include "forkseq/history.hpp"
#include "forkseq/register_spec.hpp"
#include "forkseq/scenarios.hpp"

using namespace forkseq;

namespace {

Event ev(EventKind kind, int client, OpKind op, const std::string& reg,
         std::optional<Value> value = std::nullopt, const std::string& label = "") {
  Event e;
  e.kind = kind;
  e.client = ClientId{client};
  e.op = op;
  e.reg = RegisterId{reg};
  e.value = std::move(value);
  e.label = label;
  return e;
}

bool mentions(const ExplanationStep& s, const std::string& token) {
  return s.detail.find(token) != std::string::npos;
}

}  // namespace

TEST_CASE("the forked run's view refutation walks the four forced facts") {
  Scenario g = generate_gamma({});
  auto v = check_fork_sequential_consistency(g.history, g.registers);
  REQUIRE(v.outcome == Outcome::fail);
  Explanation e = explain_fsc(g.history, g.registers, v);
  CHECK(e.outcome == Outcome::fail);
  REQUIRE(e.steps.size() == 4);
  CHECK(e.steps[0].title == "forced placement");
  CHECK(e.steps[1].title == "prefix agreement");
  CHECK(e.steps[2].title == "own order");
  CHECK(e.steps[3].title == "stale read");

  // Step 1 pins the slow write between the last stale and the first fresh read.
  CHECK(mentions(e.steps[0], "w_1"));
  CHECK(mentions(e.steps[0], "r_2^3"));
  CHECK(mentions(e.steps[0], "r_2^4"));
  CHECK(mentions(e.steps[0], "only write"));
  // Step 2 transfers the fast client's writes into the writer's view.
  CHECK(mentions(e.steps[1], "w_2^2"));
  CHECK(mentions(e.steps[1], "w_2^3"));
  CHECK(mentions(e.steps[1], "identical prefixes"));
  // Step 3 places the writer's read after its own write.
  CHECK(mentions(e.steps[2], "r_1^1"));
  CHECK(mentions(e.steps[2], "w_1"));
  // Step 4 derives the contradiction: the read's value was overwritten.
  CHECK(mentions(e.steps[3], "r_1^1"));
  CHECK(mentions(e.steps[3], "v2"));
  CHECK(mentions(e.steps[3], "w_2^3"));
  CHECK(mentions(e.steps[3], "no legal placement"));

  std::string text = e.render();
  CHECK(text.find("1. [forced placement]") != std::string::npos);
  CHECK(text.find("4. [stale read]") != std::string::npos);
}

TEST_CASE("the chain survives larger round counts") {
  for (int z = 5; z <= 6; ++z) {
    ScenarioParams p;
    p.z = z;
    Scenario g = generate_gamma(p);
    auto v = check_fork_sequential_consistency(g.history, g.registers);
    REQUIRE(v.outcome == Outcome::fail);
    Explanation e = explain_fsc(g.history, g.registers, v);
    REQUIRE(e.steps.size() == 4);
    CHECK(e.steps[1].title == "prefix agreement");
    // The pinning reads move with z.
    CHECK(mentions(e.steps[0], "r_2^" + std::to_string(z)));
    CHECK(mentions(e.steps[0], "r_2^" + std::to_string(z - 1)));
  }
}

TEST_CASE("the single-permutation variant argues through order transfer") {
  Scenario g = generate_gamma({});
  auto v = check_sequential_consistency(g.history, g.registers);
  REQUIRE(v.outcome == Outcome::fail);
  Explanation e = explain_sc(g.history, g.registers, v);
  REQUIRE(e.steps.size() == 4);
  CHECK(e.steps[1].title == "order transfer");
  CHECK(mentions(e.steps[1], "permutation"));
  CHECK(mentions(e.steps[1], "w_2^2"));
  // No per-client views exist in this argument.
  for (const auto& s : e.steps) CHECK_FALSE(mentions(s, "view of"));
}

TEST_CASE("passing histories have nothing to explain") {
  Scenario a = generate_alpha({});
  auto sc = check_sequential_consistency(a.history, a.registers);
  REQUIRE(sc.outcome == Outcome::pass);
  Explanation e = explain_sc(a.history, a.registers, sc);
  CHECK(e.outcome == Outcome::pass);
  CHECK(e.steps.empty());
  CHECK(e.render() == "no counterexample\n");

  auto fsc = check_fork_sequential_consistency(a.history, a.registers);
  REQUIRE(fsc.outcome == Outcome::pass);
  CHECK(explain_fsc(a.history, a.registers, fsc).render() == "no counterexample\n");
}

TEST_CASE("a read of a value nothing wrote is its own refutation") {
  RegisterSpec spec = RegisterSpec::swmr_defaults(2);
  History h({
      ev(EventKind::invocation, 1, OpKind::write, "X1", Value::data("a")),
      ev(EventKind::response, 1, OpKind::write, "X1"),
      ev(EventKind::invocation, 2, OpKind::read, "X1"),
      ev(EventKind::response, 2, OpKind::read, "X1", Value::data("zz")),
  });
  auto v = check_sequential_consistency(h, spec);
  REQUIRE(v.outcome == Outcome::fail);
  Explanation e = explain_sc(h, spec, v);
  REQUIRE(e.steps.size() == 1);
  CHECK(e.steps[0].title == "unknown value");
  CHECK(mentions(e.steps[0], "zz"));

  auto fv = check_fork_sequential_consistency(h, spec);
  REQUIRE(fv.outcome == Outcome::fail);
  Explanation fe = explain_fsc(h, spec, fv);
  REQUIRE(fe.steps.size() == 1);
  CHECK(fe.steps[0].title == "unknown value");
}

TEST_CASE("failures outside the derived patterns fall back to the search trail") {
  // One client writes and then reads its own register as still unwritten.
  RegisterSpec spec = RegisterSpec::swmr_defaults(1);
  History h({
      ev(EventKind::invocation, 1, OpKind::write, "X1", Value::data("a"), "w"),
      ev(EventKind::response, 1, OpKind::write, "X1"),
      ev(EventKind::invocation, 1, OpKind::read, "X1", std::nullopt, "r"),
      ev(EventKind::response, 1, OpKind::read, "X1", Value::bottom()),
  });
  auto v = check_sequential_consistency(h, spec);
  REQUIRE(v.outcome == Outcome::fail);
  Explanation e = explain_sc(h, spec, v);
  REQUIRE(!e.steps.empty());
  CHECK(e.steps[0].title == "refuted");
  // The refutation trail is surfaced when the checker recorded one.
  REQUIRE(v.refutation.has_value());
  if (!v.refutation->deepest_prefix.empty()) {
    REQUIRE(e.steps.size() >= 2);
    CHECK(e.steps[1].title == "deepest prefix");
  }
}

TEST_CASE("an exhausted budget is reported as such") {
  ScVerdict v;
  v.outcome = Outcome::inconclusive;
  v.reason = "node budget exhausted";
  Scenario g = generate_gamma({});
  Explanation e = explain_sc(g.history, g.registers, v);
  CHECK(e.outcome == Outcome::inconclusive);
  REQUIRE(e.steps.size() == 1);
  CHECK(e.steps[0].title == "inconclusive");
  CHECK(mentions(e.steps[0], "node budget exhausted"));

  FscVerdict fv;
  fv.outcome = Outcome::inconclusive;
  Explanation fe = explain_fsc(g.history, g.registers, fv);
  REQUIRE(fe.steps.size() == 1);
  CHECK(fe.steps[0].title == "inconclusive");
  CHECK(mentions(fe.steps[0], "budget"));
}

TEST_CASE("a hung operation is named in the liveness explanation") {
  RegisterSpec spec = RegisterSpec::swmr_defaults(2);
  History h({
      ev(EventKind::invocation, 1, OpKind::write, "X1", Value::data("a"), "w_1"),
  });
  auto v = check_wait_freedom(h);
  REQUIRE(v.outcome == Outcome::fail);
  Explanation e = explain_wait_freedom(v);
  CHECK(e.outcome == Outcome::fail);
  REQUIRE(e.steps.size() == 1);
  CHECK(e.steps[0].title == "pending operation");
  CHECK(mentions(e.steps[0], "never receives a response"));

  History done({
      ev(EventKind::invocation, 1, OpKind::write, "X1", Value::data("a")),
      ev(EventKind::response, 1, OpKind::write, "X1"),
  });
  CHECK(explain_wait_freedom(check_wait_freedom(done)).render() == "no counterexample\n");
}
