#include "forkseq/scenarios.hpp"

#include <stdexcept>

namespace forkseq {
namespace {

constexpr int kC1 = 1;
constexpr int kC2 = 2;

struct Builder {
  std::vector<Event> events;
  const ValueNames& names;

  explicit Builder(const ValueNames& n) : names(n) {}

  std::string v(int i) const { return names.v_prefix + std::to_string(i); }

  void ev(EventKind kind, int client, OpKind op, const std::string& reg,
          std::optional<Value> value, const std::string& label) {
    Event e;
    e.kind = kind;
    e.client = ClientId{client};
    e.op = op;
    e.reg = RegisterId{reg};
    e.value = std::move(value);
    e.label = label;
    events.push_back(std::move(e));
  }

  // One complete round of C2: write v_i to X2, then read X1 returning ret.
  void round(int i, const Value& ret) {
    const std::string wl = "w_2^" + std::to_string(i);
    const std::string rl = "r_2^" + std::to_string(i);
    ev(EventKind::invocation, kC2, OpKind::write, "X2", Value::data(v(i)), wl);
    ev(EventKind::response, kC2, OpKind::write, "X2", std::nullopt, wl);
    ev(EventKind::invocation, kC2, OpKind::read, "X1", std::nullopt, rl);
    ev(EventKind::response, kC2, OpKind::read, "X1", ret, rl);
  }

  void inv_w1() {
    ev(EventKind::invocation, kC1, OpKind::write, "X1", Value::data(names.u), "w_1");
  }
  void res_w1() { ev(EventKind::response, kC1, OpKind::write, "X1", std::nullopt, "w_1"); }

  void read_by_c1(const Value& ret) {
    ev(EventKind::invocation, kC1, OpKind::read, "X2", std::nullopt, "r_1^1");
    ev(EventKind::response, kC1, OpKind::read, "X2", ret, "r_1^1");
  }
};

void validate(const ScenarioParams& p) {
  if (p.z < 4) {
    throw std::invalid_argument(
        "z must be at least 4: the first two rounds precede the write of u, and the round "
        "during which its request is in transit still reads bottom, so the earliest round "
        "that can read u is the fourth");
  }
  if (p.l < 1) throw std::invalid_argument("l must be at least 1");
  if (p.l > 1) {
    throw std::invalid_argument(
        "l must be 1: with one request/reply round per operation the write of v_{z-2} is "
        "applied before C1's first read is served, so that read already returns v_{z-2}");
  }
}

RegisterSpec two_registers() {
  RegisterSpec spec;
  spec.add_register(RegisterId{"X1"}, ClientId{kC1});
  spec.add_register(RegisterId{"X2"}, ClientId{kC2});
  return spec;
}

}  // namespace

Scenario generate_alpha(const ScenarioParams& p) {
  validate(p);
  Builder b(p.names);
  b.round(1, Value::bottom());
  b.round(2, Value::bottom());
  b.inv_w1();
  for (int i = 3; i <= p.z - 1; ++i) b.round(i, Value::bottom());
  std::size_t t0 = b.events.size() - 4;  // invocation of the (z-1)-th write
  b.res_w1();
  b.round(p.z, Value::data(p.names.u));
  Scenario s{History(std::move(b.events)), two_registers(),
             "fair run, correct server: C1's write request stays in transit across rounds 3.." +
                 std::to_string(p.z - 1) + ", round " + std::to_string(p.z) +
                 " reads it back (one request/reply round per operation)",
             t0};
  return s;
}

Scenario generate_beta(const ScenarioParams& p) {
  validate(p);
  Builder b(p.names);
  b.round(1, Value::bottom());
  b.round(2, Value::bottom());
  b.inv_w1();
  for (int i = 3; i <= p.z - 2; ++i) b.round(i, Value::bottom());
  b.res_w1();
  b.read_by_c1(Value::data(b.v(p.z - 2)));
  Scenario s{History(std::move(b.events)), two_registers(),
             "fair run, correct server: C2 stops after round " + std::to_string(p.z - 2) +
                 ", then C1's write completes and C1 reads C2's last value (one request/reply "
                 "round per operation)",
             std::nullopt};
  return s;
}

Scenario generate_gamma(const ScenarioParams& p) {
  validate(p);
  Builder b(p.names);
  b.round(1, Value::bottom());
  b.round(2, Value::bottom());
  b.inv_w1();
  for (int i = 3; i <= p.z - 1; ++i) b.round(i, Value::bottom());
  std::size_t t0 = b.events.size() - 4;
  b.res_w1();
  b.read_by_c1(Value::data(b.v(p.z - 2)));
  b.round(p.z, Value::data(p.names.u));
  Scenario s{History(std::move(b.events)), two_registers(),
             "forked run: from round " + std::to_string(p.z - 1) +
                 " on the server answers C1 from a state that hides C2's later rounds and "
                 "answers C2 as in the fair run; per-client events match the fair runs exactly",
             t0};
  return s;
}

}  // namespace forkseq
