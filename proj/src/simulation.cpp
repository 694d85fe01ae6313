#include "forkseq/simulation.hpp"

#include <deque>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace forkseq {
namespace {

class CorrectServer : public ServerBehavior {
 public:
  explicit CorrectServer(const RegisterSpec& regs) {
    for (const auto& [reg, writer] : regs.registers()) store_[reg] = Value::bottom();
  }

  Message handle(const Message& req, std::size_t now) override {
    Message reply;
    reply.from = kServerParty;
    reply.to = req.from;
    reply.request = false;
    reply.op = req.op;
    reply.reg = req.reg;
    reply.label = req.label;
    reply.send_step = now;
    if (req.op == OpKind::write) {
      store_[req.reg] = req.value ? *req.value : Value::bottom();
    } else {
      auto it = store_.find(req.reg);
      reply.value = it == store_.end() ? Value::bottom() : it->second;
    }
    return reply;
  }

 private:
  std::map<RegisterId, Value> store_;
};

class ForkingServer : public ServerBehavior {
 public:
  ForkingServer(const RegisterSpec& regs, int z, ClientId victim) : z_(z), victim_(victim) {
    for (const auto& [reg, writer] : regs.registers()) branch_victim_[reg] = Value::bottom();
    branch_others_ = branch_victim_;
  }

  Message handle(const Message& req, std::size_t now) override {
    if (!forked_ && req.from == victim_.value && req.op == OpKind::write) {
      ++victim_writes_;
      if (victim_writes_ == z_ - 1) {
        forked_ = true;
        fork_step_ = now;
        branch_others_ = branch_victim_;  // freeze the others' state before this write
      }
    }
    bool apply_victim = false;
    bool apply_others = false;
    std::map<RegisterId, Value>* read_from = nullptr;
    if (!forked_) {
      apply_victim = true;
      read_from = &branch_victim_;
    } else if (req.from == victim_.value) {
      apply_victim = true;
      read_from = &branch_victim_;
    } else if (req.send_step < fork_step_) {
      // Already in transit at the split, so both branches must reflect it.
      // The construction sends at most one such message; more means the
      // protocol diverged from the modeled one.
      if (++in_transit_at_split_ > 1) {
        throw std::logic_error(
            "forking server: a second non-victim message was in transit at the split");
      }
      apply_victim = true;
      apply_others = true;
      read_from = &branch_others_;
    } else {
      apply_others = true;
      read_from = &branch_others_;
    }

    Message reply;
    reply.from = kServerParty;
    reply.to = req.from;
    reply.request = false;
    reply.op = req.op;
    reply.reg = req.reg;
    reply.label = req.label;
    reply.send_step = now;
    if (req.op == OpKind::write) {
      const Value v = req.value ? *req.value : Value::bottom();
      if (apply_victim) branch_victim_[req.reg] = v;
      if (apply_others) branch_others_[req.reg] = v;
    } else {
      auto it = read_from->find(req.reg);
      reply.value = it == read_from->end() ? Value::bottom() : it->second;
    }
    return reply;
  }

 private:
  int z_;
  ClientId victim_;
  bool forked_ = false;
  std::size_t fork_step_ = 0;
  int victim_writes_ = 0;
  int in_transit_at_split_ = 0;
  std::map<RegisterId, Value> branch_victim_;
  std::map<RegisterId, Value> branch_others_;
};

struct ClientState {
  const ClientScript* script = nullptr;
  std::size_t next = 0;
  bool waiting = false;
  std::size_t completed = 0;
  std::size_t sent = 0;
};

void validate_config(const SimConfig& cfg) {
  std::set<int> ids;
  for (const ClientScript& cs : cfg.clients) {
    if (cs.id.value < 1) throw std::invalid_argument("client ids must be positive");
    if (!ids.insert(cs.id.value).second) {
      throw std::invalid_argument("duplicate client id " + std::to_string(cs.id.value));
    }
    for (const ScriptOp& op : cs.ops) {
      if (!cfg.registers.contains(op.reg)) {
        throw std::invalid_argument("script references undeclared register " + op.reg.name);
      }
      if (op.op == OpKind::write && (!op.value || !op.value->is_data())) {
        throw std::invalid_argument("scripted write needs a data value");
      }
      if (op.op == OpKind::read && op.value) {
        throw std::invalid_argument("scripted read must not carry a value");
      }
    }
  }
  for (const DelayRule& r : cfg.delays) {
    if (r.from < 1) throw std::invalid_argument("delay rules match client senders only");
    if (r.ordinal < 1) throw std::invalid_argument("delay ordinals are 1-based");
  }
  if (cfg.server == ServerKind::forking) {
    if (cfg.fork_z < 4) {
      throw std::invalid_argument(
          "fork_z must be at least 4; earlier rounds cannot observe the slow write");
    }
    if (!ids.count(cfg.fork_victim.value)) {
      throw std::invalid_argument("fork victim has no script");
    }
  }
}

}  // namespace

std::unique_ptr<ServerBehavior> correct_server_protocol(const RegisterSpec& registers) {
  return std::make_unique<CorrectServer>(registers);
}

std::unique_ptr<ServerBehavior> forking_server(const RegisterSpec& registers, int z,
                                               ClientId victim) {
  if (z < 4) {
    throw std::invalid_argument(
        "fork_z must be at least 4; earlier rounds cannot observe the slow write");
  }
  return std::make_unique<ForkingServer>(registers, z, victim);
}

SimResult run_simulation(const SimConfig& cfg) {
  validate_config(cfg);
  std::unique_ptr<ServerBehavior> server =
      cfg.server == ServerKind::correct
          ? correct_server_protocol(cfg.registers)
          : forking_server(cfg.registers, cfg.fork_z, cfg.fork_victim);

  std::map<int, ClientState> clients;
  for (const ClientScript& cs : cfg.clients) clients[cs.id.value] = ClientState{&cs};
  std::map<std::pair<int, int>, std::deque<Message>> channels;
  std::map<int, std::size_t> server_sent;  // replies per destination, for ordinals
  std::map<std::pair<int, std::size_t>, std::size_t> delay_index;
  for (std::size_t i = 0; i < cfg.delays.size(); ++i) {
    delay_index[{cfg.delays[i].from, cfg.delays[i].ordinal}] = i;
  }
  std::vector<bool> released(cfg.delays.size(), false);

  std::vector<Event> events;
  std::vector<Message> delivered;
  std::vector<std::size_t> dangling;
  std::mt19937_64 rng(cfg.seed);
  std::size_t step = 0;

  auto gate_open = [&](const Gate& g) {
    auto it = clients.find(g.client);
    const std::size_t done = it == clients.end() ? 0 : it->second.completed;
    return done >= g.ops_completed;
  };
  auto head_blocked = [&](const Message& head) {
    auto it = delay_index.find({head.from, head.ordinal});
    if (it == delay_index.end() || released[it->second]) return false;
    return !gate_open(cfg.delays[it->second].until);
  };

  struct Action {
    bool deliver;       // else invoke
    int client;         // deliver: channel owner; invoke: invoking client
    bool to_server;     // deliver only: direction
  };
  auto enabled_actions = [&]() {
    std::vector<Action> acts;
    for (const auto& [id, st] : clients) {
      auto up = channels.find({id, kServerParty});
      if (up != channels.end() && !up->second.empty() && !head_blocked(up->second.front())) {
        acts.push_back({true, id, true});
      }
      auto down = channels.find({kServerParty, id});
      if (down != channels.end() && !down->second.empty()) {
        acts.push_back({true, id, false});
      }
    }
    for (const auto& [id, st] : clients) {
      if (st.waiting || st.next >= st.script->ops.size()) continue;
      const ScriptOp& op = st.script->ops[st.next];
      if (op.after && !gate_open(*op.after)) continue;
      acts.push_back({false, id, false});
    }
    return acts;
  };

  auto run_action = [&](const Action& a) {
    if (a.deliver) {
      auto& q = channels[{a.to_server ? a.client : kServerParty,
                          a.to_server ? kServerParty : a.client}];
      Message msg = q.front();
      q.pop_front();
      delivered.push_back(msg);
      if (a.to_server) {
        Message reply = server->handle(msg, step);
        reply.ordinal = ++server_sent[msg.from];
        channels[{kServerParty, msg.from}].push_back(reply);
      } else {
        ClientState& st = clients[a.client];
        Event e;
        e.kind = EventKind::response;
        e.client = ClientId{a.client};
        e.op = msg.op;
        e.reg = msg.reg;
        e.label = msg.label;
        if (msg.op == OpKind::read) e.value = msg.value ? *msg.value : Value::bottom();
        events.push_back(std::move(e));
        st.waiting = false;
        ++st.completed;
      }
    } else {
      ClientState& st = clients[a.client];
      const ScriptOp& op = st.script->ops[st.next];
      Event e;
      e.kind = EventKind::invocation;
      e.client = ClientId{a.client};
      e.op = op.op;
      e.reg = op.reg;
      e.label = op.label;
      if (op.op == OpKind::write) e.value = op.value;
      events.push_back(std::move(e));
      Message req;
      req.from = a.client;
      req.to = kServerParty;
      req.request = true;
      req.op = op.op;
      req.reg = op.reg;
      req.value = op.op == OpKind::write ? op.value : std::nullopt;
      req.label = op.label;
      req.send_step = step;
      req.ordinal = ++st.sent;
      channels[{a.client, kServerParty}].push_back(std::move(req));
      st.waiting = true;
      ++st.next;
    }
    ++step;
  };

  HaltReason halted = HaltReason::completed;
  while (true) {
    if (step >= cfg.max_steps) {
      bool outstanding = false;
      for (const auto& [key, q] : channels) outstanding = outstanding || !q.empty();
      for (const auto& [id, st] : clients) {
        outstanding = outstanding || st.waiting || st.next < st.script->ops.size();
      }
      halted = outstanding ? HaltReason::step_limit : HaltReason::completed;
      break;
    }
    std::vector<Action> acts = enabled_actions();
    if (acts.empty()) {
      // Quiescent. Release withheld messages whose gate can no longer open,
      // flagging their rules; if nothing was withheld, the run is complete.
      bool flushed = false;
      for (const auto& [key, q] : channels) {
        if (key.second != kServerParty || q.empty()) continue;
        auto it = delay_index.find({q.front().from, q.front().ordinal});
        if (it != delay_index.end() && !released[it->second]) {
          released[it->second] = true;
          dangling.push_back(it->second);
          flushed = true;
        }
      }
      if (!flushed) break;
      continue;
    }
    if (cfg.random_schedule) {
      run_action(acts[static_cast<std::size_t>(rng() % acts.size())]);
    } else {
      run_action(acts.front());
    }
  }

  SimResult result{History(std::move(events)), cfg.registers, std::move(delivered), halted,
                   std::move(dangling)};
  return result;
}

namespace {

RegisterSpec two_registers() {
  RegisterSpec spec;
  spec.add_register(RegisterId{"X1"}, ClientId{1});
  spec.add_register(RegisterId{"X2"}, ClientId{2});
  return spec;
}

ClientScript c2_rounds(int count) {
  ClientScript s{ClientId{2}, {}};
  for (int i = 1; i <= count; ++i) {
    s.ops.push_back(ScriptOp{OpKind::write, RegisterId{"X2"},
                             Value::data("v" + std::to_string(i)), std::nullopt,
                             "w_2^" + std::to_string(i)});
    s.ops.push_back(ScriptOp{OpKind::read, RegisterId{"X1"}, std::nullopt, std::nullopt,
                             "r_2^" + std::to_string(i)});
  }
  return s;
}

ClientScript c1_script(bool with_read) {
  ClientScript s{ClientId{1}, {}};
  s.ops.push_back(
      ScriptOp{OpKind::write, RegisterId{"X1"}, Value::data("u"), Gate{2, 4}, "w_1"});
  if (with_read) {
    s.ops.push_back(
        ScriptOp{OpKind::read, RegisterId{"X2"}, std::nullopt, std::nullopt, "r_1^1"});
  }
  return s;
}

void require_z(int z) {
  if (z < 4) {
    throw std::invalid_argument(
        "z must be at least 4; earlier rounds cannot observe the slow write");
  }
}

}  // namespace

SimConfig alpha_config(int z) {
  require_z(z);
  SimConfig cfg;
  cfg.registers = two_registers();
  cfg.clients = {c1_script(false), c2_rounds(z)};
  cfg.delays = {DelayRule{1, 1, Gate{2, static_cast<std::size_t>(2 * (z - 1))}}};
  return cfg;
}

SimConfig beta_config(int z) {
  require_z(z);
  SimConfig cfg;
  cfg.registers = two_registers();
  cfg.clients = {c1_script(true), c2_rounds(z - 2)};
  cfg.delays = {DelayRule{1, 1, Gate{2, static_cast<std::size_t>(2 * (z - 2))}}};
  return cfg;
}

SimConfig gamma_config(int z) {
  require_z(z);
  SimConfig cfg;
  cfg.registers = two_registers();
  cfg.clients = {c1_script(true), c2_rounds(z)};
  cfg.server = ServerKind::forking;
  cfg.fork_z = z;
  cfg.fork_victim = ClientId{2};
  cfg.delays = {DelayRule{1, 1, Gate{2, static_cast<std::size_t>(2 * (z - 1))}}};
  return cfg;
}

namespace {

nlohmann::json gate_json(const Gate& g) {
  return nlohmann::json{{"client", g.client}, {"ops_completed", g.ops_completed}};
}

Gate parse_gate(const nlohmann::json& j) {
  Gate g;
  g.client = j.at("client").get<int>();
  g.ops_completed = j.at("ops_completed").get<std::size_t>();
  return g;
}

}  // namespace

std::string serialize_config(const SimConfig& cfg) {
  nlohmann::json j;
  nlohmann::json regs = nlohmann::json::object();
  for (const auto& [reg, writer] : cfg.registers.registers()) regs[reg.name] = writer.value;
  j["registers"] = regs;
  j["server"] = cfg.server == ServerKind::correct ? "correct" : "forking";
  if (cfg.server == ServerKind::forking) {
    j["fork_z"] = cfg.fork_z;
    j["fork_victim"] = cfg.fork_victim.value;
  }
  nlohmann::json cls = nlohmann::json::array();
  for (const ClientScript& cs : cfg.clients) {
    nlohmann::json ops = nlohmann::json::array();
    for (const ScriptOp& op : cs.ops) {
      nlohmann::json o;
      o["op"] = op.op == OpKind::write ? "write" : "read";
      o["reg"] = op.reg.name;
      if (op.value) o["value"] = op.value->str();
      if (op.after) o["after"] = gate_json(*op.after);
      if (!op.label.empty()) o["label"] = op.label;
      ops.push_back(std::move(o));
    }
    cls.push_back(nlohmann::json{{"id", cs.id.value}, {"ops", std::move(ops)}});
  }
  j["clients"] = std::move(cls);
  nlohmann::json dls = nlohmann::json::array();
  for (const DelayRule& r : cfg.delays) {
    dls.push_back(nlohmann::json{
        {"from", r.from}, {"ordinal", r.ordinal}, {"until", gate_json(r.until)}});
  }
  j["delays"] = std::move(dls);
  j["random_schedule"] = cfg.random_schedule;
  j["seed"] = cfg.seed;
  j["max_steps"] = cfg.max_steps;
  return j.dump(2) + "\n";
}

SimConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    SimConfig cfg;
    for (const auto& [name, writer] : j.at("registers").items()) {
      cfg.registers.add_register(RegisterId{name}, ClientId{writer.get<int>()});
    }
    const std::string server = j.value("server", std::string("correct"));
    if (server == "correct") {
      cfg.server = ServerKind::correct;
    } else if (server == "forking") {
      cfg.server = ServerKind::forking;
    } else {
      throw std::invalid_argument("unknown server kind: " + server);
    }
    cfg.fork_z = j.value("fork_z", 4);
    cfg.fork_victim = ClientId{j.value("fork_victim", 2)};
    for (const auto& jc : j.value("clients", nlohmann::json::array())) {
      ClientScript cs;
      cs.id = ClientId{jc.at("id").get<int>()};
      for (const auto& jo : jc.value("ops", nlohmann::json::array())) {
        ScriptOp op;
        const std::string kind = jo.at("op").get<std::string>();
        if (kind == "write") {
          op.op = OpKind::write;
        } else if (kind == "read") {
          op.op = OpKind::read;
        } else {
          throw std::invalid_argument("unknown op kind: " + kind);
        }
        op.reg = RegisterId{jo.at("reg").get<std::string>()};
        if (jo.contains("value")) op.value = Value::data(jo.at("value").get<std::string>());
        if (jo.contains("after")) op.after = parse_gate(jo.at("after"));
        op.label = jo.value("label", std::string());
        cs.ops.push_back(std::move(op));
      }
      cfg.clients.push_back(std::move(cs));
    }
    for (const auto& jd : j.value("delays", nlohmann::json::array())) {
      DelayRule r;
      r.from = jd.at("from").get<int>();
      r.ordinal = jd.at("ordinal").get<std::size_t>();
      r.until = parse_gate(jd.at("until"));
      cfg.delays.push_back(r);
    }
    cfg.random_schedule = j.value("random_schedule", false);
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.max_steps = j.value("max_steps", std::size_t{100000});
    validate_config(cfg);
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config field error: ") + e.what());
  }
}

}  // namespace forkseq
