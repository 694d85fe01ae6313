#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "forkseq/history.hpp"
#include "forkseq/register_spec.hpp"

namespace forkseq {

// Party 0 is the server; clients use their (positive) ids.
inline constexpr int kServerParty = 0;

// Opens once the named client has completed at least ops_completed operations.
struct Gate {
  int client = 0;
  std::size_t ops_completed = 0;
};

struct ScriptOp {
  OpKind op = OpKind::read;
  RegisterId reg;
  std::optional<Value> value;  // write payload
  std::optional<Gate> after;   // hold the invocation until the gate opens
  std::string label;
};

struct ClientScript {
  ClientId id{0};
  std::vector<ScriptOp> ops;
};

// Withholds the ordinal-th message (1-based) sent by `from` to the server
// until the gate opens. Later messages on that channel queue behind it, so
// FIFO order is preserved.
struct DelayRule {
  int from = 0;
  std::size_t ordinal = 1;
  Gate until;
};

enum class ServerKind { correct, forking };

struct SimConfig {
  RegisterSpec registers;
  std::vector<ClientScript> clients;
  ServerKind server = ServerKind::correct;
  int fork_z = 4;           // forking server: split on the victim's (z-1)-th write request
  ClientId fork_victim{2};
  std::vector<DelayRule> delays;
  bool random_schedule = false;  // default: deterministic priority scheduler
  std::uint64_t seed = 0;
  std::size_t max_steps = 100000;
};

struct Message {
  int from = 0;
  int to = 0;
  bool request = true;  // false: server reply
  OpKind op = OpKind::read;
  RegisterId reg;
  std::optional<Value> value;  // request: write payload; reply: read return
  std::string label;
  std::size_t send_step = 0;
  std::size_t ordinal = 0;  // per-channel sequence number, 1-based
};

enum class HaltReason { completed, step_limit };

struct SimResult {
  History history;
  RegisterSpec registers;
  std::vector<Message> delivered;  // in delivery order
  HaltReason halted = HaltReason::completed;
  // Indices into SimConfig::delays whose gate never opened; their messages
  // were released at quiescence instead.
  std::vector<std::size_t> dangling_delays;
};

// One request and one reply per operation: a write request updates the
// register and is acknowledged; a read request is answered with the current
// value. The client completes the operation on receiving the reply.
class ServerBehavior {
 public:
  virtual ~ServerBehavior() = default;
  virtual Message handle(const Message& request, std::size_t now_step) = 0;
};

std::unique_ptr<ServerBehavior> correct_server_protocol(const RegisterSpec& registers);

// Correct until the victim's (z-1)-th write request arrives; from then on it
// keeps two register states: the victim continues against the state that
// includes that write, everyone else against a copy taken just before it.
// A non-victim message already in transit at the split is applied to both
// states (the construction guarantees there is at most one; more aborts).
std::unique_ptr<ServerBehavior> forking_server(const RegisterSpec& registers, int z,
                                               ClientId victim);

// Deterministic discrete-event run. The priority scheduler always delivers
// before invoking and scans channels client-by-client; the random scheduler
// picks uniformly among enabled actions using the seed. Identical configs
// give identical results.
SimResult run_simulation(const SimConfig& cfg);

// Configs that reproduce the fixed interleavings of scenarios.hpp under the
// priority scheduler.
SimConfig alpha_config(int z);
SimConfig beta_config(int z);
SimConfig gamma_config(int z);

// JSON form of SimConfig, same serialization family as traces.
std::string serialize_config(const SimConfig& cfg);
SimConfig parse_config(const std::string& text);  // throws std::invalid_argument

}  // namespace forkseq
