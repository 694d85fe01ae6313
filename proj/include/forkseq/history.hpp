#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace forkseq {

// Clients are numbered from 1. Comparable so they can key ordered maps.
struct ClientId {
  int value = 0;
  auto operator<=>(const ClientId&) const = default;
};

// Registers are identified by name; the designated writer lives in RegisterSpec.
struct RegisterId {
  std::string name;
  auto operator<=>(const RegisterId&) const = default;
};

// A register value: either the initial "bottom" (never written) or a data string.
class Value {
 public:
  Value() = default;
  static Value bottom() { return Value(); }
  static Value data(std::string s) {
    Value v;
    v.data_ = std::move(s);
    return v;
  }
  bool is_bottom() const { return !data_.has_value(); }
  bool is_data() const { return data_.has_value(); }
  // Only meaningful for data values.
  const std::string& str() const { return *data_; }
  auto operator<=>(const Value&) const = default;

 private:
  std::optional<std::string> data_;
};

std::string to_string(const Value& v);

enum class EventKind { invocation, response };
enum class OpKind { read, write };

// One invocation or response. `value` is the written value on a write
// invocation and the returned value on a read response; absent otherwise.
// `label` is a human-readable tag carried through serialization; it is never
// used for semantics and is excluded from equality.
struct Event {
  EventKind kind = EventKind::invocation;
  ClientId client;
  OpKind op = OpKind::read;
  RegisterId reg;
  std::optional<Value> value;
  std::string label;

  bool operator==(const Event& other) const {
    return kind == other.kind && client == other.client && op == other.op &&
           reg == other.reg && value == other.value;
  }
};

// Identity of an operation within one history: (client, invocation index).
struct OpId {
  ClientId client;
  std::size_t inv_index = 0;
  auto operator<=>(const OpId&) const = default;
};

// An operation pairs an invocation with its response, if any. `written` holds
// the payload of writes; `returned` is present exactly when a read completed.
struct Operation {
  ClientId client;
  OpKind op = OpKind::read;
  RegisterId reg;
  Value written;
  std::optional<Value> returned;
  std::size_t inv_index = 0;
  std::optional<std::size_t> res_index;
  std::string label;

  bool complete() const { return res_index.has_value(); }
  OpId id() const { return OpId{client, inv_index}; }
};

// Short one-line rendering, e.g. `w_2^1=write(X2,v1) by C2`.
std::string describe(const Operation& op);

struct WellFormednessViolation {
  std::size_t event_index = 0;
  std::string rule;
  std::string message;
};

// An immutable event sequence. Construction checks well-formedness once; the
// derived operation list is available only for well-formed histories.
class History {
 public:
  History() = default;
  explicit History(std::vector<Event> events);

  const std::vector<Event>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool well_formed() const { return !violation_.has_value(); }
  const std::optional<WellFormednessViolation>& violation() const { return violation_; }

  // Operations in invocation order. Throws std::logic_error when the history
  // is not well formed.
  const std::vector<Operation>& operations() const;

  // Clients appearing in the history, ascending, deduplicated.
  std::vector<ClientId> clients() const;

  bool operator==(const History& other) const { return events_ == other.events_; }

 private:
  std::vector<Event> events_;
  std::optional<WellFormednessViolation> violation_;
  std::vector<Operation> ops_;
};

// A sequential view: an ordered list of whole operations. `owner` marks whose
// view it is when that matters (fork-consistency views); a global witness has
// no owner.
struct View {
  std::vector<Operation> ops;
  std::optional<ClientId> owner;

  bool contains(const OpId& id) const;
  // Position of the operation with this identity, if present.
  std::optional<std::size_t> index_of(const OpId& id) const;
};

// Alternation and shape rules; nullopt when the history is well formed.
std::optional<WellFormednessViolation> validate_well_formed(const History& h);

// Complete operations in invocation order. Requires a well-formed history.
std::vector<Operation> complete_ops(const History& h);

// Real-time precedence: a completed strictly before b was invoked.
// An incomplete operation precedes nothing.
bool precedes(const Operation& a, const Operation& b);
bool concurrent(const Operation& a, const Operation& b);

// Events of one client, in history order.
std::vector<Event> project_client(const History& h, ClientId c);
// Operations of one client within a view, in view order.
View project_client(const View& v, ClientId c);

// The prefix of v ending with (and including) the operation identified by id.
// Throws std::invalid_argument when the operation is not in the view.
View prefix_through(const View& v, const OpId& id);

// True when no pair of operations in v is ordered against the real-time
// precedence of h (pairwise check, independent of any search internals).
bool preserves_real_time(const View& v, const History& h);

}  // namespace forkseq
