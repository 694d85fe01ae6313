#include "forkseq/history.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace forkseq {

std::string to_string(const Value& v) {
  return v.is_bottom() ? "bot" : v.str();
}

std::string describe(const Operation& op) {
  std::string s;
  if (!op.label.empty()) s += op.label + "=";
  if (op.op == OpKind::write) {
    s += "write(" + op.reg.name + "," + to_string(op.written) + ")";
  } else {
    s += "read(" + op.reg.name + ")";
    if (op.returned) s += "->" + to_string(*op.returned);
  }
  s += " by C" + std::to_string(op.client.value);
  if (!op.complete()) s += " (pending)";
  return s;
}

namespace {

// Shared by the constructor and validate_well_formed so both report the same
// first violation.
std::optional<WellFormednessViolation> scan(const std::vector<Event>& events,
                                            std::vector<Operation>* out) {
  std::map<ClientId, std::size_t> open;  // client -> index into *out
  std::vector<Operation> ops;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    if (e.client.value < 1) {
      return WellFormednessViolation{i, "client-id", "client ids start at 1"};
    }
    if (e.kind == EventKind::invocation) {
      if (open.count(e.client)) {
        return WellFormednessViolation{
            i, "alternation",
            "client C" + std::to_string(e.client.value) +
                " invokes while an operation is still open"};
      }
      if (e.op == OpKind::read && e.value.has_value()) {
        return WellFormednessViolation{i, "read-inv-value",
                                       "read invocations carry no value"};
      }
      if (e.op == OpKind::write && (!e.value.has_value() || e.value->is_bottom())) {
        return WellFormednessViolation{
            i, "write-inv-value", "write invocations carry a data value"};
      }
      Operation op;
      op.client = e.client;
      op.op = e.op;
      op.reg = e.reg;
      if (e.op == OpKind::write) op.written = *e.value;
      op.inv_index = i;
      op.label = e.label;
      open[e.client] = ops.size();
      ops.push_back(std::move(op));
    } else {
      auto it = open.find(e.client);
      if (it == open.end()) {
        return WellFormednessViolation{
            i, "alternation",
            "response by C" + std::to_string(e.client.value) +
                " without an open invocation"};
      }
      Operation& op = ops[it->second];
      if (op.op != e.op || op.reg != e.reg) {
        return WellFormednessViolation{
            i, "matching-response",
            "response does not match the open invocation of C" +
                std::to_string(e.client.value)};
      }
      if (e.op == OpKind::write && e.value.has_value()) {
        return WellFormednessViolation{i, "write-res-value",
                                       "write responses carry no value"};
      }
      if (e.op == OpKind::read && !e.value.has_value()) {
        return WellFormednessViolation{
            i, "read-res-value",
            "read responses carry a value (null encodes bottom)"};
      }
      if (e.op == OpKind::read) op.returned = *e.value;
      op.res_index = i;
      open.erase(it);
    }
  }
  if (out) *out = std::move(ops);
  return std::nullopt;
}

}  // namespace

History::History(std::vector<Event> events) : events_(std::move(events)) {
  violation_ = scan(events_, &ops_);
  if (violation_) ops_.clear();
}

const std::vector<Operation>& History::operations() const {
  if (violation_) {
    throw std::logic_error("operations() on a history that is not well formed: " +
                           violation_->message);
  }
  return ops_;
}

std::vector<ClientId> History::clients() const {
  std::vector<ClientId> out;
  for (const Event& e : events_) out.push_back(e.client);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool View::contains(const OpId& id) const { return index_of(id).has_value(); }

std::optional<std::size_t> View::index_of(const OpId& id) const {
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].id() == id) return i;
  }
  return std::nullopt;
}

std::optional<WellFormednessViolation> validate_well_formed(const History& h) {
  return scan(h.events(), nullptr);
}

std::vector<Operation> complete_ops(const History& h) {
  std::vector<Operation> out;
  for (const Operation& op : h.operations()) {
    if (op.complete()) out.push_back(op);
  }
  return out;
}

bool precedes(const Operation& a, const Operation& b) {
  return a.res_index.has_value() && *a.res_index < b.inv_index;
}

bool concurrent(const Operation& a, const Operation& b) {
  return !precedes(a, b) && !precedes(b, a);
}

std::vector<Event> project_client(const History& h, ClientId c) {
  std::vector<Event> out;
  for (const Event& e : h.events()) {
    if (e.client == c) out.push_back(e);
  }
  return out;
}

View project_client(const View& v, ClientId c) {
  View out;
  out.owner = c;
  for (const Operation& op : v.ops) {
    if (op.client == c) out.ops.push_back(op);
  }
  return out;
}

View prefix_through(const View& v, const OpId& id) {
  auto pos = v.index_of(id);
  if (!pos) {
    throw std::invalid_argument("prefix_through: operation C" +
                                std::to_string(id.client.value) + "@" +
                                std::to_string(id.inv_index) +
                                " is not in the view");
  }
  View out;
  out.owner = v.owner;
  out.ops.assign(v.ops.begin(), v.ops.begin() + static_cast<std::ptrdiff_t>(*pos) + 1);
  return out;
}

bool preserves_real_time(const View& v, const History& h) {
  (void)h;
  for (std::size_t i = 0; i < v.ops.size(); ++i) {
    for (std::size_t j = i + 1; j < v.ops.size(); ++j) {
      if (precedes(v.ops[j], v.ops[i])) return false;
    }
  }
  return true;
}

}  // namespace forkseq
