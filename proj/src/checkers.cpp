#include "forkseq/checkers.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_set>

namespace forkseq {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::pass: return "pass";
    case Outcome::fail: return "fail";
    case Outcome::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

void require_well_formed(const History& h, const char* who) {
  if (!h.well_formed()) {
    throw std::invalid_argument(std::string(who) + ": history is not well formed: " +
                                h.violation()->message);
  }
}

void require_budget(const SearchBudget& b) {
  if (b.max_ops == 0 || b.max_extensions == 0 || b.max_nodes == 0) {
    throw std::invalid_argument("search budget fields must be positive");
  }
}

// Values a pending read may legally return: bottom plus everything any write
// invocation in h wrote to that register, in first-write order.
std::vector<Value> read_candidates(const History& h, const RegisterId& reg) {
  std::vector<Value> out;
  out.push_back(Value::bottom());
  for (const Operation& op : h.operations()) {
    if (op.op == OpKind::write && op.reg == reg &&
        std::find(out.begin(), out.end(), op.written) == out.end()) {
      out.push_back(op.written);
    }
  }
  return out;
}

}  // namespace

ExtensionSet enumerate_extensions(const History& h, const RegisterSpec& spec,
                                  const SearchBudget& budget) {
  (void)spec;
  require_well_formed(h, "enumerate_extensions");
  require_budget(budget);

  struct PendingChoice {
    const Operation* op;
    std::vector<Value> values;  // empty for writes (single ack choice)
  };
  std::vector<PendingChoice> pending;
  for (const Operation& op : h.operations()) {
    if (op.complete()) continue;
    PendingChoice c{&op, {}};
    if (op.op == OpKind::read) c.values = read_candidates(h, op.reg);
    pending.push_back(std::move(c));
  }
  std::sort(pending.begin(), pending.end(), [](const PendingChoice& a, const PendingChoice& b) {
    return a.op->client < b.op->client;
  });

  ExtensionSet out;
  auto emit = [&](const std::vector<std::size_t>& subset,
                  const std::vector<std::size_t>& value_pick) {
    if (out.extensions.size() >= budget.max_extensions) {
      out.truncated = true;
      return false;
    }
    std::vector<Event> events = h.events();
    for (std::size_t k = 0; k < subset.size(); ++k) {
      const PendingChoice& c = pending[subset[k]];
      Event e;
      e.kind = EventKind::response;
      e.client = c.op->client;
      e.op = c.op->op;
      e.reg = c.op->reg;
      e.label = c.op->label;
      if (c.op->op == OpKind::read) e.value = c.values[value_pick[k]];
      events.push_back(std::move(e));
    }
    out.extensions.push_back(Extension{History(std::move(events)), subset.size()});
    return true;
  };

  // Subsets in increasing size, lexicographic within a size; read values as an
  // odometer with the rightmost pending operation fastest.
  const std::size_t total = pending.size();
  for (std::size_t k = 0; k <= total; ++k) {
    std::vector<std::size_t> comb(k);
    for (std::size_t i = 0; i < k; ++i) comb[i] = i;
    while (true) {
      std::vector<std::size_t> pick(k, 0);
      bool more_picks = true;
      while (more_picks) {
        if (!emit(comb, pick)) return out;
        more_picks = false;
        std::size_t pos = k;
        while (pos > 0) {
          --pos;
          const PendingChoice& c = pending[comb[pos]];
          std::size_t n = c.op->op == OpKind::read ? c.values.size() : 1;
          if (++pick[pos] < n) {
            more_picks = true;
            break;
          }
          pick[pos] = 0;
        }
      }
      if (k == 0) break;
      std::size_t i = k;
      while (i > 0 && comb[i - 1] == total - k + (i - 1)) --i;
      if (i == 0) break;
      ++comb[i - 1];
      for (std::size_t j = i; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
  }
  return out;
}

namespace {

constexpr int kFound = 0;
constexpr int kRefuted = 1;
constexpr int kBudget = 2;

// Register/value interning shared by both searches: registers in order of
// first appearance, per-register value indices with 0 = bottom and written
// values in first-write order. A returned value nothing wrote maps to a
// sentinel that never matches the store.
struct Interned {
  std::vector<RegisterId> regs;
  std::vector<std::vector<Value>> values;  // per register, index 0 = bottom
  std::vector<int> op_reg;                 // per op
  std::vector<int> op_val;                 // written or returned value index
  static constexpr int kUnknown = 10000;

  explicit Interned(const std::vector<Operation>& ops) {
    auto reg_index = [&](const RegisterId& r) {
      for (std::size_t i = 0; i < regs.size(); ++i) {
        if (regs[i] == r) return static_cast<int>(i);
      }
      regs.push_back(r);
      values.push_back({Value::bottom()});
      return static_cast<int>(regs.size() - 1);
    };
    op_reg.reserve(ops.size());
    for (const Operation& op : ops) op_reg.push_back(reg_index(op.reg));
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (ops[i].op != OpKind::write) continue;
      auto& vals = values[static_cast<std::size_t>(op_reg[i])];
      if (std::find(vals.begin(), vals.end(), ops[i].written) == vals.end()) {
        vals.push_back(ops[i].written);
      }
    }
    op_val.reserve(ops.size());
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const Operation& op = ops[i];
      const Value& v = op.op == OpKind::write ? op.written
                                              : (op.returned ? *op.returned : Value::bottom());
      const auto& vals = values[static_cast<std::size_t>(op_reg[i])];
      auto it = std::find(vals.begin(), vals.end(), v);
      op_val.push_back(it == vals.end() ? kUnknown : static_cast<int>(it - vals.begin()));
    }
  }
};

struct ScSearch {
  const std::vector<Operation>& ops;
  const Interned in;
  std::vector<ClientId> clients;
  std::vector<std::vector<int>> queues;  // per client, op indices in inv order
  std::vector<std::size_t> ptr;
  std::vector<int> store;  // per register, current value index (0 = bottom)
  std::vector<int> path;
  std::size_t scheduled = 0;

  std::size_t* nodes;
  std::size_t max_nodes;
  std::unordered_set<std::uint64_t> memo;
  bool memo_packable;

  std::vector<int> found;
  std::vector<int> deepest;
  std::vector<std::string> blocked;

  explicit ScSearch(const std::vector<Operation>& ops_, std::size_t* nodes_,
                    std::size_t max_nodes_)
      : ops(ops_), in(ops_), nodes(nodes_), max_nodes(max_nodes_) {
    for (const Operation& op : ops) {
      if (std::find(clients.begin(), clients.end(), op.client) == clients.end()) {
        clients.push_back(op.client);
      }
    }
    std::sort(clients.begin(), clients.end());
    queues.resize(clients.size());
    for (std::size_t i = 0; i < ops.size(); ++i) {
      std::size_t c = client_slot(ops[i].client);
      queues[c].push_back(static_cast<int>(i));
    }
    ptr.assign(clients.size(), 0);
    store.assign(in.regs.size(), 0);
    std::size_t max_q = 0;
    for (const auto& q : queues) max_q = std::max(max_q, q.size());
    std::size_t max_vals = 1;
    for (const auto& v : in.values) max_vals = std::max(max_vals, v.size());
    memo_packable = clients.size() <= 8 && max_q <= 14 && in.regs.size() <= 4 && max_vals <= 15;
  }

  std::size_t client_slot(ClientId c) const {
    return static_cast<std::size_t>(
        std::lower_bound(clients.begin(), clients.end(), c) - clients.begin());
  }

  std::uint64_t key() const {
    std::uint64_t k = 0;
    for (std::size_t c = 0; c < ptr.size(); ++c) k = (k << 4) | (ptr[c] & 0xF);
    for (std::size_t r = 0; r < store.size(); ++r) {
      k = (k << 4) | (static_cast<std::uint64_t>(store[r]) & 0xF);
    }
    return k;
  }

  int dfs() {
    if (scheduled == ops.size()) {
      found = path;
      return kFound;
    }
    if (++*nodes > max_nodes) return kBudget;
    if (memo_packable && memo.count(key())) return kRefuted;
    if (path.size() > deepest.size()) {
      deepest = path;
      blocked.clear();
    }
    for (std::size_t c = 0; c < clients.size(); ++c) {
      if (ptr[c] == queues[c].size()) continue;
      int oi = queues[c][ptr[c]];
      const Operation& op = ops[static_cast<std::size_t>(oi)];
      int reg = in.op_reg[static_cast<std::size_t>(oi)];
      if (op.op == OpKind::read) {
        if (store[static_cast<std::size_t>(reg)] != in.op_val[static_cast<std::size_t>(oi)]) {
          if (path.size() == deepest.size()) {
            const auto& vals = in.values[static_cast<std::size_t>(reg)];
            blocked.push_back(describe(op) + " blocked: " + op.reg.name + " holds " +
                              to_string(vals[static_cast<std::size_t>(
                                  store[static_cast<std::size_t>(reg)])]));
          }
          continue;
        }
        ++ptr[c];
        ++scheduled;
        path.push_back(oi);
        int r = dfs();
        path.pop_back();
        --scheduled;
        --ptr[c];
        if (r != kRefuted) return r;
      } else {
        int old = store[static_cast<std::size_t>(reg)];
        store[static_cast<std::size_t>(reg)] = in.op_val[static_cast<std::size_t>(oi)];
        ++ptr[c];
        ++scheduled;
        path.push_back(oi);
        int r = dfs();
        path.pop_back();
        --scheduled;
        --ptr[c];
        store[static_cast<std::size_t>(reg)] = old;
        if (r != kRefuted) return r;
      }
    }
    if (memo_packable) memo.insert(key());
    return kRefuted;
  }
};

}  // namespace

ScVerdict check_sequential_consistency(const History& h, const RegisterSpec& spec,
                                       const SearchBudget& budget) {
  require_well_formed(h, "check_sequential_consistency");
  require_budget(budget);
  ScVerdict verdict;
  if (h.operations().size() > budget.max_ops) {
    verdict.outcome = Outcome::inconclusive;
    verdict.reason = "operation count exceeds budget.max_ops";
    return verdict;
  }
  ExtensionSet exts = enumerate_extensions(h, spec, budget);
  ScRefutation refutation;
  std::size_t deepest_len = 0;
  for (const Extension& ext : exts.extensions) {
    ++verdict.stats.extensions_tried;
    std::vector<Operation> cops = complete_ops(ext.extended);
    ScSearch search(cops, &verdict.stats.nodes, budget.max_nodes);
    int r = search.dfs();
    if (r == kFound) {
      View witness;
      for (int oi : search.found) witness.ops.push_back(cops[static_cast<std::size_t>(oi)]);
      verdict.outcome = Outcome::pass;
      verdict.witness = std::move(witness);
      return verdict;
    }
    if (r == kBudget) {
      verdict.outcome = Outcome::inconclusive;
      verdict.reason = "node budget exhausted";
      return verdict;
    }
    ++refutation.extensions_refuted;
    if (search.deepest.size() >= deepest_len) {
      deepest_len = search.deepest.size();
      refutation.deepest_prefix.clear();
      for (int oi : search.deepest) {
        refutation.deepest_prefix.push_back(describe(cops[static_cast<std::size_t>(oi)]));
      }
      refutation.blocked = search.blocked;
    }
  }
  if (exts.truncated) {
    verdict.outcome = Outcome::inconclusive;
    verdict.reason = "extension enumeration truncated by budget.max_extensions";
    return verdict;
  }
  verdict.outcome = Outcome::fail;
  verdict.refutation = std::move(refutation);
  return verdict;
}

namespace {

// Fork-consistency search. Views are grown as root paths in a shared forest:
// a candidate view is a path through already-placed operations plus a fresh
// suffix of operations placed nowhere else, which makes the no-join condition
// hold by construction. Clients with more own operations are placed first.
struct FscSearch {
  const std::vector<Operation>& ops;
  const Interned in;
  std::size_t base_events;

  std::vector<ClientId> clients;              // all clients with complete ops
  std::vector<std::vector<int>> own;          // per client slot, op indices
  std::vector<std::vector<int>> req_suffix;   // suffix counts of required ops
  std::vector<std::size_t> order;             // client slots, most-required first

  // forest
  std::vector<int> node_op;
  std::vector<int> node_parent;
  std::vector<std::vector<int>> node_store;
  std::uint64_t in_trie = 0;

  std::map<ClientId, std::vector<int>> result;  // client -> op indices in view order

  std::size_t* nodes;
  std::size_t max_nodes;

  std::string deepest_reason;
  std::size_t deepest_metric = 0;

  FscSearch(const std::vector<Operation>& ops_, std::size_t base_events_, std::size_t* nodes_,
            std::size_t max_nodes_)
      : ops(ops_), in(ops_), base_events(base_events_), nodes(nodes_), max_nodes(max_nodes_) {
    for (const Operation& op : ops) {
      if (std::find(clients.begin(), clients.end(), op.client) == clients.end()) {
        clients.push_back(op.client);
      }
    }
    std::sort(clients.begin(), clients.end());
    own.resize(clients.size());
    for (std::size_t i = 0; i < ops.size(); ++i) {
      own[slot(ops[i].client)].push_back(static_cast<int>(i));
    }
    req_suffix.resize(clients.size());
    for (std::size_t c = 0; c < clients.size(); ++c) {
      req_suffix[c].assign(own[c].size() + 1, 0);
      for (std::size_t p = own[c].size(); p > 0; --p) {
        int extra = required(own[c][p - 1]) ? 1 : 0;
        req_suffix[c][p - 1] = req_suffix[c][p] + extra;
      }
      if (req_suffix[c][0] > 0) order.push_back(c);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (req_suffix[a][0] != req_suffix[b][0]) return req_suffix[a][0] > req_suffix[b][0];
      return clients[a] < clients[b];
    });
  }

  std::size_t slot(ClientId c) const {
    return static_cast<std::size_t>(
        std::lower_bound(clients.begin(), clients.end(), c) - clients.begin());
  }

  // Complete in the base history, i.e. the response is not an appended event.
  bool required(int oi) const {
    return *ops[static_cast<std::size_t>(oi)].res_index < base_events;
  }

  struct State {
    std::vector<int> store;
    std::vector<std::size_t> floor;  // per client slot, next admissible own-list position
    std::size_t own_ptr = 0;         // floor of the view owner, kept separately for clarity
    std::vector<int> suffix;
    std::uint64_t used = 0;          // trie ops plus suffix ops
  };

  int assign(std::size_t ci) {
    if (ci == order.size()) return kFound;
    std::size_t c = order[ci];
    std::size_t trie_size = node_op.size();
    for (int anchor = -1; anchor < static_cast<int>(trie_size); ++anchor) {
      std::vector<int> path;  // op indices root..anchor
      for (int n = anchor; n >= 0; n = node_parent[static_cast<std::size_t>(n)]) {
        path.push_back(node_op[static_cast<std::size_t>(n)]);
      }
      std::reverse(path.begin(), path.end());
      State st;
      st.store.assign(in.regs.size(), 0);
      if (anchor >= 0) st.store = node_store[static_cast<std::size_t>(anchor)];
      st.floor.assign(clients.size(), 0);
      st.used = in_trie;
      bool ok = true;
      for (int oi : path) {
        std::size_t cs = slot(ops[static_cast<std::size_t>(oi)].client);
        const auto& list = own[cs];
        std::size_t p = static_cast<std::size_t>(
            std::find(list.begin(), list.end(), oi) - list.begin());
        if (cs == c) {
          // the owner may not have skipped a required own operation
          for (std::size_t q = st.floor[cs]; q < p; ++q) {
            if (required(list[q])) { ok = false; break; }
          }
        }
        if (!ok) break;
        st.floor[cs] = p + 1;
      }
      if (!ok) continue;
      st.own_ptr = st.floor[c];
      int r = extend(ci, c, anchor, st);
      if (r != kRefuted) return r;
    }
    return kRefuted;
  }

  int extend(std::size_t ci, std::size_t c, int anchor, State& st) {
    if (++*nodes > max_nodes) return kBudget;
    if (req_suffix[c][st.own_ptr] == 0) {
      int r = commit(ci, c, anchor, st);
      if (r != kRefuted) return r;
    }
    // Candidates in (client id, invocation index) order. The owner may pass
    // over optional own operations but never a required one; other clients'
    // operations may be skipped freely.
    std::size_t metric = ci * 1000 + st.suffix.size();
    for (std::size_t cs = 0; cs < clients.size(); ++cs) {
      const auto& list = own[cs];
      const bool owner = cs == c;
      for (std::size_t p = st.floor[cs]; p < list.size(); ++p) {
        int oi = list[p];
        const bool must_take = owner && required(oi);
        const std::uint64_t bit = 1ull << oi;
        const Operation& op = ops[static_cast<std::size_t>(oi)];
        if (!(st.used & bit)) {
          int reg = in.op_reg[static_cast<std::size_t>(oi)];
          int val = in.op_val[static_cast<std::size_t>(oi)];
          if (op.op == OpKind::write || st.store[static_cast<std::size_t>(reg)] == val) {
            State next = st;
            next.floor[cs] = p + 1;
            if (owner) next.own_ptr = p + 1;
            next.suffix.push_back(oi);
            next.used |= bit;
            if (op.op == OpKind::write) next.store[static_cast<std::size_t>(reg)] = val;
            int r = extend(ci, c, anchor, next);
            if (r != kRefuted) return r;
          } else if (metric >= deepest_metric) {
            deepest_metric = metric;
            deepest_reason =
                "condition (3): " + describe(op) + " cannot extend the candidate view";
          }
        } else if (must_take && metric >= deepest_metric) {
          deepest_metric = metric;
          deepest_reason =
              "condition (4): " + describe(op) + " is already bound to a diverged view";
        }
        if (must_take) break;  // nothing after an unconsumed required own op is admissible
      }
    }
    if (req_suffix[c][st.own_ptr] > 0 && metric >= deepest_metric) {
      deepest_metric = metric;
      deepest_reason = "condition (1): required operations of C" +
                       std::to_string(clients[c].value) + " cannot all be placed";
    }
    return kRefuted;
  }

  int commit(std::size_t ci, std::size_t c, int anchor, const State& st) {
    std::size_t before = node_op.size();
    std::uint64_t trie_before = in_trie;
    int parent = anchor;
    std::vector<int> store = anchor >= 0 ? node_store[static_cast<std::size_t>(anchor)]
                                         : std::vector<int>(in.regs.size(), 0);
    for (int oi : st.suffix) {
      if (ops[static_cast<std::size_t>(oi)].op == OpKind::write) {
        store[static_cast<std::size_t>(in.op_reg[static_cast<std::size_t>(oi)])] =
            in.op_val[static_cast<std::size_t>(oi)];
      }
      node_op.push_back(oi);
      node_parent.push_back(parent);
      node_store.push_back(store);
      in_trie |= 1ull << oi;
      parent = static_cast<int>(node_op.size()) - 1;
    }
    std::vector<int> view;
    for (int n = parent; n >= 0; n = node_parent[static_cast<std::size_t>(n)]) {
      view.push_back(node_op[static_cast<std::size_t>(n)]);
    }
    std::reverse(view.begin(), view.end());
    result[clients[c]] = std::move(view);
    int r = assign(ci + 1);
    if (r == kRefuted) {
      result.erase(clients[c]);
      node_op.resize(before);
      node_parent.resize(before);
      node_store.resize(before);
      in_trie = trie_before;
    }
    return r;
  }
};

}  // namespace

FscVerdict check_fork_sequential_consistency(const History& h, const RegisterSpec& spec,
                                             const SearchBudget& budget) {
  require_well_formed(h, "check_fork_sequential_consistency");
  require_budget(budget);
  FscVerdict verdict;
  if (h.operations().size() > budget.max_ops || h.operations().size() > 64) {
    verdict.outcome = Outcome::inconclusive;
    verdict.reason = "operation count exceeds the view search budget";
    return verdict;
  }
  ExtensionSet exts = enumerate_extensions(h, spec, budget);
  std::string deepest_reason;
  std::size_t deepest_metric = 0;
  for (const Extension& ext : exts.extensions) {
    ++verdict.stats.extensions_tried;
    std::vector<Operation> cops = complete_ops(ext.extended);
    if (cops.size() > 64) {
      verdict.outcome = Outcome::inconclusive;
      verdict.reason = "operation count exceeds the view search budget";
      return verdict;
    }
    std::size_t base_events = ext.extended.size() - ext.appended;
    FscSearch search(cops, base_events, &verdict.stats.nodes, budget.max_nodes);
    int r = search.assign(0);
    if (r == kFound) {
      std::map<ClientId, View> views;
      for (ClientId c : h.clients()) views[c] = View{{}, c};
      for (const auto& [client, indices] : search.result) {
        View v;
        v.owner = client;
        for (int oi : indices) v.ops.push_back(cops[static_cast<std::size_t>(oi)]);
        views[client] = std::move(v);
      }
      verdict.outcome = Outcome::pass;
      verdict.views = std::move(views);
      return verdict;
    }
    if (r == kBudget) {
      verdict.outcome = Outcome::inconclusive;
      verdict.reason = "node budget exhausted";
      return verdict;
    }
    if (search.deepest_metric >= deepest_metric) {
      deepest_metric = search.deepest_metric;
      deepest_reason = search.deepest_reason;
    }
  }
  if (exts.truncated) {
    verdict.outcome = Outcome::inconclusive;
    verdict.reason = "extension enumeration truncated by budget.max_extensions";
    return verdict;
  }
  verdict.outcome = Outcome::fail;
  verdict.reason = deepest_reason.empty()
                       ? "no view assignment satisfies conditions (1)-(4)"
                       : deepest_reason;
  return verdict;
}

std::optional<NoJoinViolation> check_no_join(const View& v1, const View& v2) {
  std::size_t common = 0;
  while (common < v1.ops.size() && common < v2.ops.size() &&
         v1.ops[common].id() == v2.ops[common].id()) {
    ++common;
  }
  for (std::size_t i = 0; i < v1.ops.size(); ++i) {
    auto j = v2.index_of(v1.ops[i].id());
    if (!j) continue;
    if (i < common && *j == i) continue;  // inside the shared prefix
    return NoJoinViolation{v1.ops[i], i, *j};
  }
  return std::nullopt;
}

WaitFreedomVerdict check_wait_freedom(const History& h, const std::set<ClientId>& correct) {
  require_well_formed(h, "check_wait_freedom");
  WaitFreedomVerdict verdict;
  for (const Operation& op : h.operations()) {
    if (op.complete()) continue;
    if (correct.empty() || correct.count(op.client)) {
      verdict.outcome = Outcome::fail;
      verdict.pending = op;
      return verdict;
    }
  }
  verdict.outcome = Outcome::pass;
  return verdict;
}

namespace {

// Maps witness operations back onto the base history and checks they are the
// same operations, completed consistently.
bool ops_match_base(const History& h, const std::vector<Operation>& ops,
                    std::map<std::size_t, Value>* ext_returns, std::string* why) {
  std::map<std::size_t, const Operation*> base;
  for (const Operation& op : h.operations()) base[op.inv_index] = &op;
  for (const Operation& op : ops) {
    auto it = base.find(op.inv_index);
    if (it == base.end()) {
      if (why) *why = "operation not in the history: " + describe(op);
      return false;
    }
    const Operation& b = *it->second;
    if (b.client != op.client || b.op != op.op || b.reg != op.reg ||
        (op.op == OpKind::write && !(b.written == op.written))) {
      if (why) *why = "operation differs from the history at invocation " +
                      std::to_string(op.inv_index);
      return false;
    }
    if (!op.complete()) {
      if (why) *why = "view contains an incomplete operation: " + describe(op);
      return false;
    }
    if (b.complete()) {
      if (b.res_index != op.res_index || !(b.returned == op.returned)) {
        if (why) *why = "completed operation altered: " + describe(op);
        return false;
      }
    } else if (op.op == OpKind::read) {
      // extension-completed: all views must agree on the chosen value
      Value ret = op.returned ? *op.returned : Value::bottom();
      auto [pos, inserted] = ext_returns->emplace(op.inv_index, ret);
      if (!inserted && !(pos->second == ret)) {
        if (why) *why = "views disagree on the extension value of " + describe(op);
        return false;
      }
    }
  }
  return true;
}

bool per_client_ordered(const View& v, std::string* why) {
  std::map<ClientId, std::size_t> last;
  for (const Operation& op : v.ops) {
    auto it = last.find(op.client);
    if (it != last.end() && op.inv_index <= it->second) {
      if (why) *why = "client order violated at " + describe(op);
      return false;
    }
    last[op.client] = op.inv_index;
  }
  return true;
}

}  // namespace

bool revalidate_sc_witness(const History& h, const RegisterSpec& spec, const View& witness,
                           std::string* why) {
  std::map<std::size_t, Value> ext_returns;
  if (!ops_match_base(h, witness.ops, &ext_returns, why)) return false;
  std::set<std::size_t> seen;
  for (const Operation& op : witness.ops) {
    if (!seen.insert(op.inv_index).second) {
      if (why) *why = "duplicate operation in witness: " + describe(op);
      return false;
    }
  }
  for (const Operation& op : h.operations()) {
    if (op.complete() && !seen.count(op.inv_index)) {
      if (why) *why = "witness omits a complete operation: " + describe(op);
      return false;
    }
  }
  if (!per_client_ordered(witness, why)) return false;
  if (auto v = check_sequential_spec(witness, spec)) {
    if (why) *why = v->message();
    return false;
  }
  return true;
}

bool revalidate_fsc_views(const History& h, const RegisterSpec& spec,
                          const std::map<ClientId, View>& views, std::string* why) {
  std::map<std::size_t, Value> ext_returns;
  for (const auto& [client, view] : views) {
    if (!ops_match_base(h, view.ops, &ext_returns, why)) return false;
    std::set<std::size_t> seen;
    for (const Operation& op : view.ops) {
      if (!seen.insert(op.inv_index).second) {
        if (why) *why = "duplicate operation in the view of C" + std::to_string(client.value);
        return false;
      }
    }
    for (const Operation& op : h.operations()) {
      if (op.client == client && op.complete() && !seen.count(op.inv_index)) {
        if (why) {
          *why = "view of C" + std::to_string(client.value) + " omits " + describe(op);
        }
        return false;
      }
    }
    if (!per_client_ordered(view, why)) return false;
    if (auto v = check_sequential_spec(view, spec)) {
      if (why) *why = "view of C" + std::to_string(client.value) + ": " + v->message();
      return false;
    }
  }
  for (auto i = views.begin(); i != views.end(); ++i) {
    for (auto j = std::next(i); j != views.end(); ++j) {
      if (auto v = check_no_join(i->second, j->second)) {
        if (why) {
          *why = "no-join violated between C" + std::to_string(i->first.value) + " and C" +
                 std::to_string(j->first.value) + " at " + describe(v->at);
        }
        return false;
      }
    }
  }
  return true;
}

}  // namespace forkseq
