#include "forkseq/oracles.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace forkseq {
namespace {

// Read completions drawn from bottom plus every value written anywhere in the
// trace, deliberately broader than the pruned enumeration: reads completed
// with a foreign register's value simply fail replay in every sequence.
std::vector<Value> candidate_values(const History& h) {
  std::vector<Value> vals{Value::bottom()};
  for (const Operation& op : h.operations()) {
    if (op.op == OpKind::write &&
        std::find(vals.begin(), vals.end(), op.written) == vals.end()) {
      vals.push_back(op.written);
    }
  }
  return vals;
}

std::vector<History> every_extension(const History& h) {
  std::vector<const Operation*> pending;
  for (const Operation& op : h.operations()) {
    if (!op.complete()) pending.push_back(&op);
  }
  if (pending.size() > 20) throw std::invalid_argument("oracle: too many pending operations");
  std::vector<Value> vals = candidate_values(h);
  std::vector<History> out;
  for (std::uint32_t mask = 0; mask < (1u << pending.size()); ++mask) {
    std::vector<std::size_t> sel;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      if (mask & (1u << i)) sel.push_back(i);
    }
    std::vector<std::size_t> pick(sel.size(), 0);
    while (true) {
      std::vector<Event> events = h.events();
      for (std::size_t k = 0; k < sel.size(); ++k) {
        const Operation* op = pending[sel[k]];
        Event e;
        e.kind = EventKind::response;
        e.client = op->client;
        e.op = op->op;
        e.reg = op->reg;
        e.label = op->label;
        if (op->op == OpKind::read) e.value = vals[pick[k]];
        events.push_back(std::move(e));
      }
      out.emplace_back(std::move(events));
      bool advanced = false;
      std::size_t pos = sel.size();
      while (pos > 0) {
        --pos;
        std::size_t n = pending[sel[pos]]->op == OpKind::read ? vals.size() : 1;
        if (++pick[pos] < n) {
          advanced = true;
          break;
        }
        pick[pos] = 0;
      }
      if (!advanced) break;
    }
  }
  return out;
}

// The complete operations of one extension with clients and registers mapped
// to dense slots, so the per-permutation checks below stay allocation-free.
// The checks themselves remain literal: every sequence is tested against the
// definitions with no pruning and no sharing between sequences.
struct Flat {
  std::vector<Operation> ops;
  std::vector<int> client_slot;      // per op
  std::vector<int> reg_slot;         // per op
  std::vector<ClientId> clients;
  int n_regs = 0;

  explicit Flat(const History& ext) {
    ops = complete_ops(ext);
    std::vector<RegisterId> regs;
    for (const Operation& op : ops) {
      auto c = std::find(clients.begin(), clients.end(), op.client);
      if (c == clients.end()) {
        clients.push_back(op.client);
        c = clients.end() - 1;
      }
      client_slot.push_back(static_cast<int>(c - clients.begin()));
      auto r = std::find(regs.begin(), regs.end(), op.reg);
      if (r == regs.end()) {
        regs.push_back(op.reg);
        r = regs.end() - 1;
      }
      reg_slot.push_back(static_cast<int>(r - regs.begin()));
    }
    n_regs = static_cast<int>(regs.size());
  }
};

// Per client, operations must appear in increasing invocation order.
bool order_ok(const Flat& f, const std::vector<std::size_t>& seq,
              std::vector<std::size_t>& last_inv, std::vector<bool>& seen) {
  std::fill(last_inv.begin(), last_inv.end(), 0);
  std::fill(seen.begin(), seen.end(), false);
  for (std::size_t i : seq) {
    int c = f.client_slot[i];
    if (seen[c] && f.ops[i].inv_index <= last_inv[c]) return false;
    seen[c] = true;
    last_inv[c] = f.ops[i].inv_index;
  }
  return true;
}

// Each read must return the latest preceding write to its register, bottom
// when there is none.
bool replay_ok(const Flat& f, const std::vector<std::size_t>& seq,
               std::vector<const Value*>& store) {
  std::fill(store.begin(), store.end(), nullptr);
  for (std::size_t i : seq) {
    const Operation& op = f.ops[i];
    if (op.op == OpKind::write) {
      store[f.reg_slot[i]] = &op.written;
    } else {
      const Value* expect = store[f.reg_slot[i]];
      const Value& got = op.returned ? *op.returned : Value::bottom();
      if (expect == nullptr) {
        if (!got.is_bottom()) return false;
      } else if (!(*expect == got)) {
        return false;
      }
    }
  }
  return true;
}

bool sc_of_extension(const History& ext) {
  Flat f(ext);
  std::vector<std::size_t> idx(f.ops.size());
  std::iota(idx.begin(), idx.end(), 0u);
  std::vector<std::size_t> last_inv(f.clients.size());
  std::vector<bool> seen(f.clients.size());
  std::vector<const Value*> store(f.n_regs);
  do {
    if (order_ok(f, idx, last_inv, seen) && replay_ok(f, idx, store)) return true;
  } while (std::next_permutation(idx.begin(), idx.end()));
  return false;
}

constexpr std::size_t kMaxCandidateViews = 2'000'000;

// Every order-respecting sequence over every subset of the complete
// operations: choose a subset, then interleave the per-client sub-chains in
// all possible ways. Sequences violating register legality are dropped on
// emission; nothing else is pruned.
std::vector<std::vector<std::size_t>> subset_sequences(const Flat& f) {
  std::vector<std::vector<std::size_t>> chains(f.clients.size());
  std::vector<std::vector<std::size_t>> out;
  std::vector<const Value*> store(f.n_regs);
  std::size_t n = f.ops.size();
  if (n > 31) throw std::invalid_argument("oracle: too many operations");

  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    for (auto& c : chains) c.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) chains[f.client_slot[i]].push_back(i);
    }
    std::vector<std::size_t> at(chains.size(), 0);
    std::vector<std::size_t> cur;
    std::function<void()> merge = [&]() {
      bool done = true;
      for (std::size_t c = 0; c < chains.size(); ++c) {
        if (at[c] < chains[c].size()) {
          done = false;
          cur.push_back(chains[c][at[c]++]);
          merge();
          --at[c];
          cur.pop_back();
        }
      }
      if (done && replay_ok(f, cur, store)) {
        if (out.size() >= kMaxCandidateViews) {
          throw std::invalid_argument("oracle: candidate view count exceeds the guard");
        }
        out.push_back(cur);
      }
    };
    merge();
  }
  return out;
}

// Literal pairwise prefix agreement: a shared operation must sit at the same
// position, after an elementwise-identical prefix, in both sequences.
bool prefixes_agree(const Flat& f, const std::vector<std::size_t>& a,
                    const std::vector<std::size_t>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!(f.ops[a[i]].id() == f.ops[b[j]].id())) continue;
      if (i != j) return false;
      for (std::size_t k = 0; k < i; ++k) {
        if (!(f.ops[a[k]].id() == f.ops[b[k]].id())) return false;
      }
    }
  }
  return true;
}

bool fsc_of_extension(const History& base, const History& ext) {
  Flat f(ext);
  std::vector<ClientId> clients = base.clients();
  if (clients.empty()) return true;

  // Condition (1): a client's view must contain every operation of that
  // client that is already complete in the base history.
  std::map<ClientId, std::set<std::size_t>> required;
  for (const Operation& op : base.operations()) {
    if (op.complete()) required[op.client].insert(op.inv_index);
  }

  std::vector<std::vector<std::size_t>> sequences = subset_sequences(f);
  std::vector<std::vector<const std::vector<std::size_t>*>> candidates(clients.size());
  for (const auto& seq : sequences) {
    for (std::size_t c = 0; c < clients.size(); ++c) {
      std::set<std::size_t> covered;
      for (std::size_t i : seq) {
        if (f.ops[i].client == clients[c]) covered.insert(f.ops[i].inv_index);
      }
      bool contains_all = true;
      for (std::size_t inv : required[clients[c]]) {
        if (!covered.count(inv)) {
          contains_all = false;
          break;
        }
      }
      if (contains_all) candidates[c].push_back(&seq);
    }
  }

  std::vector<const std::vector<std::size_t>*> chosen(clients.size(), nullptr);
  auto pick = [&](auto&& self, std::size_t c) -> bool {
    if (c == clients.size()) return true;
    for (const auto* view : candidates[c]) {
      bool ok = true;
      for (std::size_t m = 0; m < c; ++m) {
        if (!prefixes_agree(f, *chosen[m], *view)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      chosen[c] = view;
      if (self(self, c + 1)) return true;
      chosen[c] = nullptr;
    }
    return false;
  };
  return pick(pick, 0);
}

}  // namespace

bool brute_force_sc_oracle(const History& h, const RegisterSpec& spec) {
  (void)spec;
  if (h.operations().size() > 10) {
    throw std::invalid_argument("brute_force_sc_oracle: more than 10 operations");
  }
  for (const History& ext : every_extension(h)) {
    if (sc_of_extension(ext)) return true;
  }
  return false;
}

bool brute_force_fsc_oracle(const History& h, const RegisterSpec& spec) {
  (void)spec;
  if (h.operations().size() > 10) {
    throw std::invalid_argument("brute_force_fsc_oracle: more than 10 operations");
  }
  for (const History& ext : every_extension(h)) {
    if (fsc_of_extension(h, ext)) return true;
  }
  return false;
}

}  // namespace forkseq
