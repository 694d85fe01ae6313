#include "forkseq/explain.hpp"

#include <algorithm>
#include <sstream>

namespace forkseq {

std::string Explanation::render() const {
  if (steps.empty()) return "no counterexample\n";
  std::ostringstream out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    out << (i + 1) << ". [" << steps[i].title << "] " << steps[i].detail << "\n";
  }
  return out.str();
}

namespace {

std::string name(const Operation& op) { return op.label.empty() ? describe(op) : op.label; }

std::string client_name(ClientId c) { return "C" + std::to_string(c.value); }

// The facts behind the four-step refutation. A = the slow writer, B = the
// client whose reads pin the write; see find_chain for how they are located.
struct ChainFacts {
  Operation slow_write;  // W: the only write to its register, by A, complete
  Operation rb;          // B's last read of X before ra, returning something else
  Operation ra;          // B's first read of X returning W's value
  Operation w_src;       // B's write of the value A later reads
  Operation w_last;      // B's last write to Y invoked before rb
  Operation stale_read;  // R: A's read of Y after W, returning w_src's value
};

std::optional<ChainFacts> find_chain(const History& h) {
  const std::vector<Operation>& ops = h.operations();
  auto writes_to = [&](const RegisterId& reg) {
    std::vector<const Operation*> ws;
    for (const Operation& op : ops) {
      if (op.op == OpKind::write && op.reg == reg) ws.push_back(&op);
    }
    return ws;
  };
  for (const Operation& W : ops) {
    if (W.op != OpKind::write || !W.complete()) continue;
    if (writes_to(W.reg).size() != 1) continue;  // nothing can mask or mimic it
    const Value u = W.written;
    for (ClientId B : h.clients()) {
      if (B == W.client) continue;
      // B's complete reads of W's register, in program order.
      const Operation* ra = nullptr;
      const Operation* rb = nullptr;
      for (const Operation& op : ops) {
        if (op.client != B || op.op != OpKind::read || !(op.reg == W.reg) || !op.complete()) {
          continue;
        }
        if (*op.returned == u) {
          ra = &op;
          break;
        }
        rb = &op;
      }
      if (!ra || !rb) continue;
      if (!rb->returned->is_bottom()) continue;  // keep the forcing argument airtight
      // A's complete reads after W, in program order.
      for (const Operation& R : ops) {
        if (R.client != W.client || R.op != OpKind::read || !R.complete()) continue;
        if (R.inv_index < W.inv_index) continue;
        if (!R.returned->is_data()) continue;
        const Value val = *R.returned;
        // B's writes to R's register invoked before rb.
        const Operation* w_src = nullptr;
        const Operation* w_last = nullptr;
        for (const Operation& op : ops) {
          if (op.client != B || op.op != OpKind::write || !(op.reg == R.reg) ||
              !op.complete() || op.inv_index > rb->inv_index) {
            continue;
          }
          if (op.written == val) w_src = &op;
          w_last = &op;
        }
        if (!w_src || !w_last || w_src == w_last) continue;
        // The read's value must have a unique writer for the stale argument.
        std::size_t writers_of_val = 0;
        for (const Operation* wp : writes_to(R.reg)) {
          if (wp->written == val) ++writers_of_val;
        }
        if (writers_of_val != 1) continue;
        return ChainFacts{W, *rb, *ra, *w_src, *w_last, R};
      }
    }
  }
  return std::nullopt;
}

std::vector<ExplanationStep> chain_steps(const ChainFacts& f, bool single_view) {
  const std::string A = client_name(f.slow_write.client);
  const std::string B = client_name(f.rb.client);
  const std::string W = name(f.slow_write);
  const std::string X = f.slow_write.reg.name;
  const std::string Y = f.stale_read.reg.name;
  const std::string u = to_string(f.slow_write.written);
  const std::string val = to_string(*f.stale_read.returned);
  const std::string pi_a = single_view ? "the permutation" : "the view of " + A;
  const std::string pi_b = single_view ? "the permutation" : "the view of " + B;

  std::vector<ExplanationStep> steps;
  steps.push_back(
      {"forced placement",
       name(f.rb) + " returns " + to_string(*f.rb.returned) + " but " + name(f.ra) +
           " returns " + u + ", and " + W + " is the only write to " + X + "; so " + pi_b +
           " must contain " + W + ", after " + name(f.rb) + " and before " + name(f.ra) + "."});
  if (single_view) {
    steps.push_back(
        {"order transfer",
         "the permutation contains every complete operation and keeps " + B +
             "'s own order, so " + name(f.w_src) + " and then " + name(f.w_last) +
             " come before " + name(f.rb) + ", hence before " + W + "."});
  } else {
    steps.push_back(
        {"prefix agreement",
         W + " is " + A + "'s own operation, so it is also in " + pi_a +
             "; shared operations carry identical prefixes, so everything before " + W +
             " in " + pi_b + ", in particular " + name(f.w_src) + " and then " +
             name(f.w_last) + ", appears before " + W + " in " + pi_a +
             ", in the same order."});
  }
  steps.push_back({"own order", A + " invokes " + name(f.stale_read) + " only after " + W +
                                    " completed, so " + pi_a + " puts " + name(f.stale_read) +
                                    " after " + W + ", hence after " + name(f.w_last) + "."});
  steps.push_back(
      {"stale read",
       name(f.stale_read) + " returns " + val + ", written only by " + name(f.w_src) +
           ", but " + name(f.w_last) + " overwrites " + Y + " between them and nothing can "
           "restore " + val + "; no legal placement remains."});
  return steps;
}

// Reads returning a value that nothing ever writes refute any view
// assignment immediately.
std::optional<ExplanationStep> unknown_value_step(const History& h) {
  for (const Operation& op : h.operations()) {
    if (op.op != OpKind::read || !op.complete() || !op.returned->is_data()) continue;
    bool written = false;
    for (const Operation& w : h.operations()) {
      if (w.op == OpKind::write && w.reg == op.reg && w.written == *op.returned) {
        written = true;
        break;
      }
    }
    if (!written) {
      return ExplanationStep{"unknown value",
                             name(op) + " returns " + to_string(*op.returned) + ", but no write "
                             "to " + op.reg.name + " ever produces it; no sequence of "
                             "operations can justify that response."};
    }
  }
  return std::nullopt;
}

}  // namespace

Explanation explain_sc(const History& h, const RegisterSpec& spec, const ScVerdict& v) {
  (void)spec;
  Explanation e;
  e.outcome = v.outcome;
  if (v.outcome == Outcome::pass) return e;
  if (v.outcome == Outcome::inconclusive) {
    e.steps.push_back({"inconclusive", v.reason.value_or("search budget exhausted")});
    return e;
  }
  if (auto chain = find_chain(h)) {
    e.steps = chain_steps(*chain, true);
    return e;
  }
  if (auto step = unknown_value_step(h)) {
    e.steps.push_back(*step);
    return e;
  }
  e.steps.push_back({"refuted", "every interleaving of every completion stalls"});
  if (v.refutation && !v.refutation->deepest_prefix.empty()) {
    std::string prefix;
    for (const std::string& s : v.refutation->deepest_prefix) {
      if (!prefix.empty()) prefix += ", ";
      prefix += s;
    }
    e.steps.push_back({"deepest prefix", "the longest legal prefix found was: " + prefix});
    for (const std::string& b : v.refutation->blocked) {
      e.steps.push_back({"blocked", b});
    }
  }
  return e;
}

Explanation explain_fsc(const History& h, const RegisterSpec& spec, const FscVerdict& v) {
  (void)spec;
  Explanation e;
  e.outcome = v.outcome;
  if (v.outcome == Outcome::pass) return e;
  if (v.outcome == Outcome::inconclusive) {
    e.steps.push_back({"inconclusive", v.reason.value_or("search budget exhausted")});
    return e;
  }
  if (auto chain = find_chain(h)) {
    e.steps = chain_steps(*chain, false);
    return e;
  }
  if (auto step = unknown_value_step(h)) {
    e.steps.push_back(*step);
    return e;
  }
  e.steps.push_back(
      {"refuted", v.reason.value_or("no view assignment satisfies all four conditions")});
  return e;
}

Explanation explain_wait_freedom(const WaitFreedomVerdict& v) {
  Explanation e;
  e.outcome = v.outcome;
  if (v.outcome == Outcome::pass) return e;
  e.steps.push_back({"pending operation",
                     (v.pending ? describe(*v.pending) : std::string("an operation")) +
                         " never receives a response."});
  return e;
}

}  // namespace forkseq
