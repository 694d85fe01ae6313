#pragma once

#include "forkseq/checkers.hpp"

namespace forkseq {

struct ExplanationStep {
  std::string title;
  std::string detail;
};

// A prose refutation: an ordered chain of forced facts ending in the broken
// rule. Empty steps mean the property holds (nothing to explain).
struct Explanation {
  Outcome outcome = Outcome::pass;
  std::vector<ExplanationStep> steps;
  std::string render() const;
};

// For histories where one slow write is pinned into the fast client's view by
// a bottom-then-value read pair, the chain is derived exactly: forced
// placement, prefix agreement pulling the fast client's writes across, the
// writer's own order, and the resulting stale read. Otherwise falls back to
// the verdict's own reason or refutation trail.
Explanation explain_sc(const History& h, const RegisterSpec& spec, const ScVerdict& v);
Explanation explain_fsc(const History& h, const RegisterSpec& spec, const FscVerdict& v);
Explanation explain_wait_freedom(const WaitFreedomVerdict& v);

}  // namespace forkseq
