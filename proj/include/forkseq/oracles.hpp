#pragma once

#include "forkseq/history.hpp"
#include "forkseq/register_spec.hpp"

namespace forkseq {

// Exhaustive reference deciders used by the tests to validate the pruned
// checkers: every response extension times every candidate sequence, no
// pruning, no shared code with the search implementations. Exponential in
// history size; callers must respect the caps.
//
// brute_force_sc_oracle: all permutations of the completed operations of every
// extension, filtered by per-client order and by store replay.
//
// brute_force_fsc_oracle: all order-respecting sequences over all subsets of
// the completed operations, filtered by containment, per-client order and
// legality, then by pairwise prefix agreement on shared operations.
//
// Both reject histories above 10 operations; the fsc oracle additionally
// rejects inputs whose candidate view count would exceed an internal guard.
bool brute_force_sc_oracle(const History& h, const RegisterSpec& spec);
bool brute_force_fsc_oracle(const History& h, const RegisterSpec& spec);

}  // namespace forkseq
