#pragma once

#include <optional>
#include <string>

#include "forkseq/history.hpp"
#include "forkseq/register_spec.hpp"

namespace forkseq {

struct ValueNames {
  std::string u = "u";        // payload of C1's single write to X1
  std::string v_prefix = "v"; // C2's writes to X2 become v1, v2, ...
};

// z: round in which C2's read of X1 first returns a non-bottom value (>= 4).
// l: index of C1's read that returns v_{z-2}; the one-round protocol pins
// l = 1, larger values are rejected.
struct ScenarioParams {
  int z = 4;
  int l = 1;
  ValueNames names;
};

struct Scenario {
  History history;
  RegisterSpec registers;
  std::string comment;
  // Event index of the divergence point: the invocation of C2's (z-1)-th
  // write. Absent for the short run, which ends before that write.
  std::optional<std::size_t> t0;
};

// Three fixed interleavings of two clients talking to a register server
// through one request/reply round per operation. C2 alternates writing v_i to
// X2 and reading X1; C1 writes u to X1 once, slowly.
//
// alpha: correct server. C1's request stays in transit across rounds 3..z-1,
// so C2's reads return bottom until round z, where the read returns u.
//
// beta: correct server. C2 stops after round z-2; C1's write then completes
// and C1's read of X2 returns v_{z-2}.
//
// gamma: forking server. C2 observes exactly its alpha events and C1 observes
// exactly its beta events, but no single sequence of register states explains
// both: the combined history passes neither the sequential nor the
// fork-sequential check.
Scenario generate_alpha(const ScenarioParams& p);
Scenario generate_beta(const ScenarioParams& p);
Scenario generate_gamma(const ScenarioParams& p);

}  // namespace forkseq
