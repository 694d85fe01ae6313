#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "forkseq/history.hpp"
#include "forkseq/register_spec.hpp"

namespace forkseq {

enum class Outcome { pass, fail, inconclusive };

std::string to_string(Outcome o);

// Caps for the decision searches. All fields must be positive; exceeding a
// cap yields an inconclusive verdict, never a silent pass or fail.
struct SearchBudget {
  std::size_t max_ops = 64;
  std::size_t max_extensions = 4096;
  std::size_t max_nodes = 4'000'000;
};

// A base history plus appended response events completing some of its pending
// operations. `extended` is the full event sequence; the last `appended`
// events are the additions.
struct Extension {
  History extended;
  std::size_t appended = 0;
};

struct ExtensionSet {
  std::vector<Extension> extensions;
  bool truncated = false;
};

// Every way of completing a subset of the pending operations: pending writes
// acknowledge, pending reads return a value from {bottom} + {values written to
// that register anywhere in h}, deduplicated, ordered by increasing number of
// appended events. Requires a well-formed history.
ExtensionSet enumerate_extensions(const History& h, const RegisterSpec& spec,
                                  const SearchBudget& budget = {});

struct SearchStats {
  std::size_t extensions_tried = 0;
  std::size_t nodes = 0;
};

// Why a sequential-consistency search failed: the longest schedulable legal
// prefix it saw, and what blocked each next candidate there.
struct ScRefutation {
  std::size_t extensions_refuted = 0;
  std::vector<std::string> deepest_prefix;  // labels/descriptions in order
  std::vector<std::string> blocked;         // one line per refused candidate
};

struct ScVerdict {
  Outcome outcome = Outcome::inconclusive;
  std::optional<View> witness;             // on pass: legal permutation of complete ops
  std::optional<ScRefutation> refutation;  // on fail
  std::optional<std::string> reason;       // on inconclusive
  SearchStats stats;
};

// Decides sequential consistency: some extension of h has a single legal
// permutation of its complete operations preserving every client's own order.
// Requires a well-formed history; unique writes and single-writer discipline
// are the caller's responsibility (see check_unique_writes/check_single_writer).
ScVerdict check_sequential_consistency(const History& h, const RegisterSpec& spec,
                                       const SearchBudget& budget = {});

struct FscVerdict {
  Outcome outcome = Outcome::inconclusive;
  std::optional<std::map<ClientId, View>> views;  // on pass: one view per client
  std::optional<std::string> reason;              // names the blocking condition on fail
  SearchStats stats;
};

// Decides fork sequential consistency: some extension admits per-client views
// that (1) contain the client's own complete operations, (2) preserve every
// client's own order, (3) are legal register histories, and (4) pairwise agree
// on the prefix of every shared operation. The search grows views as paths in
// a shared forest, so (4) holds by construction. Preconditions as for
// check_sequential_consistency.
FscVerdict check_fork_sequential_consistency(const History& h, const RegisterSpec& spec,
                                             const SearchBudget& budget = {});

struct NoJoinViolation {
  Operation at;           // earliest shared operation whose prefixes differ
  std::size_t pos1 = 0;   // its position in v1
  std::size_t pos2 = 0;   // its position in v2
};

// nullopt when every operation shared by v1 and v2 has identical prefixes in
// both (elementwise operation identity).
std::optional<NoJoinViolation> check_no_join(const View& v1, const View& v2);

struct WaitFreedomVerdict {
  Outcome outcome = Outcome::pass;
  std::optional<Operation> pending;  // first pending op of a correct client
};

// Every operation by a correct client is complete. `correct` defaults to all
// clients appearing in h when empty.
WaitFreedomVerdict check_wait_freedom(const History& h,
                                      const std::set<ClientId>& correct = {});

// Independent re-validation of pass witnesses, used by tests and report
// consumers: no search state, only the definitions. On failure `why` (when
// non-null) receives a short explanation.
bool revalidate_sc_witness(const History& h, const RegisterSpec& spec, const View& witness,
                           std::string* why = nullptr);
bool revalidate_fsc_views(const History& h, const RegisterSpec& spec,
                          const std::map<ClientId, View>& views, std::string* why = nullptr);

}  // namespace forkseq
