#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dfyannot/surface.hpp"
#include "dfyannot/verifier.hpp"

namespace dfyannot {

enum class PruneStatus { PrunedVerified, RestoredOriginal };

enum class RestoreReason {
  PostconditionUnprovable,
  NoFlaggedClauses,
  RoundLimit,
  VerifierFailure,  // Timeout or ToolError from the verifier
};

std::string_view toString(PruneStatus s);
std::string_view toString(RestoreReason r);

struct PruneRound {
  std::vector<std::string> removedClauseIds;
  VerifierStatus outcomeStatus = VerifierStatus::VerificationFailed;  // before removal
};

struct PruneTrace {
  std::vector<PruneRound> rounds;
  PruneStatus finalStatus = PruneStatus::RestoredOriginal;
  std::optional<RestoreReason> reason;
  int verifierCalls = 0;
};

struct PruneResult {
  AnnotatedProgram program;
  PruneTrace trace;
  VerifierOutcome finalOutcome;
};

struct PruneOptions {
  /// Rounds allowed before giving up; defaults to the initial invariant count.
  std::optional<int> maxRounds;
  int columnBase = 1;
  ScanOptions scan;
};

/// Greedily deletes every loop invariant the verifier reports as non-inductive
/// and re-verifies, until the program verifies or no flagged clause remains.
/// On any non-verified end state the original program is returned unchanged.
/// `initialOutcome`, when given, stands in for the first verifier call.
PruneResult pruneNonInductive(const AnnotatedProgram& program, const VerifyFn& verifyFn,
                              const PruneOptions& options = {},
                              std::optional<VerifierOutcome> initialOutcome = std::nullopt);

}  // namespace dfyannot
