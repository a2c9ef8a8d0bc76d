#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dfyannot/pruner.hpp"
#include "dfyannot/surface.hpp"
#include "dfyannot/util.hpp"
#include "dfyannot/verifier.hpp"

namespace dfyannot {

/// Everything that happened in one iteration of the repair loop.
struct AttemptRecord {
  int index = 0;
  std::string promptDigest;
  std::string rawResponse;
  std::string extractedProgram;
  std::optional<std::string> extractionError;  // set when nothing usable came back
  DiffVerdict diffVerdict{DiffScanFailure{DiffSide::Candidate, "not checked"}, {}};
  std::optional<VerifierOutcome> preOutcome;
  std::optional<PruneTrace> pruneTrace;
  std::optional<VerifierOutcome> postOutcome;
  std::vector<std::string> retrievedTacticIds;
  double elapsedSeconds = 0.0;

  /// The outcome the attempt ended with: after pruning if pruning ran.
  const VerifierOutcome* finalOutcome() const;
};

enum class PipelineStatus { Verified, VerifiedAfterPrune, Failed };
enum class FailureReason { AttemptsExhausted, ProviderError, ToolError };

std::string_view toString(PipelineStatus s);
std::string_view toString(FailureReason r);

struct PipelineResult {
  PipelineStatus status = PipelineStatus::Failed;
  std::optional<FailureReason> failureReason;
  std::string failureDetail;
  std::optional<std::string> finalProgram;
  std::vector<AttemptRecord> attempts;
  std::optional<int> verifiedAtAttempt;
  bool unsound = false;  // diff checking was disabled for this run

  bool succeeded() const {
    return status == PipelineStatus::Verified || status == PipelineStatus::VerifiedAfterPrune;
  }
};

/// Plain-language feedback for an attempt as shown to the model: the diff
/// rejection reason, or the verifier's error diagnostics.
std::string attemptFeedback(const AttemptRecord& record);

std::string attemptToJson(const AttemptRecord& record, int indent = 2);
AttemptRecord attemptFromJson(std::string_view text);
std::string resultToJson(const PipelineResult& result, int indent = 2);
PipelineResult resultFromJson(std::string_view text);

}  // namespace dfyannot
