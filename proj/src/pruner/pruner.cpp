#include "dfyannot/pruner.hpp"

#include <algorithm>
#include <set>

namespace dfyannot {

std::string_view toString(PruneStatus s) {
  return s == PruneStatus::PrunedVerified ? "PrunedVerified" : "RestoredOriginal";
}

std::string_view toString(RestoreReason r) {
  switch (r) {
    case RestoreReason::PostconditionUnprovable: return "PostconditionUnprovable";
    case RestoreReason::NoFlaggedClauses: return "NoFlaggedClauses";
    case RestoreReason::RoundLimit: return "RoundLimit";
    case RestoreReason::VerifierFailure: return "VerifierFailure";
  }
  return "?";
}

PruneResult pruneNonInductive(const AnnotatedProgram& program, const VerifyFn& verifyFn,
                              const PruneOptions& options,
                              std::optional<VerifierOutcome> initialOutcome) {
  PruneResult result;
  auto& trace = result.trace;
  auto restore = [&](RestoreReason reason, VerifierOutcome outcome) {
    result.program = program;
    trace.finalStatus = PruneStatus::RestoredOriginal;
    trace.reason = reason;
    result.finalOutcome = std::move(outcome);
    return result;
  };

  const int initialInvariants =
      static_cast<int>(program.ofKind(AnnotationKind::LoopInvariant).size());
  const int maxRounds = options.maxRounds.value_or(initialInvariants);

  AnnotatedProgram current = program;
  while (true) {
    VerifierOutcome outcome;
    if (initialOutcome) {
      outcome = std::move(*initialOutcome);
      initialOutcome.reset();
    } else {
      outcome = verifyFn(current.sourceText);
      ++trace.verifierCalls;
    }

    if (outcome.verified()) {
      result.program = std::move(current);
      trace.finalStatus = PruneStatus::PrunedVerified;
      result.finalOutcome = std::move(outcome);
      return result;
    }
    if (outcome.status == VerifierStatus::Timeout || outcome.status == VerifierStatus::ToolError ||
        outcome.status == VerifierStatus::ParseOrResolveError) {
      return restore(RestoreReason::VerifierFailure, std::move(outcome));
    }

    outcome = bindDiagnostics(std::move(outcome), current, options.columnBase);
    auto flagged = nonInductiveClauseIds(outcome);
    if (flagged.empty()) {
      auto errs = outcome.errors();
      bool onlyUnboundInvariantErrors =
          errs.empty() || std::all_of(errs.begin(), errs.end(), [](const Diagnostic* d) {
            return isNonInductive(d->classification);
          });
      return restore(onlyUnboundInvariantErrors ? RestoreReason::NoFlaggedClauses
                                                : RestoreReason::PostconditionUnprovable,
                     std::move(outcome));
    }
    if (static_cast<int>(trace.rounds.size()) >= maxRounds) {
      return restore(RestoreReason::RoundLimit, std::move(outcome));
    }

    trace.rounds.push_back({flagged, outcome.status});
    auto next = parseProgram(stripClauses(current, {flagged.begin(), flagged.end()}), options.scan);
    if (!next.scanStatus.ok()) return restore(RestoreReason::VerifierFailure, std::move(outcome));
    current = std::move(next);
  }
}

}  // namespace dfyannot
