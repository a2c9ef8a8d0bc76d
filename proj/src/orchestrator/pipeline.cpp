#include <chrono>

#include "dfyannot/orchestrator.hpp"

namespace dfyannot {

namespace {

void fillDefaults(PipelineDeps& deps, const PipelineConfig& cfg) {
  if (!deps.verify) throw Error("pipeline needs a verify function");
  if (!deps.complete) throw Error("pipeline needs a completion function");
  if (!deps.diffCheck) {
    deps.diffCheck = [kinds = cfg.strippableKinds, scan = cfg.scan](const std::string& c,
                                                                    const std::string& b) {
      return diffCheck(c, b, kinds, scan);
    };
  }
  if (!deps.prune) {
    PruneOptions opts;
    opts.columnBase = cfg.verifier.columnBase;
    opts.scan = cfg.scan;
    deps.prune = [opts](const AnnotatedProgram& p, const VerifyFn& v, const VerifierOutcome& first) {
      return pruneNonInductive(p, v, opts, first);
    };
  }
  if (!deps.retrieve) {
    const TacticStore* store = deps.tactics ? deps.tactics : &builtinTactics();
    deps.retrieve = [store, mode = cfg.hintMode](const std::string& program,
                                                 const std::vector<Diagnostic>& diags) {
      return retrieve(*store, program, diags, mode);
    };
  }
  if (!deps.clock) {
    deps.clock = [] {
      using namespace std::chrono;
      return duration<double>(steady_clock::now().time_since_epoch()).count();
    };
  }
}

}  // namespace

PipelineResult runPipeline(const std::string& base, const PipelineConfig& cfg, PipelineDeps deps) {
  fillDefaults(deps, cfg);
  PipelineResult result;
  result.unsound = !cfg.diffCheckEnabled;
  auto fail = [&](FailureReason reason, std::string detail) {
    result.status = PipelineStatus::Failed;
    result.failureReason = reason;
    result.failureDetail = std::move(detail);
    return result;
  };

  auto baseProgram = parseProgram(base, cfg.scan);
  if (!baseProgram.scanStatus.ok())
    return fail(FailureReason::ToolError, "base program: " + baseProgram.scanStatus.describe());

  PromptOptions promptOptions{cfg.templates, cfg.promptTokenCeiling};
  std::vector<Tactic> hints;
  auto& history = result.attempts;

  for (int i = 0; i < cfg.maxAttempts; ++i) {
    const double t0 = deps.clock();
    AttemptRecord rec;
    rec.index = i;
    auto finish = [&] {
      rec.elapsedSeconds = deps.clock() - t0;
      history.push_back(std::move(rec));
    };

    Prompt prompt;
    try {
      prompt = buildPromptWithinBudget(base, history, hints, promptOptions);
    } catch (const PromptTooLarge& e) {
      return fail(FailureReason::ToolError, e.what());
    }
    rec.promptDigest = prompt.digest;
    try {
      rec.rawResponse = deps.complete(prompt);
    } catch (const ProviderError& e) {
      return fail(FailureReason::ProviderError, e.what());
    }

    try {
      rec.extractedProgram = extractProgram(rec.rawResponse);
    } catch (const EmptyResponse& e) {
      rec.extractionError = std::string(e.what()) + ".";
      finish();
      continue;
    }

    // Lines 6-7: reject base modifications, feed the reason back, move on.
    rec.diffVerdict = deps.diffCheck(rec.extractedProgram, base);
    if (cfg.diffCheckEnabled && !rec.diffVerdict.equal()) {
      finish();
      continue;
    }

    auto pre = deps.verify(rec.extractedProgram);
    if (pre.status == VerifierStatus::ToolError) {
      rec.preOutcome = std::move(pre);
      auto detail = rec.preOutcome->exitDetail;
      finish();
      return fail(FailureReason::ToolError, detail);
    }

    auto finalize = [&](PipelineStatus status, const std::string& program) {
      if (cfg.diffCheckEnabled && !deps.diffCheck(program, base).equal()) return false;
      result.status = status;
      result.finalProgram = program;
      result.verifiedAtAttempt = i;
      return true;
    };

    if (pre.verified()) {
      rec.preOutcome = std::move(pre);
      if (finalize(PipelineStatus::Verified, rec.extractedProgram)) {
        finish();
        return result;
      }
      finish();
      continue;
    }

    auto program = parseProgram(rec.extractedProgram, cfg.scan);
    if (pre.status == VerifierStatus::VerificationFailed && program.scanStatus.ok())
      pre = bindDiagnostics(std::move(pre), program, cfg.verifier.columnBase);
    rec.preOutcome = pre;

    // Lines 11-13: prune non-inductive clauses.
    if (cfg.pruneEnabled && program.scanStatus.ok() && !nonInductiveClauseIds(pre).empty()) {
      auto pruned = deps.prune(program, deps.verify, pre);
      rec.pruneTrace = pruned.trace;
      rec.postOutcome = pruned.finalOutcome;
      if (pruned.trace.finalStatus == PruneStatus::PrunedVerified &&
          finalize(PipelineStatus::VerifiedAfterPrune, pruned.program.sourceText)) {
        finish();
        return result;
      }
    }

    // Line 14: hints for the next attempt come from this failure.
    const auto* last = rec.finalOutcome();
    hints = deps.retrieve(rec.extractedProgram, last ? last->diagnostics : std::vector<Diagnostic>{});
    for (const auto& h : hints) rec.retrievedTacticIds.push_back(h.id);
    finish();
  }
  return fail(FailureReason::AttemptsExhausted,
              "no verified program after " + std::to_string(cfg.maxAttempts) + " attempts");
}

}  // namespace dfyannot
