#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dfyannot/hints.hpp"
#include "dfyannot/llm.hpp"
#include "dfyannot/pruner.hpp"
#include "dfyannot/records.hpp"

namespace dfyannot {

struct PipelineConfig {
  int maxAttempts = 10;
  VerifierConfig verifier;
  KindSet strippableKinds = defaultStrippableKinds();
  ScanOptions scan;
  HintMode hintMode = HintMode::All;
  ProviderConfig provider;
  bool pruneEnabled = true;
  /// Test-only switch; results from a run with it off are marked unsound.
  bool diffCheckEnabled = true;
  std::size_t promptTokenCeiling = 0;
  PromptTemplates templates = PromptTemplates::builtin();
};

/// Collaborators of one run. `verify` and `complete` are required; the rest
/// default to the library implementations driven by the config.
struct PipelineDeps {
  VerifyFn verify;
  CompletionFn complete;
  std::function<DiffVerdict(const std::string& candidate, const std::string& base)> diffCheck;
  std::function<PruneResult(const AnnotatedProgram&, const VerifyFn&, const VerifierOutcome&)> prune;
  std::function<std::vector<Tactic>(const std::string& program, const std::vector<Diagnostic>&)>
      retrieve;
  const TacticStore* tactics = nullptr;  // used by the default retrieve; builtin if null
  std::function<double()> clock;         // seconds; steady clock if empty
};

/// Generate, diff-check, verify, prune and retrieve hints, up to
/// cfg.maxAttempts times. Any returned finalProgram has passed the diff check
/// against `base` a second time just before returning.
PipelineResult runPipeline(const std::string& base, const PipelineConfig& cfg, PipelineDeps deps);

}  // namespace dfyannot
