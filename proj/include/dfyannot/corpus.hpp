#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dfyannot/orchestrator.hpp"

namespace dfyannot {

namespace fs = std::filesystem;

/// Everything a CLI run needs, loaded from one JSON file. Relative paths in
/// the file are resolved against the file's directory.
struct RunConfig {
  PipelineConfig pipeline;
  std::optional<fs::path> tacticsDir;     // builtin store when absent
  std::optional<fs::path> oracle;         // scripted oracle replacing the verifier
  std::optional<fs::path> oracleDir;      // per-program oracles: <dir>/<programId>.json
  std::optional<fs::path> providerScript; // scripted provider JSON
  std::optional<fs::path> providerScriptDir;  // per-program scripts
  std::optional<fs::path> recordTranscript;   // append every exchange here
  bool deterministicClock = false;        // report zero elapsed time
  std::string snapshot;                   // the config as loaded, for reports

  static RunConfig parse(std::string_view json, const fs::path& baseDir = ".");
  static RunConfig load(const fs::path& path);
};

/// Verifier and completion function for one program, plus whatever must stay
/// alive while they are used.
struct ProgramDeps {
  VerifyFn verify;
  CompletionFn complete;
  std::function<double()> clock;
  std::vector<std::shared_ptr<void>> keepAlive;
};

using DepsFactory = std::function<ProgramDeps(const std::string& programId)>;

/// Builds verifier and provider from the config: a scripted oracle when one is
/// configured, else the installed verifier; the configured provider kind.
DepsFactory makeDepsFactory(const RunConfig& cfg);

/// Shared store for a config (loaded from tacticsDir or builtin).
std::shared_ptr<const TacticStore> loadStoreFor(const RunConfig& cfg);

/// Relative paths ("/"-separated) of every .dfy file under `dir`, sorted.
std::vector<std::string> listPrograms(const fs::path& dir);

// ---------------------------------------------------------------------------

struct ProgramSummary {
  std::string status;  // Verified | VerifiedAfterPrune | Failed
  std::optional<std::string> failureReason;
  std::optional<int> verifiedAtAttempt;
  int attemptsUsed = 0;
  double wallSeconds = 0.0;
  bool operator==(const ProgramSummary&) const = default;
};

struct RunReport {
  std::map<std::string, ProgramSummary> perProgram;
  int total = 0;
  int verifiedCount = 0;
  double verifiedFraction = 0.0;
  std::vector<int> cumulativeByAttempt;
  std::string configSnapshot;
  std::map<std::string, std::string> ablationFlags;

  std::map<std::string, PipelineResult> results;  // not part of report.json

  std::string toJson() const;
  std::string curveCsv() const;
};

struct BenchOptions {
  int workers = 1;
  std::optional<fs::path> reportDir;  // report.json, curve.csv, attempts/<id>.json
};

RunReport benchRun(const fs::path& corpusDir, const RunConfig& cfg, const DepsFactory& deps,
                   const BenchOptions& options = {});

// ---------------------------------------------------------------------------

struct RepairEntry {
  bool scanned = true;  // false: the ground truth itself failed to scan
  std::string error;
  bool hadBase = false;
  bool wasBroken = false;
  bool repaired = false;
  int annotationsRemoved = 0;
};

struct RepairReport {
  std::map<std::string, RepairEntry> perProgram;
  int total = 0;
  int wasBroken = 0;
  int repaired = 0;
  int fixed = 0;  // wasBroken and now repaired
  int scanFailures = 0;

  std::string toJson() const;
};

/// Resolve-only check: the verifier with a one-second limit.
VerifyFn makeResolveFn(VerifierConfig cfg);

/// Strips every ground truth with the default kinds, writes the regenerated
/// base under `outDir` and confirms it parses and resolves. A base already in
/// `outDir` is checked first so breakage can be reported.
RepairReport repairDataset(const fs::path& groundTruthDir, const fs::path& outDir,
                           const VerifyFn& resolve, const KindSet& kinds = defaultStrippableKinds());

// ---------------------------------------------------------------------------

struct CurationExample {
  std::string role;  // attempt-repair | informalization
  std::string programId;
  std::string baseProgram;
  std::optional<std::string> failedAttempt;
  std::string verifierFeedback;
  std::optional<std::string> informalFeedback;
  std::string target;

  std::string toJsonLine() const;
};

struct CurationSkip {
  std::string programId;
  std::string reason;
};

struct CurationSummary {
  std::vector<CurationExample> examples;
  std::vector<CurationSkip> skipped;
};

/// Reads attempt files written by benchRun under `runDir/attempts`, pairs each
/// failed attempt with its verified ground truth, informalizes each distinct
/// error diagnostic and writes line-delimited JSON to `out`.
CurationSummary curate(const fs::path& runDir, const fs::path& groundTruthDir,
                       const CompletionFn& llm, const VerifyFn& verify, const fs::path& out,
                       const PromptTemplates& templates = PromptTemplates::builtin());

/// Writes attempts/<id>.json for one program as benchRun does.
void writeAttemptFile(const fs::path& runDir, const std::string& programId,
                      const std::string& base, const PipelineResult& result);

}  // namespace dfyannot
