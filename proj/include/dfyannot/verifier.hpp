#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "dfyannot/surface.hpp"

namespace dfyannot {

enum class Classification {
  InvariantNotMaintained,
  InvariantOnEntry,
  PostconditionFailure,
  AssertionFailure,
  DecreasesFailure,
  SyntaxOrResolve,
  Other,
};

std::string_view toString(Classification c);
std::optional<Classification> classificationFromString(std::string_view name);

/// InvariantNotMaintained or InvariantOnEntry: what the pruner removes.
inline bool isNonInductive(Classification c) {
  return c == Classification::InvariantNotMaintained || c == Classification::InvariantOnEntry;
}

enum class Severity { Error, Warning };

struct Diagnostic {
  int line = 0;
  int col = 0;
  Severity severity = Severity::Error;
  std::string messageText;
  Classification classification = Classification::Other;
  std::optional<std::string> boundClauseId;
};

enum class VerifierStatus { Verified, VerificationFailed, ParseOrResolveError, Timeout, ToolError };

std::string_view toString(VerifierStatus s);
std::optional<VerifierStatus> verifierStatusFromString(std::string_view name);

struct VerifierOutcome {
  VerifierStatus status = VerifierStatus::ToolError;
  std::vector<Diagnostic> diagnostics;
  std::string rawOutput;
  double wallSeconds = 0.0;
  std::string exitDetail;  // ToolError only

  bool verified() const { return status == VerifierStatus::Verified; }
  std::vector<const Diagnostic*> errors() const;
  bool hasNonInductive() const;
};

/// Ordered (pattern -> classification) rules. The first match wins and the
/// table always ends with a catch-all mapping to Other.
class PatternTable {
 public:
  struct Rule {
    std::string pattern;
    Classification classification = Classification::Other;
    bool isRegex = false;
  };

  PatternTable(std::string versionLabel, std::vector<Rule> rules);

  /// The table shipped for Dafny 4.11.
  static const PatternTable& defaultTable();
  /// Accepts either a bare JSON array of rules or {"versionLabel", "patterns"}.
  static PatternTable fromJson(std::string_view json);
  static PatternTable load(const std::filesystem::path& path);

  std::string toJson() const;
  Classification classify(std::string_view messageText) const;
  const std::string& versionLabel() const { return versionLabel_; }
  const std::vector<Rule>& rules() const { return rules_; }

 private:
  std::string versionLabel_;
  std::vector<Rule> rules_;
  std::vector<std::optional<std::regex>> compiled_;
};

inline Classification classify(std::string_view messageText, const PatternTable& table) {
  return table.classify(messageText);
}

/// Parses `file(line,col): Error: message` style verifier output. Status is
/// derived from the diagnostics and the summary lines, with `exitCode` used
/// only to tell a crashed tool from a clean run that printed nothing.
VerifierOutcome parseVerifierOutput(std::string_view output, int exitCode,
                                    const PatternTable& table);

/// Attaches the clauseId of the LoopInvariant span containing each diagnostic.
VerifierOutcome bindDiagnostics(VerifierOutcome outcome, const AnnotatedProgram& program,
                                int columnBase = 1);

/// Flagged clause ids in `outcome` (bound and non-inductive), deduplicated.
std::vector<std::string> nonInductiveClauseIds(const VerifierOutcome& outcome);

using VerifyFn = std::function<VerifierOutcome(const std::string& programText)>;

struct VerifierConfig {
  std::string binaryPath;
  std::string binaryEnvVar = "DAFNY_PATH";
  double timeLimitSeconds = 60.0;
  double graceSeconds = 5.0;
  std::vector<std::string> extraArgs;
  bool keepTempFiles = false;
  std::filesystem::path tempDir;  // empty: system temp directory
  int maxWorkers = 4;
  int columnBase = 1;
  std::shared_ptr<const PatternTable> table;  // null: default table

  /// binaryPath, else $binaryEnvVar, else empty.
  std::string resolvedBinary() const;
  const PatternTable& patterns() const { return table ? *table : PatternTable::defaultTable(); }
};

/// Runs `<binary> verify <file> --verification-time-limit <s>` on a temp copy
/// of `programText`. Concurrent calls are bounded by cfg.maxWorkers.
VerifierOutcome verify(const std::string& programText, const VerifierConfig& cfg);

// ---------------------------------------------------------------------------

struct ProcessResult {
  int exitCode = -1;
  bool timedOut = false;
  bool launched = false;
  std::string output;  // stdout and stderr interleaved
  double wallSeconds = 0.0;
  std::string error;
};

/// Runs argv[0] with the given arguments, killing its process group once
/// `timeoutSeconds` elapse.
ProcessResult runProcess(const std::vector<std::string>& argv, double timeoutSeconds);

// ---------------------------------------------------------------------------

/// A deterministic verifier stand-in. Rules are pure predicates on the program
/// text and are checked first, in order; when none applies the next entry of
/// the ordinal sequence is consumed. An exhausted script yields ToolError.
class ScriptedOracle {
 public:
  struct Rule {
    std::optional<std::string> digest;  // sha256 of the program text
    std::vector<std::string> contains;
    std::vector<std::string> absent;
    VerifierOutcome outcome;
    std::vector<std::string> invariantAnchors;  // per diagnostic, may be empty
  };
  struct Entry {
    VerifierOutcome outcome;
    std::vector<std::string> invariantAnchors;
  };

  ScriptedOracle() = default;
  ScriptedOracle(std::vector<Rule> rules, std::vector<Entry> sequence);
  /// Only for handing a freshly built oracle over; not safe while in use.
  ScriptedOracle(ScriptedOracle&& other) noexcept;

  static ScriptedOracle fromJson(std::string_view json, const PatternTable& table);
  static ScriptedOracle load(const std::filesystem::path& path, const PatternTable& table);

  /// Builds an ordinal entry whose diagnostics sit on the named invariants
  /// (normalized clause text) of whichever program is being verified.
  static Entry flagInvariants(const std::vector<std::string>& invariantTexts,
                              Classification kind = Classification::InvariantNotMaintained);
  static Entry postconditionFailure();
  static Entry verifiedEntry();

  VerifierOutcome verify(const std::string& programText);
  VerifyFn asVerifyFn();

  std::size_t calls() const;
  std::size_t remaining() const;

 private:
  static VerifierOutcome anchor(VerifierOutcome outcome, const std::vector<std::string>& anchors,
                                const std::string& programText);

  std::vector<Rule> rules_;
  std::vector<Entry> sequence_;
  std::size_t next_ = 0;
  std::size_t calls_ = 0;
  mutable std::mutex mu_;
};

/// JSON form shared by the oracle script files and run artifacts.
std::string outcomeToJson(const VerifierOutcome& outcome);

}  // namespace dfyannot
