#include <algorithm>
#include <regex>
#include <set>

#include "dfyannot/util.hpp"
#include "dfyannot/verifier.hpp"

namespace dfyannot {

std::string_view toString(VerifierStatus s) {
  switch (s) {
    case VerifierStatus::Verified: return "Verified";
    case VerifierStatus::VerificationFailed: return "VerificationFailed";
    case VerifierStatus::ParseOrResolveError: return "ParseOrResolveError";
    case VerifierStatus::Timeout: return "Timeout";
    case VerifierStatus::ToolError: return "ToolError";
  }
  return "ToolError";
}

std::optional<VerifierStatus> verifierStatusFromString(std::string_view name) {
  for (auto s : {VerifierStatus::Verified, VerifierStatus::VerificationFailed,
                 VerifierStatus::ParseOrResolveError, VerifierStatus::Timeout,
                 VerifierStatus::ToolError}) {
    if (toString(s) == name) return s;
  }
  return std::nullopt;
}

std::vector<const Diagnostic*> VerifierOutcome::errors() const {
  std::vector<const Diagnostic*> out;
  for (const auto& d : diagnostics) {
    if (d.severity == Severity::Error) out.push_back(&d);
  }
  return out;
}

bool VerifierOutcome::hasNonInductive() const {
  return std::any_of(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& d) {
    return d.severity == Severity::Error && isNonInductive(d.classification);
  });
}

VerifierOutcome parseVerifierOutput(std::string_view output, int exitCode,
                                    const PatternTable& table) {
  static const std::regex kDiag(R"(^.*\((\d+),(\d+)\):\s*(Error|Warning)[^:]*:\s*(.*?)\s*$)");
  static const std::regex kSummary(
      R"(verifier finished with (\d+) verified, (\d+) errors?(?:, (\d+) time ?outs?)?)");
  static const std::regex kFrontEnd(R"((\d+) (parse|resolution/type) errors? detected)");

  VerifierOutcome outcome;
  outcome.rawOutput = std::string(output);
  bool sawSummary = false;
  long summaryErrors = 0;
  long summaryTimeouts = 0;
  bool frontEndFailure = false;

  for (const auto& rawLine : splitLines(output)) {
    std::string line = rawLine;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::smatch m;
    if (std::regex_search(line, m, kFrontEnd)) {
      frontEndFailure = std::stol(m[1].str()) > 0 || frontEndFailure;
      continue;
    }
    if (std::regex_search(line, m, kSummary)) {
      sawSummary = true;
      summaryErrors += std::stol(m[2].str());
      if (m[3].matched) summaryTimeouts += std::stol(m[3].str());
      continue;
    }
    if (std::regex_match(line, m, kDiag)) {
      Diagnostic d;
      d.line = std::stoi(m[1].str());
      d.col = std::stoi(m[2].str());
      d.severity = m[3].str() == "Error" ? Severity::Error : Severity::Warning;
      d.messageText = m[4].str();
      d.classification = table.classify(d.messageText);
      outcome.diagnostics.push_back(std::move(d));
    }
  }

  auto errs = outcome.errors();
  bool syntaxErrors = std::any_of(errs.begin(), errs.end(), [](const Diagnostic* d) {
    return d->classification == Classification::SyntaxOrResolve;
  });

  if (frontEndFailure || (!sawSummary && syntaxErrors)) {
    outcome.status = VerifierStatus::ParseOrResolveError;
  } else if (sawSummary) {
    outcome.status = (summaryErrors > 0 || summaryTimeouts > 0 || !errs.empty())
                         ? VerifierStatus::VerificationFailed
                         : VerifierStatus::Verified;
  } else if (!errs.empty()) {
    outcome.status = VerifierStatus::VerificationFailed;
  } else if (exitCode == 0) {
    outcome.status = VerifierStatus::Verified;
  } else {
    outcome.status = VerifierStatus::ToolError;
    outcome.exitDetail = "exit code " + std::to_string(exitCode) + " without diagnostics";
  }
  return outcome;
}

VerifierOutcome bindDiagnostics(VerifierOutcome outcome, const AnnotatedProgram& program,
                                int columnBase) {
  if (!program.scanStatus.ok()) return outcome;
  const auto& src = program.sourceText;
  std::vector<std::size_t> lineStarts{0};
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i] == '\n') lineStarts.push_back(i + 1);
  }
  auto invariants = program.ofKind(AnnotationKind::LoopInvariant);
  for (auto& d : outcome.diagnostics) {
    d.boundClauseId.reset();
    if (d.line < 1 || static_cast<std::size_t>(d.line) > lineStarts.size()) continue;
    std::size_t lineBegin = lineStarts[d.line - 1];
    std::size_t lineEnd = static_cast<std::size_t>(d.line) < lineStarts.size()
                              ? lineStarts[d.line] - 1
                              : src.size();
    long colOffset = std::max(0L, static_cast<long>(d.col) - columnBase);
    std::size_t offset = std::min(lineBegin + static_cast<std::size_t>(colOffset), lineEnd);
    for (const auto* inv : invariants) {
      if (inv->span.contains(offset)) {
        d.boundClauseId = inv->clauseId;
        break;
      }
    }
  }
  return outcome;
}

std::vector<std::string> nonInductiveClauseIds(const VerifierOutcome& outcome) {
  std::vector<std::string> ids;
  std::set<std::string> seen;
  for (const auto& d : outcome.diagnostics) {
    if (d.severity != Severity::Error || !isNonInductive(d.classification) || !d.boundClauseId)
      continue;
    if (seen.insert(*d.boundClauseId).second) ids.push_back(*d.boundClauseId);
  }
  return ids;
}

}  // namespace dfyannot
