#include "dfyannot/records.hpp"
#include "json_io.hpp"

namespace dfyannot {

using jsonio::json;

const VerifierOutcome* AttemptRecord::finalOutcome() const {
  if (postOutcome) return &*postOutcome;
  if (preOutcome) return &*preOutcome;
  return nullptr;
}

std::string_view toString(PipelineStatus s) {
  switch (s) {
    case PipelineStatus::Verified: return "Verified";
    case PipelineStatus::VerifiedAfterPrune: return "VerifiedAfterPrune";
    case PipelineStatus::Failed: return "Failed";
  }
  return "?";
}

std::string_view toString(FailureReason r) {
  switch (r) {
    case FailureReason::AttemptsExhausted: return "AttemptsExhausted";
    case FailureReason::ProviderError: return "ProviderError";
    case FailureReason::ToolError: return "ToolError";
  }
  return "?";
}

namespace {

std::string at(const SourceLoc& loc) {
  return "line " + std::to_string(loc.line) + ", column " + std::to_string(loc.col);
}

std::string diagnosticLines(const VerifierOutcome& o) {
  std::string out;
  for (const auto* d : o.errors()) {
    out += "- line " + std::to_string(d->line) + ": " + d->messageText + "\n";
  }
  return out;
}

}  // namespace

namespace {

std::string unsoundKeyword(UnsoundKind k) {
  switch (k) {
    case UnsoundKind::AssumeStmt: return "assume";
    case UnsoundKind::ExpectStmt: return "expect";
    case UnsoundKind::AxiomAttribute: return "{:axiom}";
  }
  return std::string(toString(k));
}

}  // namespace

std::string attemptFeedback(const AttemptRecord& r) {
  if (r.extractionError) return "Rejected: " + *r.extractionError + " Return one complete program.";
  std::string fb = std::visit(
      [](const auto& v) -> std::string {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, DiffMismatch>) {
          return "Rejected: this attempt modified base logic. The first divergent token is `" +
                 v.candidateToken + "` at " + at(v.candidateLoc) + " of the attempt, where the base "
                 "program has `" + v.baseToken + "` at " + at(v.baseLoc) +
                 ". Keep the base program exactly as given and only add annotations.";
        } else if constexpr (std::is_same_v<V, DiffUnsound>) {
          return "Rejected: this attempt uses an unsound construct (`" + unsoundKeyword(v.kind) +
                 "`) at " + at(v.location) + ". Assumptions, expect statements and axioms are not allowed.";
        } else if constexpr (std::is_same_v<V, DiffScanFailure>) {
          return "Rejected: the attempt could not be read as a Dafny program: " + v.detail;
        } else {
          return "";
        }
      },
      r.diffVerdict.verdict);
  if (!fb.empty()) return fb;

  const auto* o = r.finalOutcome();
  if (!o) return "The attempt was not verified.";
  switch (o->status) {
    case VerifierStatus::Verified: return "The attempt verified.";
    case VerifierStatus::Timeout:
      return "The verifier timed out on this attempt. Simplify the annotations or add intermediate assertions.";
    case VerifierStatus::ToolError: return "The verifier could not be run: " + o->exitDetail;
    case VerifierStatus::ParseOrResolveError:
      return "The attempt does not parse or resolve:\n" + diagnosticLines(*o);
    case VerifierStatus::VerificationFailed: break;
  }
  auto lines = diagnosticLines(*o);
  if (lines.empty()) return "The verifier rejected the attempt without reporting an error location.";
  return "The verifier reported these errors:\n" + lines;
}

namespace {

json toJson(const PruneTrace& t) {
  json rounds = json::array();
  for (const auto& r : t.rounds)
    rounds.push_back({{"removedClauseIds", r.removedClauseIds},
                      {"outcomeStatus", std::string(toString(r.outcomeStatus))}});
  json j = {{"rounds", rounds},
            {"finalStatus", std::string(toString(t.finalStatus))},
            {"verifierCalls", t.verifierCalls}};
  j["reason"] = t.reason ? json(std::string(toString(*t.reason))) : json(nullptr);
  return j;
}

PruneTrace traceFromJson(const json& j) {
  PruneTrace t;
  for (const auto& r : j.at("rounds")) {
    PruneRound round;
    round.removedClauseIds = r.at("removedClauseIds").get<std::vector<std::string>>();
    round.outcomeStatus = verifierStatusFromString(r.value("outcomeStatus", ""))
                              .value_or(VerifierStatus::VerificationFailed);
    t.rounds.push_back(std::move(round));
  }
  t.finalStatus = j.value("finalStatus", "") == "PrunedVerified" ? PruneStatus::PrunedVerified
                                                                 : PruneStatus::RestoredOriginal;
  t.verifierCalls = j.value("verifierCalls", 0);
  if (j.contains("reason") && j["reason"].is_string()) {
    auto s = j["reason"].get<std::string>();
    for (auto r : {RestoreReason::PostconditionUnprovable, RestoreReason::NoFlaggedClauses,
                   RestoreReason::RoundLimit, RestoreReason::VerifierFailure})
      if (toString(r) == s) t.reason = r;
  }
  return t;
}

json attemptJson(const AttemptRecord& r) {
  auto opt = [](const std::optional<VerifierOutcome>& o) {
    return o ? jsonio::toJson(*o) : json(nullptr);
  };
  json j = {{"index", r.index},
            {"promptDigest", r.promptDigest},
            {"rawResponse", r.rawResponse},
            {"extractedProgram", r.extractedProgram},
            {"diffVerdict", jsonio::toJson(r.diffVerdict)},
            {"preOutcome", opt(r.preOutcome)},
            {"pruneTrace", r.pruneTrace ? toJson(*r.pruneTrace) : json(nullptr)},
            {"postOutcome", opt(r.postOutcome)},
            {"retrievedTacticIds", r.retrievedTacticIds},
            {"elapsedSeconds", r.elapsedSeconds}};
  j["extractionError"] = r.extractionError ? json(*r.extractionError) : json(nullptr);
  return j;
}

}  // namespace

std::string attemptToJson(const AttemptRecord& r, int indent) { return attemptJson(r).dump(indent); }

AttemptRecord attemptFromJson(std::string_view text) {
  try {
    auto j = json::parse(text);
    const auto& table = PatternTable::defaultTable();
    AttemptRecord r;
    r.index = j.at("index").get<int>();
    r.promptDigest = j.value("promptDigest", "");
    r.rawResponse = j.value("rawResponse", "");
    r.extractedProgram = j.value("extractedProgram", "");
    if (j.contains("extractionError") && j["extractionError"].is_string())
      r.extractionError = j["extractionError"].get<std::string>();
    r.diffVerdict = jsonio::verdictFromJson(j.at("diffVerdict"));
    if (j.contains("preOutcome") && !j["preOutcome"].is_null())
      r.preOutcome = jsonio::outcomeFromJson(j["preOutcome"], table);
    if (j.contains("pruneTrace") && !j["pruneTrace"].is_null())
      r.pruneTrace = traceFromJson(j["pruneTrace"]);
    if (j.contains("postOutcome") && !j["postOutcome"].is_null())
      r.postOutcome = jsonio::outcomeFromJson(j["postOutcome"], table);
    r.retrievedTacticIds = j.value("retrievedTacticIds", std::vector<std::string>{});
    r.elapsedSeconds = j.value("elapsedSeconds", 0.0);
    return r;
  } catch (const json::exception& e) {
    throw LoadError(std::string("bad attempt record: ") + e.what());
  }
}

std::string resultToJson(const PipelineResult& result, int indent) {
  json attempts = json::array();
  for (const auto& a : result.attempts) attempts.push_back(attemptJson(a));
  json j = {{"status", std::string(toString(result.status))},
            {"failureDetail", result.failureDetail},
            {"attempts", attempts},
            {"unsound", result.unsound}};
  j["failureReason"] =
      result.failureReason ? json(std::string(toString(*result.failureReason))) : json(nullptr);
  j["finalProgram"] = result.finalProgram ? json(*result.finalProgram) : json(nullptr);
  j["verifiedAtAttempt"] = result.verifiedAtAttempt ? json(*result.verifiedAtAttempt) : json(nullptr);
  return j.dump(indent);
}

PipelineResult resultFromJson(std::string_view text) {
  try {
    auto j = json::parse(text);
    PipelineResult r;
    auto status = j.at("status").get<std::string>();
    r.status = status == "Verified"             ? PipelineStatus::Verified
               : status == "VerifiedAfterPrune" ? PipelineStatus::VerifiedAfterPrune
                                                : PipelineStatus::Failed;
    if (j.contains("failureReason") && j["failureReason"].is_string()) {
      auto s = j["failureReason"].get<std::string>();
      for (auto f : {FailureReason::AttemptsExhausted, FailureReason::ProviderError,
                     FailureReason::ToolError})
        if (toString(f) == s) r.failureReason = f;
    }
    r.failureDetail = j.value("failureDetail", "");
    for (const auto& a : j.at("attempts")) r.attempts.push_back(attemptFromJson(a.dump()));
    if (j.contains("finalProgram") && j["finalProgram"].is_string())
      r.finalProgram = j["finalProgram"].get<std::string>();
    if (j.contains("verifiedAtAttempt") && j["verifiedAtAttempt"].is_number())
      r.verifiedAtAttempt = j["verifiedAtAttempt"].get<int>();
    r.unsound = j.value("unsound", false);
    return r;
  } catch (const json::exception& e) {
    throw LoadError(std::string("bad pipeline result: ") + e.what());
  }
}

}  // namespace dfyannot
