#include <fstream>
#include <set>

#include "dfyannot/corpus.hpp"
#include "json_io.hpp"

namespace dfyannot {

using jsonio::json;

std::string CurationExample::toJsonLine() const {
  json j = {{"role", role},
            {"programId", programId},
            {"baseProgram", baseProgram},
            {"verifierFeedback", verifierFeedback},
            {"target", target}};
  j["failedAttempt"] = failedAttempt ? json(*failedAttempt) : json(nullptr);
  j["informalFeedback"] = informalFeedback ? json(*informalFeedback) : json(nullptr);
  return j.dump();
}

CurationSummary curate(const fs::path& runDir, const fs::path& groundTruthDir,
                       const CompletionFn& llm, const VerifyFn& verify, const fs::path& out,
                       const PromptTemplates& templates) {
  CurationSummary summary;
  auto attemptsDir = runDir / "attempts";
  if (!fs::is_directory(attemptsDir)) throw LoadError(attemptsDir.string() + ": no attempt files");

  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(attemptsDir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  for (const auto& f : files) {
    auto j = json::parse(readFile(f));
    auto id = j.at("programId").get<std::string>();
    auto base = j.at("base").get<std::string>();
    auto result = resultFromJson(j.at("result").dump());

    std::vector<const AttemptRecord*> failed;
    for (const auto& a : result.attempts)
      if (!result.verifiedAtAttempt || a.index != *result.verifiedAtAttempt) failed.push_back(&a);
    if (failed.empty()) continue;

    auto gtPath = groundTruthDir / id;
    if (!fs::exists(gtPath)) {
      summary.skipped.push_back({id, "no ground truth"});
      continue;
    }
    auto truth = readFile(gtPath);
    // Never emit a target that does not verify or that changes the base.
    if (!diffCheck(truth, base).equal()) {
      summary.skipped.push_back({id, "ground truth does not match the base program"});
      continue;
    }
    auto outcome = verify(truth);
    if (!outcome.verified()) {
      summary.skipped.push_back({id, "ground truth does not verify (" +
                                         std::string(toString(outcome.status)) + ")"});
      continue;
    }

    for (const auto* a : failed) {
      if (a->extractedProgram.empty()) continue;
      CurationExample ex;
      ex.role = "attempt-repair";
      ex.programId = id;
      ex.baseProgram = base;
      ex.failedAttempt = a->extractedProgram;
      ex.verifierFeedback = attemptFeedback(*a);
      ex.target = truth;
      summary.examples.push_back(std::move(ex));
    }

    std::set<std::pair<int, std::string>> seen;
    for (const auto* a : failed) {
      if (!a->preOutcome) continue;
      for (const auto* d : a->preOutcome->errors()) {
        if (!seen.insert({d->line, d->messageText}).second) continue;
        auto user = renderTemplate(templates.informalize, {{"LINE", std::to_string(d->line)},
                                                           {"MESSAGE", d->messageText},
                                                           {"PROGRAM", a->extractedProgram}});
        auto reply = trim(llm(Prompt::make(
            "You explain Dafny verifier errors to programmers in plain language.", {user}, user)));
        CurationExample ex;
        ex.role = "informalization";
        ex.programId = id;
        ex.baseProgram = base;
        ex.failedAttempt = a->extractedProgram;
        ex.verifierFeedback = "line " + std::to_string(d->line) + ": " + d->messageText;
        ex.informalFeedback = reply;
        ex.target = reply;
        summary.examples.push_back(std::move(ex));
      }
    }
  }

  std::string text;
  for (const auto& ex : summary.examples) text += ex.toJsonLine() + "\n";
  writeFile(out, text);
  return summary;
}

}  // namespace dfyannot
