#include <filesystem>

#include "dfyannot/embedded.hpp"
#include "dfyannot/llm.hpp"

namespace dfyannot {

Prompt Prompt::make(std::string systemText, std::vector<std::string> userTurns,
                    std::string userText) {
  Prompt p;
  p.systemText = std::move(systemText);
  p.userTurns = std::move(userTurns);
  p.userText = std::move(userText);
  std::vector<std::string_view> fields{p.systemText};
  for (const auto& t : p.userTurns) fields.push_back(t);
  fields.push_back(p.userText);
  p.digest = digestFields(fields);
  return p;
}

std::size_t Prompt::estimatedTokens() const {
  // ~4 characters per token is close enough for a ceiling check
  return (systemText.size() + userText.size() + 3) / 4;
}

PromptTemplates PromptTemplates::builtin() {
  const auto& files = embeddedFiles();
  PromptTemplates t;
  t.system = files.at("prompts/system.txt");
  t.user = files.at("prompts/user.txt");
  t.attempt = files.at("prompts/attempt.txt");
  t.tacticGeneration = files.at("prompts/tactic_generation.txt");
  t.informalize = files.at("prompts/informalize.txt");
  return t;
}

PromptTemplates PromptTemplates::fromDirectory(const std::string& dir) {
  auto t = builtin();
  auto pick = [&](std::string& slot, const char* name) {
    auto path = std::filesystem::path(dir) / name;
    if (std::filesystem::exists(path)) slot = readFile(path);
  };
  pick(t.system, "system.txt");
  pick(t.user, "user.txt");
  pick(t.attempt, "attempt.txt");
  pick(t.tacticGeneration, "tactic_generation.txt");
  pick(t.informalize, "informalize.txt");
  return t;
}

Prompt buildPrompt(const std::string& base, const std::vector<AttemptRecord>& attempts,
                   const std::vector<Tactic>& hints, const PromptOptions& options) {
  const auto& tpl = options.templates;
  std::vector<std::string> turns{base};
  std::string attemptText;
  for (const auto& a : attempts) {
    const auto& program = a.extractionError ? a.rawResponse : a.extractedProgram;
    auto turn = renderTemplate(tpl.attempt, {{"INDEX", std::to_string(a.index)},
                                             {"PROGRAM", trim(program)},
                                             {"FEEDBACK", attemptFeedback(a)}});
    attemptText += turn;
    turns.push_back(std::move(turn));
  }
  std::string hintText;
  if (!hints.empty()) {
    hintText = "\nThe following proof strategies may help:\n\n" + formatForPrompt(hints) + "\n";
    turns.push_back(hintText);
  }
  auto user = renderTemplate(tpl.user, {{"BASE", trim(base)}, {"ATTEMPTS", attemptText}, {"HINTS", hintText}});
  auto prompt = Prompt::make(tpl.system, std::move(turns), std::move(user));
  if (options.tokenCeiling && prompt.estimatedTokens() > options.tokenCeiling) {
    throw PromptTooLarge("prompt needs ~" + std::to_string(prompt.estimatedTokens()) +
                         " tokens, ceiling is " + std::to_string(options.tokenCeiling));
  }
  return prompt;
}

Prompt buildPromptWithinBudget(const std::string& base, const std::vector<AttemptRecord>& attempts,
                               const std::vector<Tactic>& hints, const PromptOptions& options) {
  std::size_t drop = 0;
  while (true) {
    std::vector<AttemptRecord> kept(attempts.begin() + static_cast<std::ptrdiff_t>(drop), attempts.end());
    try {
      return buildPrompt(base, kept, hints, options);
    } catch (const PromptTooLarge&) {
      if (kept.size() <= 1) throw;
      ++drop;
    }
  }
}

}  // namespace dfyannot
