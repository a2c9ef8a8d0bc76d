#pragma once

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "dfyannot/hints.hpp"
#include "dfyannot/prompt.hpp"
#include "dfyannot/records.hpp"

namespace dfyannot {

class PromptTooLarge : public Error {
 public:
  using Error::Error;
};
class EmptyResponse : public Error {
 public:
  using Error::Error;
};

struct PromptOptions {
  PromptTemplates templates = PromptTemplates::builtin();
  /// Estimated-token ceiling; 0 disables the check.
  std::size_t tokenCeiling = 0;
};

/// Throws PromptTooLarge when the estimate exceeds the ceiling.
Prompt buildPrompt(const std::string& base, const std::vector<AttemptRecord>& attempts,
                   const std::vector<Tactic>& hints, const PromptOptions& options = {});

/// Like buildPrompt, but drops the oldest attempts until the prompt fits. The
/// base program and the latest attempt are never dropped; if those alone are
/// too large PromptTooLarge propagates.
Prompt buildPromptWithinBudget(const std::string& base, const std::vector<AttemptRecord>& attempts,
                               const std::vector<Tactic>& hints, const PromptOptions& options);

/// Content of the longest fenced block mentioning method, function or lemma;
/// else the longest fenced block; else the trimmed response.
std::string extractProgram(std::string_view rawResponse);

// ---------------------------------------------------------------------------

struct ProviderConfig {
  enum class Kind { Remote, Replay, Scripted };
  Kind kind = Kind::Scripted;

  // remote
  std::string endpointUrl;
  std::string modelId;
  std::string authTokenEnvVar = "DFYANNOT_API_KEY";
  int maxOutputTokens = 4096;
  double temperature = 0.0;
  double requestTimeoutSeconds = 120.0;
  int maxRetries = 3;
  double retryBackoffSeconds = 2.0;
  int maxInFlight = 4;
  int requestsPerMinute = 0;  // 0 = unlimited

  // replay
  std::filesystem::path transcriptPath;
  bool strictReplay = false;

  // scripted
  std::vector<std::string> script;

  /// Throws LoadError when a field its kind requires is missing.
  void validate() const;
};

std::string_view toString(ProviderConfig::Kind k);
std::optional<ProviderConfig::Kind> providerKindFromString(std::string_view s);

class Provider {
 public:
  virtual ~Provider() = default;
  virtual std::string complete(const Prompt& prompt) = 0;
  virtual std::string meta() const { return "{}"; }
  CompletionFn asCompletionFn();
};

/// Responses in order; optional rules pick a response by prompt content first.
class ScriptedProvider : public Provider {
 public:
  struct Rule {
    std::vector<std::string> promptContains;
    std::vector<std::string> promptAbsent;
    std::string response;
  };

  explicit ScriptedProvider(std::vector<std::string> responses, std::vector<Rule> rules = {});
  /// A bare JSON array of responses, or {"rules": [...], "sequence": [...]}.
  static std::shared_ptr<ScriptedProvider> fromJson(std::string_view text);

  std::string complete(const Prompt& prompt) override;
  std::size_t calls() const;

 private:
  std::vector<std::string> responses_;
  std::vector<Rule> rules_;
  std::size_t next_ = 0;
  std::size_t calls_ = 0;
  mutable std::mutex mu_;
};

struct TranscriptRecord {
  std::string promptDigest;
  std::string promptText;
  std::string responseText;
  std::string providerMeta = "{}";  // JSON object text
};

std::vector<TranscriptRecord> readTranscript(const std::filesystem::path& path);
std::string transcriptLine(const TranscriptRecord& record);

/// Looks responses up by prompt digest. On a miss it falls back to the record
/// at the same ordinal position (a "fuzzy" hit) unless strict.
class ReplayProvider : public Provider {
 public:
  ReplayProvider(std::vector<TranscriptRecord> records, bool strict);
  static std::shared_ptr<ReplayProvider> load(const std::filesystem::path& path, bool strict);

  std::string complete(const Prompt& prompt) override;
  std::size_t fuzzyHits() const;

 private:
  std::vector<TranscriptRecord> records_;
  bool strict_;
  std::size_t ordinal_ = 0;
  std::size_t fuzzy_ = 0;
  mutable std::mutex mu_;
};

/// Passes through to another provider and appends every exchange to a
/// transcript file.
class RecordingProvider : public Provider {
 public:
  RecordingProvider(std::shared_ptr<Provider> inner, std::filesystem::path transcriptPath);
  std::string complete(const Prompt& prompt) override;

 private:
  std::shared_ptr<Provider> inner_;
  std::filesystem::path path_;
};

/// OpenAI-style chat-completion endpoint over HTTP(S).
class RemoteProvider : public Provider {
 public:
  explicit RemoteProvider(ProviderConfig cfg);
  std::string complete(const Prompt& prompt) override;
  std::string meta() const override;

  /// Request body for `prompt`; exposed for tests.
  std::string requestBody(const Prompt& prompt) const;
  /// Text of the first choice in a chat-completion response body.
  static std::string parseResponseBody(std::string_view body);

 private:
  void acquire();
  void release();

  ProviderConfig cfg_;
  std::mutex mu_;
  std::condition_variable cv_;
  int inFlight_ = 0;
  std::vector<std::chrono::steady_clock::time_point> recent_;
};

std::shared_ptr<Provider> makeProvider(const ProviderConfig& cfg);

}  // namespace dfyannot
