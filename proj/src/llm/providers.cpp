#include <fstream>
#include <iostream>

#include "dfyannot/llm.hpp"
#include "json_io.hpp"

namespace dfyannot {

using jsonio::json;

std::string_view toString(ProviderConfig::Kind k) {
  switch (k) {
    case ProviderConfig::Kind::Remote: return "remote";
    case ProviderConfig::Kind::Replay: return "replay";
    case ProviderConfig::Kind::Scripted: return "scripted";
  }
  return "?";
}

std::optional<ProviderConfig::Kind> providerKindFromString(std::string_view s) {
  if (s == "remote") return ProviderConfig::Kind::Remote;
  if (s == "replay") return ProviderConfig::Kind::Replay;
  if (s == "scripted") return ProviderConfig::Kind::Scripted;
  return std::nullopt;
}

void ProviderConfig::validate() const {
  switch (kind) {
    case Kind::Remote:
      if (endpointUrl.empty()) throw LoadError("remote provider needs endpointUrl");
      if (modelId.empty()) throw LoadError("remote provider needs modelId");
      if (authTokenEnvVar.empty()) throw LoadError("remote provider needs authTokenEnvVar");
      break;
    case Kind::Replay:
      if (transcriptPath.empty()) throw LoadError("replay provider needs transcriptPath");
      break;
    case Kind::Scripted:
      break;
  }
  if (maxRetries < 0) throw LoadError("maxRetries must be >= 0");
}

CompletionFn Provider::asCompletionFn() {
  // the caller keeps the provider alive for as long as the function is used
  return [this](const Prompt& p) { return complete(p); };
}

// ---------------------------------------------------------------------------

ScriptedProvider::ScriptedProvider(std::vector<std::string> responses, std::vector<Rule> rules)
    : responses_(std::move(responses)), rules_(std::move(rules)) {}

std::shared_ptr<ScriptedProvider> ScriptedProvider::fromJson(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw LoadError(std::string("provider script is not valid JSON: ") + e.what());
  }
  std::vector<std::string> seq;
  std::vector<Rule> rules;
  try {
    if (j.is_array()) {
      seq = j.get<std::vector<std::string>>();
    } else {
      seq = j.value("sequence", std::vector<std::string>{});
      for (const auto& r : j.value("rules", json::array())) {
        Rule rule;
        rule.promptContains = r.value("promptContains", std::vector<std::string>{});
        rule.promptAbsent = r.value("promptAbsent", std::vector<std::string>{});
        rule.response = r.at("response").get<std::string>();
        rules.push_back(std::move(rule));
      }
    }
  } catch (const json::exception& e) {
    throw LoadError(std::string("bad provider script: ") + e.what());
  }
  return std::make_shared<ScriptedProvider>(std::move(seq), std::move(rules));
}

std::string ScriptedProvider::complete(const Prompt& prompt) {
  std::lock_guard lock(mu_);
  ++calls_;
  const auto& text = prompt.userText;
  for (const auto& r : rules_) {
    bool ok = true;
    for (const auto& s : r.promptContains) ok = ok && text.find(s) != std::string::npos;
    for (const auto& s : r.promptAbsent) ok = ok && text.find(s) == std::string::npos;
    if (ok) return r.response;
  }
  if (next_ >= responses_.size())
    throw ScriptExhausted("scripted provider has no response left after " +
                          std::to_string(responses_.size()));
  return responses_[next_++];
}

std::size_t ScriptedProvider::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

// ---------------------------------------------------------------------------

std::string transcriptLine(const TranscriptRecord& r) {
  json meta;
  try {
    meta = json::parse(r.providerMeta.empty() ? "{}" : r.providerMeta);
  } catch (const json::exception&) {
    meta = r.providerMeta;
  }
  json j = {{"promptDigest", r.promptDigest},
            {"promptText", r.promptText},
            {"responseText", r.responseText},
            {"providerMeta", meta}};
  return j.dump();
}

std::vector<TranscriptRecord> readTranscript(const std::filesystem::path& path) {
  std::vector<TranscriptRecord> out;
  auto lines = splitLines(readFile(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    try {
      auto j = json::parse(lines[i]);
      TranscriptRecord r;
      r.promptDigest = j.at("promptDigest").get<std::string>();
      r.promptText = j.value("promptText", "");
      r.responseText = j.at("responseText").get<std::string>();
      r.providerMeta = j.contains("providerMeta") ? j["providerMeta"].dump() : "{}";
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw LoadError(path.string() + ":" + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

ReplayProvider::ReplayProvider(std::vector<TranscriptRecord> records, bool strict)
    : records_(std::move(records)), strict_(strict) {}

std::shared_ptr<ReplayProvider> ReplayProvider::load(const std::filesystem::path& path, bool strict) {
  return std::make_shared<ReplayProvider>(readTranscript(path), strict);
}

std::string ReplayProvider::complete(const Prompt& prompt) {
  std::lock_guard lock(mu_);
  std::size_t ordinal = ordinal_++;
  for (const auto& r : records_)
    if (r.promptDigest == prompt.digest) return r.responseText;
  if (strict_) throw ReplayMiss("no transcript record for prompt digest " + prompt.digest);
  if (ordinal >= records_.size())
    throw ReplayMiss("no transcript record for prompt digest " + prompt.digest + " and ordinal " +
                     std::to_string(ordinal) + " is past the end");
  ++fuzzy_;
  std::cerr << "replay: fuzzy hit, digest " << prompt.digest.substr(0, 16)
            << " not recorded, using record " << ordinal << "\n";
  return records_[ordinal].responseText;
}

std::size_t ReplayProvider::fuzzyHits() const {
  std::lock_guard lock(mu_);
  return fuzzy_;
}

RecordingProvider::RecordingProvider(std::shared_ptr<Provider> inner, std::filesystem::path path)
    : inner_(std::move(inner)), path_(std::move(path)) {}

std::string RecordingProvider::complete(const Prompt& prompt) {
  auto response = inner_->complete(prompt);
  TranscriptRecord r{prompt.digest, prompt.systemText + "\n\n" + prompt.userText, response,
                     inner_->meta()};
  // several recorders may share one transcript file
  static std::mutex fileMu;
  std::lock_guard lock(fileMu);
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  if (!out) throw Error("cannot append to transcript " + path_.string());
  out << transcriptLine(r) << "\n";
  return response;
}

std::shared_ptr<Provider> makeProvider(const ProviderConfig& cfg) {
  cfg.validate();
  switch (cfg.kind) {
    case ProviderConfig::Kind::Remote: return std::make_shared<RemoteProvider>(cfg);
    case ProviderConfig::Kind::Replay: return ReplayProvider::load(cfg.transcriptPath, cfg.strictReplay);
    case ProviderConfig::Kind::Scripted: return std::make_shared<ScriptedProvider>(cfg.script);
  }
  throw Error("unknown provider kind");
}

}  // namespace dfyannot
