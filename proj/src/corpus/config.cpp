#include <algorithm>

#include "dfyannot/corpus.hpp"
#include "json_io.hpp"

namespace dfyannot {

using jsonio::json;

namespace {

fs::path resolvePath(const fs::path& baseDir, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : baseDir / path;
}

template <typename T>
void take(const json& j, const char* key, T& slot) {
  if (j.contains(key) && !j[key].is_null()) slot = j[key].get<T>();
}

}  // namespace

RunConfig RunConfig::parse(std::string_view text, const fs::path& baseDir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw LoadError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw LoadError("config must be a JSON object");

  RunConfig rc;
  auto& pc = rc.pipeline;
  try {
    take(j, "maxAttempts", pc.maxAttempts);
    if (pc.maxAttempts < 0) throw LoadError("maxAttempts must be >= 0");
    take(j, "pruneEnabled", pc.pruneEnabled);
    take(j, "diffCheckEnabled", pc.diffCheckEnabled);
    take(j, "promptTokenCeiling", pc.promptTokenCeiling);
    if (j.contains("hintMode")) {
      auto m = hintModeFromString(j["hintMode"].get<std::string>());
      if (!m) throw LoadError("hintMode must be all, triggered or off");
      pc.hintMode = *m;
    }
    if (j.contains("strippableKinds")) {
      pc.strippableKinds.clear();
      for (const auto& k : j["strippableKinds"]) {
        auto kind = annotationKindFromString(k.get<std::string>());
        if (!kind) throw LoadError("unknown annotation kind: " + k.get<std::string>());
        pc.strippableKinds.insert(*kind);
      }
    }
    if (j.contains("lemmaAllowlist"))
      for (const auto& n : j["lemmaAllowlist"]) pc.scan.lemmaAllowlist.insert(n.get<std::string>());
    if (j.contains("promptsDir"))
      pc.templates = PromptTemplates::fromDirectory(resolvePath(baseDir, j["promptsDir"]).string());

    if (j.contains("verifier")) {
      const auto& v = j["verifier"];
      auto& vc = pc.verifier;
      if (v.contains("binaryPath")) vc.binaryPath = resolvePath(baseDir, v["binaryPath"]).string();
      take(v, "binaryEnvVar", vc.binaryEnvVar);
      take(v, "timeLimitSeconds", vc.timeLimitSeconds);
      take(v, "graceSeconds", vc.graceSeconds);
      take(v, "extraArgs", vc.extraArgs);
      take(v, "keepTempFiles", vc.keepTempFiles);
      take(v, "maxWorkers", vc.maxWorkers);
      take(v, "columnBase", vc.columnBase);
      if (v.contains("tempDir")) vc.tempDir = resolvePath(baseDir, v["tempDir"]);
      if (v.contains("patternTable"))
        vc.table = std::make_shared<PatternTable>(
            PatternTable::load(resolvePath(baseDir, v["patternTable"])));
    }

    if (j.contains("provider")) {
      const auto& p = j["provider"];
      auto& pr = pc.provider;
      auto kind = providerKindFromString(p.value("kind", "scripted"));
      if (!kind) throw LoadError("provider.kind must be remote, replay or scripted");
      pr.kind = *kind;
      take(p, "endpointUrl", pr.endpointUrl);
      take(p, "modelId", pr.modelId);
      take(p, "authTokenEnvVar", pr.authTokenEnvVar);
      take(p, "maxOutputTokens", pr.maxOutputTokens);
      take(p, "temperature", pr.temperature);
      take(p, "requestTimeoutSeconds", pr.requestTimeoutSeconds);
      take(p, "maxRetries", pr.maxRetries);
      take(p, "retryBackoffSeconds", pr.retryBackoffSeconds);
      take(p, "maxInFlight", pr.maxInFlight);
      take(p, "requestsPerMinute", pr.requestsPerMinute);
      take(p, "strictReplay", pr.strictReplay);
      take(p, "script", pr.script);
      if (p.contains("transcriptPath")) pr.transcriptPath = resolvePath(baseDir, p["transcriptPath"]);
      if (p.contains("scriptFile")) rc.providerScript = resolvePath(baseDir, p["scriptFile"]);
      if (p.contains("scriptDir")) rc.providerScriptDir = resolvePath(baseDir, p["scriptDir"]);
      if (p.contains("recordTo")) rc.recordTranscript = resolvePath(baseDir, p["recordTo"]);
    }
    if (j.contains("tacticsDir")) rc.tacticsDir = resolvePath(baseDir, j["tacticsDir"]);
    if (j.contains("oracle")) rc.oracle = resolvePath(baseDir, j["oracle"]);
    if (j.contains("oracleDir")) rc.oracleDir = resolvePath(baseDir, j["oracleDir"]);
    take(j, "deterministicClock", rc.deterministicClock);
  } catch (const json::exception& e) {
    throw LoadError(std::string("bad config: ") + e.what());
  }
  rc.snapshot = j.dump();
  return rc;
}

RunConfig RunConfig::load(const fs::path& path) {
  try {
    return parse(readFile(path), path.parent_path().empty() ? fs::path(".") : path.parent_path());
  } catch (const LoadError& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

std::shared_ptr<const TacticStore> loadStoreFor(const RunConfig& cfg) {
  if (cfg.tacticsDir) return std::make_shared<TacticStore>(loadTactics(*cfg.tacticsDir));
  return std::shared_ptr<const TacticStore>(&builtinTactics(), [](const TacticStore*) {});
}

std::vector<std::string> listPrograms(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw LoadError(dir.string() + ": corpus directory not found");
  std::vector<std::string> ids;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".dfy")
      ids.push_back(fs::relative(e.path(), dir).generic_string());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

namespace {

fs::path perProgram(const fs::path& dir, const std::string& programId) {
  return (dir / programId).replace_extension(".json");
}

}  // namespace

DepsFactory makeDepsFactory(const RunConfig& cfg) {
  std::shared_ptr<std::vector<TranscriptRecord>> transcript;
  if (cfg.pipeline.provider.kind == ProviderConfig::Kind::Replay)
    transcript = std::make_shared<std::vector<TranscriptRecord>>(
        readTranscript(cfg.pipeline.provider.transcriptPath));
  std::shared_ptr<Provider> remote;
  if (cfg.pipeline.provider.kind == ProviderConfig::Kind::Remote)
    remote = makeProvider(cfg.pipeline.provider);  // one shared rate limit

  return [cfg, transcript, remote](const std::string& programId) {
    ProgramDeps deps;
    const auto& table = cfg.pipeline.verifier.patterns();

    std::optional<fs::path> oraclePath = cfg.oracle;
    if (cfg.oracleDir) oraclePath = perProgram(*cfg.oracleDir, programId);
    if (oraclePath) {
      auto oracle = std::make_shared<ScriptedOracle>(ScriptedOracle::load(*oraclePath, table));
      deps.verify = oracle->asVerifyFn();
      deps.keepAlive.push_back(oracle);
    } else {
      deps.verify = [vc = cfg.pipeline.verifier](const std::string& text) { return verify(text, vc); };
    }

    std::shared_ptr<Provider> provider;
    const auto& pc = cfg.pipeline.provider;
    switch (pc.kind) {
      case ProviderConfig::Kind::Remote: provider = remote; break;
      case ProviderConfig::Kind::Replay:
        provider = std::make_shared<ReplayProvider>(*transcript, pc.strictReplay);
        break;
      case ProviderConfig::Kind::Scripted:
        if (cfg.providerScriptDir) {
          provider = ScriptedProvider::fromJson(readFile(perProgram(*cfg.providerScriptDir, programId)));
        } else if (cfg.providerScript) {
          provider = ScriptedProvider::fromJson(readFile(*cfg.providerScript));
        } else {
          provider = std::make_shared<ScriptedProvider>(pc.script);
        }
        break;
    }
    if (cfg.recordTranscript) provider = std::make_shared<RecordingProvider>(provider, *cfg.recordTranscript);
    deps.complete = provider->asCompletionFn();
    deps.keepAlive.push_back(provider);
    if (cfg.deterministicClock) deps.clock = [] { return 0.0; };
    return deps;
  };
}

}  // namespace dfyannot
