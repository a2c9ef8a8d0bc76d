// dfyannot: command-line front end for the annotation pipeline.

#include <iostream>

#include <CLI11.hpp>

#include "dfyannot/corpus.hpp"

using namespace dfyannot;

namespace {

struct Overrides {
  std::string provider;
  std::string transcript;
  int maxAttempts = -1;
  bool noPrune = false;
  std::string hints;
};

void addOverrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--provider", o.provider, "remote, replay or scripted")
      ->check(CLI::IsMember({"remote", "replay", "scripted"}));
  cmd->add_option("--transcript", o.transcript, "transcript for the replay provider");
  cmd->add_option("--max-attempts", o.maxAttempts, "attempt budget")->check(CLI::NonNegativeNumber);
  cmd->add_flag("--no-prune", o.noPrune, "disable invariant pruning");
  cmd->add_option("--hints", o.hints, "all, triggered or off")
      ->check(CLI::IsMember({"all", "triggered", "off"}));
}

RunConfig loadConfig(const std::string& path, const Overrides& o = {}) {
  auto cfg = path.empty() ? RunConfig::parse("{}") : RunConfig::load(path);
  auto& pc = cfg.pipeline;
  if (!o.provider.empty()) pc.provider.kind = *providerKindFromString(o.provider);
  if (!o.transcript.empty()) {
    pc.provider.kind = ProviderConfig::Kind::Replay;
    pc.provider.transcriptPath = o.transcript;
  }
  if (o.maxAttempts >= 0) pc.maxAttempts = o.maxAttempts;
  if (o.noPrune) pc.pruneEnabled = false;
  if (!o.hints.empty()) pc.hintMode = *hintModeFromString(o.hints);
  return cfg;
}

VerifyFn verifierFor(const RunConfig& cfg, std::shared_ptr<ScriptedOracle>& keep) {
  if (cfg.oracle) {
    keep = std::make_shared<ScriptedOracle>(ScriptedOracle::load(*cfg.oracle, cfg.pipeline.verifier.patterns()));
    return keep->asVerifyFn();
  }
  return [vc = cfg.pipeline.verifier](const std::string& t) { return verify(t, vc); };
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Annotate Dafny programs with an LLM, gated by a diff check and the verifier."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dfyannot 0.1.0");

  // annotate
  std::string file, configPath, outPath, reportPath;
  Overrides over;
  auto* annotate = app.add_subcommand("annotate", "run the repair loop on one program");
  annotate->add_option("file", file, "base program")->required()->check(CLI::ExistingFile);
  annotate->add_option("--config", configPath, "JSON config")->check(CLI::ExistingFile);
  annotate->add_option("--out", outPath, "write the verified program here instead of stdout");
  annotate->add_option("--report", reportPath, "write the attempt records as JSON");
  addOverrides(annotate, over);

  // strip
  std::string kinds;
  auto* stripCmd = app.add_subcommand("strip", "remove annotations, print the base program");
  stripCmd->add_option("file", file)->required()->check(CLI::ExistingFile);
  stripCmd->add_option("--kinds", kinds, "comma-separated annotation kinds");

  // diff
  std::string candidate, basePath;
  auto* diffCmd = app.add_subcommand("diff", "check a candidate against its base program");
  diffCmd->add_option("candidate", candidate)->required()->check(CLI::ExistingFile);
  diffCmd->add_option("base", basePath)->required()->check(CLI::ExistingFile);

  // prune
  auto* pruneCmd = app.add_subcommand("prune", "drop non-inductive loop invariants");
  pruneCmd->add_option("file", file)->required()->check(CLI::ExistingFile);
  pruneCmd->add_option("--config", configPath)->check(CLI::ExistingFile);

  // bench
  std::string corpusDir;
  int workers = 1;
  auto* bench = app.add_subcommand("bench", "run the pipeline over a corpus");
  bench->add_option("corpus", corpusDir)->required()->check(CLI::ExistingDirectory);
  bench->add_option("--config", configPath)->check(CLI::ExistingFile);
  bench->add_option("--out", outPath, "report directory")->required();
  bench->add_option("--workers", workers)->check(CLI::PositiveNumber);
  addOverrides(bench, over);

  // repair
  std::string gtDir;
  auto* repair = app.add_subcommand("repair", "regenerate base programs from ground truths");
  repair->add_option("groundTruth", gtDir)->required()->check(CLI::ExistingDirectory);
  repair->add_option("--out", outPath, "base program directory")->required();
  repair->add_option("--config", configPath)->check(CLI::ExistingFile);

  // curate
  std::string runDir;
  auto* curateCmd = app.add_subcommand("curate", "build fine-tuning examples from a bench run");
  curateCmd->add_option("runDir", runDir)->required()->check(CLI::ExistingDirectory);
  curateCmd->add_option("groundTruth", gtDir)->required()->check(CLI::ExistingDirectory);
  curateCmd->add_option("--out", outPath, "JSONL output")->required();
  curateCmd->add_option("--config", configPath)->check(CLI::ExistingFile);

  // hints
  std::string failedPath, truthPath, quarantine = "quarantine";
  bool promote = false;
  auto* hints = app.add_subcommand("hints", "tactic store tools");
  hints->require_subcommand(1);
  auto* hintsList = hints->add_subcommand("list", "print the tactics in the store");
  hintsList->add_option("--config", configPath)->check(CLI::ExistingFile);
  auto* gen = hints->add_subcommand("gen", "derive a tactic from a failed attempt and its fix");
  gen->add_option("failed", failedPath)->required()->check(CLI::ExistingFile);
  gen->add_option("groundtruth", truthPath)->required()->check(CLI::ExistingFile);
  gen->add_option("--config", configPath)->check(CLI::ExistingFile);
  gen->add_flag("--promote", promote, "add to the configured tactics directory");
  gen->add_option("--quarantine-dir", quarantine, "where unpromoted tactics go");
  addOverrides(gen, over);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*annotate) {
      auto cfg = loadConfig(configPath, over);
      auto deps = makeDepsFactory(cfg)(std::filesystem::path(file).filename().string());
      auto store = loadStoreFor(cfg);
      PipelineDeps pd{deps.verify, deps.complete, {}, {}, {}, store.get(), deps.clock};
      auto base = readFile(file);
      auto result = runPipeline(base, cfg.pipeline, std::move(pd));
      if (!reportPath.empty()) writeFile(reportPath, resultToJson(result));
      std::cerr << toString(result.status);
      if (result.failureReason) std::cerr << " (" << toString(*result.failureReason) << ": " << result.failureDetail << ")";
      if (result.verifiedAtAttempt) std::cerr << " at attempt " << *result.verifiedAtAttempt;
      if (result.unsound) std::cerr << " [UNSOUND: diff check disabled]";
      std::cerr << "\n";
      if (!result.finalProgram) return 1;
      if (outPath.empty()) std::cout << *result.finalProgram;
      else writeFile(outPath, *result.finalProgram);
      return 0;
    }
    if (*stripCmd) {
      KindSet set = defaultStrippableKinds();
      if (!kinds.empty()) {
        set.clear();
        std::string item;
        for (std::size_t i = 0; i <= kinds.size(); ++i) {
          if (i == kinds.size() || kinds[i] == ',') {
            auto k = annotationKindFromString(trim(item));
            if (!k) throw Error("unknown annotation kind: " + item);
            set.insert(*k);
            item.clear();
          } else {
            item += kinds[i];
          }
        }
      }
      auto program = parseProgram(readFile(file));
      if (!program.scanStatus.ok()) throw Error(program.scanStatus.describe());
      std::cout << strip(program, set);
      return 0;
    }
    if (*diffCmd) {
      auto v = diffCheck(readFile(candidate), readFile(basePath));
      std::cout << v.describe() << "\n";
      if (v.equal()) return 0;
      return std::holds_alternative<DiffScanFailure>(v.verdict) ? 2 : 1;
    }
    if (*pruneCmd) {
      auto cfg = loadConfig(configPath);
      std::shared_ptr<ScriptedOracle> keep;
      auto v = verifierFor(cfg, keep);
      auto program = parseProgram(readFile(file), cfg.pipeline.scan);
      if (!program.scanStatus.ok()) throw Error(program.scanStatus.describe());
      PruneOptions opts;
      opts.columnBase = cfg.pipeline.verifier.columnBase;
      opts.scan = cfg.pipeline.scan;
      auto r = pruneNonInductive(program, v, opts);
      std::cout << r.program.sourceText;
      std::cerr << toString(r.trace.finalStatus);
      if (r.trace.reason) std::cerr << " (" << toString(*r.trace.reason) << ")";
      std::cerr << ", " << r.trace.rounds.size() << " rounds, " << r.trace.verifierCalls << " verifier calls\n";
      for (std::size_t i = 0; i < r.trace.rounds.size(); ++i) {
        std::cerr << "  round " << i + 1 << ":";
        for (const auto& id : r.trace.rounds[i].removedClauseIds) std::cerr << " " << id;
        std::cerr << "\n";
      }
      return r.trace.finalStatus == PruneStatus::PrunedVerified ? 0 : 1;
    }
    if (*bench) {
      auto cfg = loadConfig(configPath, over);
      auto report = benchRun(corpusDir, cfg, makeDepsFactory(cfg), {workers, std::filesystem::path(outPath)});
      std::cout << report.verifiedCount << "/" << report.total << " verified ("
                << report.verifiedFraction << ")\n";
      return 0;
    }
    if (*repair) {
      auto cfg = loadConfig(configPath);
      std::shared_ptr<ScriptedOracle> keep;
      auto resolve = cfg.oracle ? verifierFor(cfg, keep) : makeResolveFn(cfg.pipeline.verifier);
      auto report = repairDataset(gtDir, outPath, resolve);
      std::cout << report.toJson() << "\n";
      return report.repaired == report.total ? 0 : 1;
    }
    if (*curateCmd) {
      auto cfg = loadConfig(configPath);
      std::shared_ptr<ScriptedOracle> keep;
      auto v = verifierFor(cfg, keep);
      auto deps = makeDepsFactory(cfg)("curate");
      auto summary = curate(runDir, gtDir, deps.complete, v, outPath, cfg.pipeline.templates);
      for (const auto& s : summary.skipped) std::cerr << "skipped " << s.programId << ": " << s.reason << "\n";
      std::cout << summary.examples.size() << " examples written to " << outPath << "\n";
      return 0;
    }
    if (*hintsList) {
      auto cfg = loadConfig(configPath);
      for (const auto& t : loadStoreFor(cfg)->tactics()) std::cout << t.id << "\t" << t.title << "\n";
      return 0;
    }
    if (*gen) {
      auto cfg = loadConfig(configPath, over);
      auto deps = makeDepsFactory(cfg)(std::filesystem::path(failedPath).filename().string());
      GenerateOptions opts;
      opts.failedRef = failedPath;
      opts.groundTruthRef = truthPath;
      opts.templates = cfg.pipeline.templates;
      auto tactic = generateTactic(readFile(failedPath), readFile(truthPath), deps.complete, opts);
      std::filesystem::path dir = quarantine;
      if (promote) {
        if (!cfg.tacticsDir) throw Error("--promote needs tacticsDir in the config");
        auto store = loadTactics(*cfg.tacticsDir);
        store.add(tactic);  // rejects duplicates before anything is written
        dir = *cfg.tacticsDir;
        saveTactics(store, dir);
      } else {
        writeFile(dir / (tactic.id + ".tactic"), serializeTactic(tactic));
      }
      std::cout << "Tactic: " << tactic.title << "\n" << tactic.body << "\n";
      std::cerr << (promote ? "added to " : "quarantined in ") << dir.string() << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
