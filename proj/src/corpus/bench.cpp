#include <atomic>
#include <thread>

#include "dfyannot/corpus.hpp"
#include "json_io.hpp"

namespace dfyannot {

using jsonio::json;

std::string RunReport::toJson() const {
  json per = json::object();
  for (const auto& [id, s] : perProgram) {
    per[id] = {{"status", s.status},
               {"failureReason", s.failureReason ? json(*s.failureReason) : json(nullptr)},
               {"verifiedAtAttempt", s.verifiedAtAttempt ? json(*s.verifiedAtAttempt) : json(nullptr)},
               {"attemptsUsed", s.attemptsUsed},
               {"wallSeconds", s.wallSeconds}};
  }
  json snapshot;
  try {
    snapshot = configSnapshot.empty() ? json::object() : json::parse(configSnapshot);
  } catch (const json::exception&) {
    snapshot = configSnapshot;
  }
  json j = {{"perProgram", per},
            {"aggregates",
             {{"total", total},
              {"verifiedCount", verifiedCount},
              {"verifiedFraction", verifiedFraction},
              {"cumulativeByAttempt", cumulativeByAttempt}}},
            {"configSnapshot", snapshot},
            {"ablationFlags", ablationFlags}};
  return j.dump(2);
}

std::string RunReport::curveCsv() const {
  std::string out = "attempt,cumulative,total\n";
  for (std::size_t k = 0; k < cumulativeByAttempt.size(); ++k)
    out += std::to_string(k) + "," + std::to_string(cumulativeByAttempt[k]) + "," +
           std::to_string(total) + "\n";
  return out;
}

void writeAttemptFile(const fs::path& runDir, const std::string& programId, const std::string& base,
                      const PipelineResult& result) {
  json j = {{"programId", programId}, {"base", base}, {"result", json::parse(resultToJson(result))}};
  writeFile(runDir / "attempts" / (programId + ".json"), j.dump(2));
}

RunReport benchRun(const fs::path& corpusDir, const RunConfig& cfg, const DepsFactory& factory,
                   const BenchOptions& options) {
  auto ids = listPrograms(corpusDir);
  auto store = loadStoreFor(cfg);
  std::vector<PipelineResult> results(ids.size());
  std::vector<std::string> bases(ids.size());

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < ids.size();) {
      try {
        bases[i] = readFile(corpusDir / ids[i]);
        auto d = factory(ids[i]);
        PipelineDeps deps;
        deps.verify = d.verify;
        deps.complete = d.complete;
        deps.clock = d.clock;
        deps.tactics = store.get();
        results[i] = runPipeline(bases[i], cfg.pipeline, std::move(deps));
      } catch (const std::exception& e) {
        // one program's setup failure never aborts the batch
        results[i] = PipelineResult{};
        results[i].failureReason = FailureReason::ToolError;
        results[i].failureDetail = e.what();
      }
    }
  };
  int n = std::max(1, std::min<int>(options.workers, static_cast<int>(ids.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  RunReport report;
  report.total = static_cast<int>(ids.size());
  report.configSnapshot = cfg.snapshot;
  report.ablationFlags = {{"pruneEnabled", cfg.pipeline.pruneEnabled ? "true" : "false"},
                          {"hintMode", std::string(toString(cfg.pipeline.hintMode))},
                          {"diffCheckEnabled", cfg.pipeline.diffCheckEnabled ? "true" : "false"}};
  report.cumulativeByAttempt.assign(static_cast<std::size_t>(cfg.pipeline.maxAttempts), 0);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& r = results[i];
    ProgramSummary s;
    s.status = std::string(toString(r.status));
    if (r.failureReason) s.failureReason = std::string(toString(*r.failureReason));
    s.verifiedAtAttempt = r.verifiedAtAttempt;
    s.attemptsUsed = static_cast<int>(r.attempts.size());
    for (const auto& a : r.attempts) s.wallSeconds += a.elapsedSeconds;
    if (r.succeeded()) {
      ++report.verifiedCount;
      for (auto k = static_cast<std::size_t>(*r.verifiedAtAttempt); k < report.cumulativeByAttempt.size(); ++k)
        ++report.cumulativeByAttempt[k];
    }
    report.perProgram[ids[i]] = s;
    report.results[ids[i]] = r;
  }
  report.verifiedFraction = report.total ? static_cast<double>(report.verifiedCount) / report.total : 0.0;

  if (options.reportDir) {
    writeFile(*options.reportDir / "report.json", report.toJson());
    writeFile(*options.reportDir / "curve.csv", report.curveCsv());
    for (std::size_t i = 0; i < ids.size(); ++i)
      writeAttemptFile(*options.reportDir, ids[i], bases[i], results[i]);
  }
  return report;
}

}  // namespace dfyannot
