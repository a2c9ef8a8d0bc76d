#include "dfyannot/corpus.hpp"
#include "json_io.hpp"

namespace dfyannot {

using jsonio::json;

std::string RepairReport::toJson() const {
  json per = json::object();
  for (const auto& [id, e] : perProgram) {
    json j = {{"wasBroken", e.wasBroken},
              {"repaired", e.repaired},
              {"annotationsRemoved", e.annotationsRemoved},
              {"hadBase", e.hadBase}};
    if (!e.scanned) j["error"] = e.error;
    per[id] = j;
  }
  json j = {{"perProgram", per},
            {"totals",
             {{"total", total},
              {"wasBroken", wasBroken},
              {"repaired", repaired},
              {"fixed", fixed},
              {"scanFailures", scanFailures}}}};
  return j.dump(2);
}

VerifyFn makeResolveFn(VerifierConfig cfg) {
  cfg.timeLimitSeconds = 1.0;
  return [cfg](const std::string& text) { return verify(text, cfg); };
}

RepairReport repairDataset(const fs::path& groundTruthDir, const fs::path& outDir,
                           const VerifyFn& resolve, const KindSet& kinds) {
  RepairReport report;
  // Only a parse or resolution failure counts as broken; proof failures and
  // timeouts are outside what annotation stripping can cause.
  auto resolves = [&](const std::string& text) {
    auto o = resolve(text);
    if (o.status == VerifierStatus::ToolError) throw Error("resolve check failed to run: " + o.exitDetail);
    return o.status != VerifierStatus::ParseOrResolveError;
  };

  for (const auto& id : listPrograms(groundTruthDir)) {
    RepairEntry e;
    ++report.total;
    auto truth = parseProgram(readFile(groundTruthDir / id));
    if (!truth.scanStatus.ok()) {
      e.scanned = false;
      e.error = truth.scanStatus.describe();
      ++report.scanFailures;
      report.perProgram[id] = e;
      continue;
    }
    auto target = outDir / id;
    if (fs::exists(target)) {
      e.hadBase = true;
      e.wasBroken = !resolves(readFile(target));
    }
    for (const auto& a : truth.annotations) e.annotationsRemoved += kinds.count(a.kind) ? 1 : 0;
    auto base = strip(truth, kinds);
    writeFile(target, base);
    e.repaired = resolves(base);
    report.wasBroken += e.wasBroken;
    report.repaired += e.repaired;
    report.fixed += e.wasBroken && e.repaired;
    report.perProgram[id] = e;
  }
  return report;
}

}  // namespace dfyannot
