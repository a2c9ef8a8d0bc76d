#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "dfyannot/corpus.hpp"
#include "dfyannot/hints.hpp"
#include "dfyannot/pruner.hpp"
#include "dfyannot/surface.hpp"
#include "dfyannot/verifier.hpp"

namespace py = pybind11;
using namespace dfyannot;

namespace {

KindSet kindsFrom(const std::optional<std::vector<std::string>>& names) {
  if (!names) return defaultStrippableKinds();
  KindSet out;
  for (const auto& n : *names) {
    auto k = annotationKindFromString(n);
    if (!k) throw py::value_error("unknown annotation kind: " + n);
    out.insert(*k);
  }
  return out;
}

py::dict annotationDict(const AnnotationSpan& a) {
  py::dict d;
  d["kind"] = std::string(toString(a.kind));
  d["text"] = a.clauseText;
  d["id"] = a.clauseId;
  d["line"] = a.startLoc.line;
  d["col"] = a.startLoc.col;
  d["end_line"] = a.endLoc.line;
  return d;
}

py::dict outcomeDict(const VerifierOutcome& o) {
  py::list diags;
  for (const auto& d : o.diagnostics) {
    py::dict e;
    e["line"] = d.line;
    e["col"] = d.col;
    e["message"] = d.messageText;
    e["classification"] = std::string(toString(d.classification));
    e["clause"] = d.boundClauseId ? py::cast(*d.boundClauseId) : py::none();
    diags.append(e);
  }
  py::dict out;
  out["status"] = std::string(toString(o.status));
  out["diagnostics"] = diags;
  out["seconds"] = o.wallSeconds;
  if (!o.exitDetail.empty()) out["detail"] = o.exitDetail;
  return out;
}

py::list tokenList(const std::string& source) {
  auto ts = tokenize(source);
  if (!ts.status.ok()) throw Error(ts.status.describe());
  py::list out;
  for (const auto& t : ts.tokens)
    out.append(py::make_tuple(std::string(toString(t.kind)), t.lexeme, t.loc.line, t.loc.col));
  return out;
}

py::list annotationList(const std::string& source) {
  auto p = parseProgram(source);
  if (!p.scanStatus.ok()) throw Error(p.scanStatus.describe());
  py::list out;
  for (const auto& a : p.annotations) out.append(annotationDict(a));
  return out;
}

std::string stripSource(const std::string& source, const std::optional<std::vector<std::string>>& kinds) {
  auto p = parseProgram(source);
  if (!p.scanStatus.ok()) throw Error(p.scanStatus.describe());
  return strip(p, kindsFrom(kinds));
}

py::dict diffPrograms(const std::string& candidate, const std::string& base) {
  auto v = diffCheck(candidate, base);
  py::dict out;
  out["equal"] = v.equal();
  out["description"] = v.describe();
  std::visit(
      [&](const auto& x) {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, DiffEqual>) {
          out["verdict"] = "Equal";
        } else if constexpr (std::is_same_v<X, DiffMismatch>) {
          out["verdict"] = "Mismatch";
          out["candidate_token"] = x.candidateToken;
          out["base_token"] = x.baseToken;
          out["candidate_loc"] = py::make_tuple(x.candidateLoc.line, x.candidateLoc.col);
          out["base_loc"] = py::make_tuple(x.baseLoc.line, x.baseLoc.col);
        } else if constexpr (std::is_same_v<X, DiffUnsound>) {
          out["verdict"] = "Unsound";
          out["construct"] = std::string(toString(x.kind));
        } else {
          out["verdict"] = "ScanFailure";
        }
      },
      v.verdict);
  py::list added;
  for (const auto& a : v.addedAnnotations) added.append(annotationDict(a));
  out["added"] = added;
  return out;
}

VerifierConfig verifierConfig(const std::optional<std::string>& binary, double timeLimit) {
  VerifierConfig cfg;
  if (binary) cfg.binaryPath = *binary;
  cfg.timeLimitSeconds = timeLimit;
  return cfg;
}

py::dict pruneProgram(const std::string& program, const std::optional<std::string>& oracleJson,
                      const std::optional<std::string>& binary, double timeLimit,
                      std::optional<int> maxRounds) {
  auto parsed = parseProgram(program);
  if (!parsed.scanStatus.ok()) throw Error(parsed.scanStatus.describe());
  PruneOptions opts;
  opts.maxRounds = maxRounds;
  PruneResult res;
  if (oracleJson) {
    auto oracle = ScriptedOracle::fromJson(*oracleJson, PatternTable::defaultTable());
    res = pruneNonInductive(parsed, oracle.asVerifyFn(), opts);
  } else {
    auto cfg = verifierConfig(binary, timeLimit);
    py::gil_scoped_release nogil;
    res = pruneNonInductive(parsed, [&cfg](const std::string& t) { return verify(t, cfg); }, opts);
  }
  py::dict out;
  out["status"] = std::string(toString(res.trace.finalStatus));
  out["reason"] = res.trace.reason ? py::cast(std::string(toString(*res.trace.reason))) : py::none();
  out["program"] = res.program.sourceText;
  out["verifier_calls"] = res.trace.verifierCalls;
  py::list rounds;
  for (const auto& r : res.trace.rounds) rounds.append(r.removedClauseIds);
  out["rounds"] = rounds;
  out["outcome"] = outcomeDict(res.finalOutcome);
  return out;
}

py::dict verifyProgram(const std::string& program, const std::optional<std::string>& binary, double timeLimit) {
  auto cfg = verifierConfig(binary, timeLimit);
  VerifierOutcome o;
  {
    py::gil_scoped_release nogil;
    o = verify(program, cfg);
  }
  return outcomeDict(o);
}

py::dict tacticDict(const Tactic& t) {
  py::dict d;
  d["id"] = t.id;
  d["title"] = t.title;
  d["body"] = t.body;
  py::list triggers;
  for (const auto& tr : t.triggers) triggers.append(tr.spec());
  d["triggers"] = triggers;
  d["generated"] = t.provenance.generated;
  return d;
}

py::list tacticList(const std::optional<std::filesystem::path>& dir) {
  py::list out;
  auto emit = [&](const TacticStore& s) {
    for (const auto& t : s.tactics()) out.append(tacticDict(t));
  };
  if (dir)
    emit(loadTactics(*dir));
  else
    emit(builtinTactics());
  return out;
}

py::list retrieveTactics(const std::string& program, const std::vector<std::string>& messages,
                         const std::string& mode) {
  auto m = hintModeFromString(mode);
  if (!m) throw py::value_error("hint mode must be off, all or triggered");
  std::vector<Diagnostic> diags;
  for (const auto& msg : messages) {
    Diagnostic d;
    d.messageText = msg;
    d.classification = classify(msg, PatternTable::defaultTable());
    diags.push_back(d);
  }
  py::list out;
  for (const auto& t : retrieve(builtinTactics(), program, diags, *m)) out.append(tacticDict(t));
  return out;
}

std::string benchCorpus(const std::filesystem::path& corpus, const std::filesystem::path& config,
                        std::optional<std::filesystem::path> reportDir, int workers) {
  auto cfg = RunConfig::load(config);
  py::gil_scoped_release nogil;
  return benchRun(corpus, cfg, makeDepsFactory(cfg), {workers, reportDir}).toJson();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Annotation diffing, pruning and hint retrieval for Dafny programs";

  py::register_exception<Error>(m, "Error");

  m.def("tokenize", &tokenList, py::arg("source"),
        "List of (kind, lexeme, line, col) tuples; comments and whitespace are dropped.");
  m.def("annotations", &annotationList, py::arg("source"),
        "Proof annotations found in a program, in source order.");
  m.def("strip", &stripSource, py::arg("source"), py::arg("kinds") = py::none(),
        "Remove annotations of the given kinds (default: the strippable set).");
  m.def("diff", &diffPrograms, py::arg("candidate"), py::arg("base"),
        "Check that a candidate only adds annotations to an unannotated base.");
  m.def("verify", &verifyProgram, py::arg("program"), py::arg("binary") = py::none(),
        py::arg("time_limit") = 60.0, "Run the Dafny verifier (binary or $DAFNY_PATH).");
  m.def("prune", &pruneProgram, py::arg("program"), py::arg("oracle") = py::none(),
        py::arg("binary") = py::none(), py::arg("time_limit") = 60.0, py::arg("max_rounds") = py::none(),
        "Drop non-inductive loop invariants. `oracle` is a scripted-oracle JSON document;"
        " without it the real verifier is used.");
  m.def("tactics", &tacticList, py::arg("directory") = py::none(),
        "Tactics from a directory of .tactic files, or the builtin store.");
  m.def("retrieve", &retrieveTactics, py::arg("program"), py::arg("messages") = std::vector<std::string>{},
        py::arg("mode") = "triggered", "Builtin tactics relevant to a program and its verifier messages.");
  m.def("bench", &benchCorpus, py::arg("corpus"), py::arg("config"), py::arg("report_dir") = py::none(),
        py::arg("workers") = 1, "Run the pipeline over a corpus directory; returns report JSON.");
}
