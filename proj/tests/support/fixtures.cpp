#include "fixtures.hpp"

#include <json.hpp>
#include <random>

#include "oracle.hpp"

#ifndef FIXTURE_DIR
#error "FIXTURE_DIR must point at tests/fixtures"
#endif

namespace fixtures {

using nlohmann::json;
using namespace dfyannot;

fs::path path(const std::string& relative) { return fs::path(FIXTURE_DIR) / relative; }

std::string read(const std::string& relative) { return readFile(path(relative)); }

TempDir::TempDir() {
  std::random_device rd;
  auto base = fs::temp_directory_path();
  for (int tries = 0; tries < 100; ++tries) {
    auto p = base / ("dfyannot-test-" + std::to_string(rd()));
    if (fs::create_directory(p)) {
      path_ = p;
      return;
    }
  }
  throw std::runtime_error("could not create a temp directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string fenced(const std::string& program) {
  return "Here is the annotated program.\n\n```dafny\n" + program + "```\n";
}

namespace {

void writeJson(const fs::path& p, const json& j) { writeFile(p, j.dump(2)); }

json verified() { return {{"status", "Verified"}}; }

json postconditionFailure(int line = 3) {
  return {{"status", "VerificationFailed"},
          {"diagnostics",
           {{{"line", line},
             {"col", 1},
             {"message", "a postcondition could not be proved on this return path"}}}}};
}

json rule(std::vector<std::string> contains, json outcome) {
  return {{"contains", contains}, {"outcome", std::move(outcome)}};
}

std::string stripDefault(const std::string& program) {
  return strip(parseProgram(program), defaultStrippableKinds());
}

}  // namespace

std::string onlineMaxOracleJson() {
  json flagged = {{"status", "VerificationFailed"},
                  {"diagnostics",
                   {{{"message", "this invariant could not be proved to be maintained by the loop"},
                     {"atInvariant", kOnlineMaxBadInvariant}}}}};
  json j = {{"rules",
             {rule({std::string("invariant ") + kOnlineMaxBadInvariant}, flagged),
              rule({}, verified())}}};
  return j.dump(2);
}

std::string onlineMaxBase() { return stripDefault(read("online_max/over_annotated.dfy")); }

std::string onlineMaxCheat() {
  auto text = read("online_max/over_annotated.dfy");
  const std::string from = "i := x;";
  text.replace(text.find(from), from.size(), "i := x + 1;");
  return text;
}

// ---------------------------------------------------------------------------

namespace {

const char* kCountUp = R"(method CountUp(n: nat) returns (c: nat)
  ensures c == n
{
  c := 0;
  while c < n
    invariant 0 <= c <= n
  {
    c := c + 1;
  }
}
)";

const char* kTripleGood = R"(method Triple(n: nat) returns (t: nat)
  ensures t == 3 * n
{
  t := 0;
  var i := 0;
  while i < n
    invariant 0 <= i <= n
    invariant t == 3 * i
  {
    t := t + 3;
    i := i + 1;
  }
}
)";

const char* kTripleWeak = R"(method Triple(n: nat) returns (t: nat)
  ensures t == 3 * n
{
  t := 0;
  var i := 0;
  while i < n
    invariant 0 <= i <= n
  {
    t := t + 3;
    i := i + 1;
  }
}
)";

const char* kHalve = R"(method Halve(n: nat) returns (steps: nat)
  ensures steps <= n
{
  var k := n;
  steps := 0;
  while k > 1
    invariant steps <= n
  {
    k := k / 2;
    steps := steps + 1;
  }
}
)";

}  // namespace

DeskCorpus buildDeskCorpus(const fs::path& root) {
  DeskCorpus d;
  d.corpus = root / "corpus";
  auto oracles = root / "oracles";
  auto scripts = root / "scripts";
  fs::create_directories(d.corpus);
  fs::create_directories(oracles);
  fs::create_directories(scripts);

  auto add = [&](const std::string& id, const std::string& base, const json& script, const json& oracle) {
    writeFile(d.corpus / (id + ".dfy"), base);
    writeJson(scripts / (id + ".json"), script);
    writeJson(oracles / (id + ".json"), oracle);
  };
  auto always = [](const std::string& program) {
    return json{{"rules", {{{"response", fenced(program)}}}}};
  };

  add("p1", stripDefault(kCountUp), always(kCountUp), {{"rules", {rule({}, verified())}}});

  add("p2", stripDefault(kTripleGood),
      json{{"sequence", {fenced(kTripleWeak), fenced(kTripleGood), fenced(kTripleGood)}}},
      {{"rules", {rule({"invariant t == 3 * i"}, verified()), rule({}, postconditionFailure())}}});

  add("p3", stripDefault(kHalve), always(kHalve),
      {{"rules", {rule({}, postconditionFailure())}}});

  auto truth = read("only_once/ground_truth.dfy");
  json p4script = {{"rules",
                    {{{"promptContains", {"Bridging Partial and Full Array Slices"}},
                      {"response", fenced(truth)}},
                     {{"response", fenced(read("only_once/failed.dfy"))}}}}};
  add("p4", stripDefault(truth), p4script,
      {{"rules", {rule({"assert a[..] == a[..a.Length];"}, verified()), rule({}, postconditionFailure(2))}}});

  writeFile(d.corpus / "p5.dfy", onlineMaxBase());
  writeJson(scripts / "p5.json", always(read("online_max/over_annotated.dfy")));
  writeFile(oracles / "p5.json", onlineMaxOracleJson());

  auto config = [&](const std::string& name, bool prune, const std::string& hints) {
    json j = {{"maxAttempts", 3},
              {"pruneEnabled", prune},
              {"hintMode", hints},
              {"oracleDir", "oracles"},
              {"deterministicClock", true},
              {"provider", {{"kind", "scripted"}, {"scriptDir", "scripts"}}}};
    auto p = root / name;
    writeJson(p, j);
    return p;
  };
  d.configFull = config("full.json", true, "all");
  d.configNoPrune = config("no-prune.json", false, "all");
  d.configHintsOff = config("hints-off.json", true, "off");
  return d;
}

// ---------------------------------------------------------------------------

ReplayScenario buildReplayScenario(const fs::path& root) {
  ReplayScenario s;
  s.corpus = root / "corpus";
  s.copies = root / "copies";
  s.transcript = root / "transcript.jsonl";
  fs::create_directories(s.corpus);
  fs::create_directories(s.copies);
  auto base = onlineMaxBase();
  writeFile(s.corpus / "onlineMax.dfy", base);
  for (int k = 0; k < 8; ++k) writeFile(s.copies / ("copy" + std::to_string(k) + ".dfy"), base);

  writeFile(root / "oracle.json", onlineMaxOracleJson());
  writeJson(root / "script.json",
            json::array({fenced(onlineMaxCheat()), fenced(read("online_max/over_annotated.dfy"))}));

  json common = {{"maxAttempts", 3}, {"oracle", "oracle.json"}, {"deterministicClock", true}};
  json rec = common;
  rec["provider"] = {{"kind", "scripted"}, {"scriptFile", "script.json"}, {"recordTo", "transcript.jsonl"}};
  json rep = common;
  rep["provider"] = {{"kind", "replay"}, {"transcriptPath", "transcript.jsonl"}, {"strictReplay", true}};
  s.recordConfig = root / "record.json";
  s.replayConfig = root / "replay.json";
  writeJson(s.recordConfig, rec);
  writeJson(s.replayConfig, rep);
  return s;
}

// ---------------------------------------------------------------------------

namespace {

// Ground truths for the repair corpus. The first three have invariants whose
// continuation lines start with an operand, so removing only the first line
// leaves a broken loop guard.
const std::vector<std::pair<std::string, std::string>>& repairPrograms() {
  static const std::vector<std::pair<std::string, std::string>> programs = {
      {"get_even.dfy", ""},  // filled from the fixture file
      {"double_all.dfy", R"(method DoubleAll(a: array<int>) returns (b: array<int>)
  ensures b.Length == a.Length
  ensures forall k :: 0 <= k < a.Length ==> b[k] == 2 * a[k]
{
  b := new int[a.Length];
  var i := 0;
  while i < a.Length
    invariant 0 <= i <= a.Length
    invariant forall k :: 0 <= k < i ==>
      b[k] == 2 * a[k]
  {
    b[i] := 2 * a[i];
    i := i + 1;
  }
}
)"},
      {"max_of.dfy", R"(method MaxOf(a: array<int>) returns (m: int)
  requires a.Length > 0
  ensures forall k :: 0 <= k < a.Length ==> a[k] <= m
{
  m := a[0];
  var i := 1;
  while i < a.Length
    invariant 1 <= i <= a.Length
    invariant forall k :: 0 <= k < i ==>
      a[k] <= m
  {
    if a[i] > m { m := a[i]; }
    i := i + 1;
  }
}
)"},
      {"count_up.dfy", kCountUp},
      {"triple.dfy", kTripleGood},
      {"halve.dfy", kHalve},
      {"sum_array.dfy", R"(function SumTo(q: seq<int>, n: nat): int
  requires n <= |q|
{
  if n == 0 then 0 else SumTo(q, n - 1) + q[n - 1]
}

method Sum(a: array<int>) returns (s: int)
  ensures s == SumTo(a[..], a.Length)
{
  s := 0;
  var i := 0;
  while i < a.Length
    invariant 0 <= i <= a.Length
    invariant s == SumTo(a[..], i)
  {
    s := s + a[i];
    i := i + 1;
  }
  assert a[..] == a[..a.Length];
}
)"},
      {"find.dfy", R"(method Find(a: array<int>, key: int) returns (idx: int)
  ensures 0 <= idx ==> idx < a.Length && a[idx] == key
{
  idx := 0;
  while idx < a.Length
    invariant 0 <= idx <= a.Length
    invariant forall k :: 0 <= k < idx
                 ==> a[k] != key
  {
    if a[idx] == key { return; }
    idx := idx + 1;
  }
  idx := -1;
}
)"},
      {"only_once.dfy", ""},
      {"zero.dfy", R"(method Zero(a: array<int>)
  modifies a
  ensures forall k :: 0 <= k < a.Length ==> a[k] == 0
{
  var i := 0;
  while i < a.Length
    invariant 0 <= i <= a.Length
    invariant forall k :: 0 <= k < i ==> a[k] == 0
  {
    a[i] := 0;
    i := i + 1;
  }
}
)"},
  };
  return programs;
}

}  // namespace

RepairCorpus buildRepairCorpus(const fs::path& root) {
  RepairCorpus r;
  r.groundTruth = root / "ground_truth";
  r.out = root / "base";
  fs::create_directories(r.groundTruth);
  fs::create_directories(r.out);
  int k = 0;
  for (const auto& [name, text] : repairPrograms()) {
    std::string program = text;
    if (name == "get_even.dfy") program = read("get_even/ground_truth.dfy");
    if (name == "only_once.dfy") program = read("only_once/ground_truth.dfy");
    writeFile(r.groundTruth / name, program);
    if (k++ < 3) {
      writeFile(r.out / name, oracle::adHocStrip(program));
      r.broken.insert(name);
    } else if (k % 2 == 0) {
      writeFile(r.out / name, stripDefault(program));  // a healthy existing base
    }
  }
  return r;
}

VerifyFn resolveOracle() {
  return [](const std::string& text) {
    VerifierOutcome o;
    std::string why;
    if (oracle::resolvesCleanly(text, &why)) {
      o.status = VerifierStatus::Verified;
    } else {
      o.status = VerifierStatus::ParseOrResolveError;
      Diagnostic d;
      d.messageText = why;
      d.classification = Classification::SyntaxOrResolve;
      o.diagnostics.push_back(d);
    }
    return o;
  };
}

// ---------------------------------------------------------------------------

VerifyFn onlyOnceOracle() {
  return [](const std::string& text) {
    VerifierOutcome o;
    if (text.find("assert a[..] == a[..a.Length];") != std::string::npos) {
      o.status = VerifierStatus::Verified;
    } else {
      o.status = VerifierStatus::VerificationFailed;
      Diagnostic d;
      d.line = 2;
      d.col = 1;
      d.messageText = "a postcondition could not be proved on this return path";
      d.classification = Classification::PostconditionFailure;
      o.diagnostics.push_back(d);
    }
    return o;
  };
}

CurationFixture buildCurationFixture(const fs::path& root) {
  CurationFixture c;
  c.runDir = root / "run";
  c.groundTruth = root / "ground_truth";
  fs::create_directories(c.groundTruth);
  c.truth = read("only_once/ground_truth.dfy");
  c.base = stripDefault(c.truth);
  writeFile(c.groundTruth / "only_once.dfy", c.truth);

  auto diag = [](int line, const std::string& msg, Classification cls) {
    Diagnostic d;
    d.line = line;
    d.col = 2;
    d.messageText = msg;
    d.classification = cls;
    return d;
  };
  const auto post = diag(2, "a postcondition could not be proved on this return path",
                         Classification::PostconditionFailure);
  const auto entry = diag(6, "this loop invariant could not be proved on entry",
                          Classification::InvariantOnEntry);
  const auto kept = diag(7, "this invariant could not be proved to be maintained by the loop",
                         Classification::InvariantNotMaintained);

  PipelineResult result;
  result.status = PipelineStatus::Failed;
  result.failureReason = FailureReason::AttemptsExhausted;
  auto failed = read("only_once/failed.dfy");
  for (int i = 0; i < 2; ++i) {
    AttemptRecord a;
    a.index = i;
    a.rawResponse = fenced(failed);
    a.extractedProgram = failed;
    a.diffVerdict = diffCheck(failed, c.base);
    VerifierOutcome o;
    o.status = VerifierStatus::VerificationFailed;
    // attempt 0 has two errors, attempt 1 repeats one of them and adds another
    o.diagnostics = i == 0 ? std::vector<Diagnostic>{post, entry} : std::vector<Diagnostic>{post, kept};
    a.preOutcome = o;
    result.attempts.push_back(a);
  }
  writeAttemptFile(c.runDir, "only_once.dfy", c.base, result);
  return c;
}

std::shared_ptr<ReplayProvider> onlyOnceTacticReplay(const fs::path& dir) {
  auto transcript = dir / "tactic.jsonl";
  auto scripted = std::make_shared<ScriptedProvider>(
      std::vector<std::string>{read("only_once/tactic_response.tex")});
  RecordingProvider recorder(scripted, transcript);
  generateTactic(read("only_once/failed.dfy"), read("only_once/ground_truth.dfy"),
                 recorder.asCompletionFn());
  return ReplayProvider::load(transcript, true);
}

}  // namespace fixtures
