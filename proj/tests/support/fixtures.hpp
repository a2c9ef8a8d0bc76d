#pragma once

// On-disk scenarios shared by the unit tests and the acceptance binary.

#include <filesystem>
#include <set>
#include <string>

#include "dfyannot/corpus.hpp"

namespace fixtures {

namespace fs = std::filesystem;

std::string read(const std::string& relative);  // under tests/fixtures
fs::path path(const std::string& relative);

/// Removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

std::string fenced(const std::string& program);

// The invariant the verifier reports as not maintained in over_annotated.dfy.
inline const char* kOnlineMaxBadInvariant = "i == a.Length ==> p == a.Length - 1";

/// Oracle JSON: flags the sixth onlineMax invariant while present, else Verified.
std::string onlineMaxOracleJson();
/// over_annotated.dfy with one base statement altered.
std::string onlineMaxCheat();
std::string onlineMaxBase();

// ---------------------------------------------------------------------------
// Five scripted programs with three attempts each:
//   p1 verifies at attempt 0
//   p2 verifies at attempt 1 (second response is better)
//   p3 never verifies
//   p4 verifies only when the slicing hint is in the prompt
//   p5 verifies only after pruning
struct DeskCorpus {
  fs::path corpus;
  fs::path configFull;
  fs::path configNoPrune;
  fs::path configHintsOff;
};
DeskCorpus buildDeskCorpus(const fs::path& root);

// ---------------------------------------------------------------------------
// The two-attempt onlineMax scenario: attempt 0 alters base code, attempt 1
// is the over-annotated program that verifies once pruned.
struct ReplayScenario {
  fs::path corpus;        // one program
  fs::path copies;        // eight identical programs
  fs::path recordConfig;  // scripted provider, records a transcript
  fs::path replayConfig;  // strict replay of that transcript
  fs::path transcript;
};
ReplayScenario buildReplayScenario(const fs::path& root);

// ---------------------------------------------------------------------------
// Ten ground truths; three of them have an ad hoc stripped (broken) base
// already sitting in the output directory.
struct RepairCorpus {
  fs::path groundTruth;
  fs::path out;
  std::set<std::string> broken;
};
RepairCorpus buildRepairCorpus(const fs::path& root);

/// Resolve stand-in backed by the test oracle.
dfyannot::VerifyFn resolveOracle();

// ---------------------------------------------------------------------------
// One program, two failed attempts, three distinct error diagnostics.
struct CurationFixture {
  fs::path runDir;
  fs::path groundTruth;
  std::string base;
  std::string truth;
};
CurationFixture buildCurationFixture(const fs::path& root);
/// Verified when the slicing assert is present, else a postcondition failure.
dfyannot::VerifyFn onlyOnceOracle();

/// Records the tactic-generation exchange for only_once against a scripted
/// model, then returns a strict replay of that transcript.
std::shared_ptr<dfyannot::ReplayProvider> onlyOnceTacticReplay(const fs::path& dir);

}  // namespace fixtures
