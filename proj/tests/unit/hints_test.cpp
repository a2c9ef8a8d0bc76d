#include <gtest/gtest.h>

#include "dfyannot/hints.hpp"
#include "dfyannot/llm.hpp"
#include "fixtures.hpp"

using namespace dfyannot;

namespace {

Diagnostic postcondition() {
  Diagnostic d;
  d.line = 2;
  d.messageText = "a postcondition could not be proved on this return path";
  d.classification = Classification::PostconditionFailure;
  return d;
}

std::vector<std::string> ids(const std::vector<Tactic>& ts) {
  std::vector<std::string> out;
  for (const auto& t : ts) out.push_back(t.id);
  return out;
}

}  // namespace

TEST(TacticStoreTest, BuiltinTitles) {
  const auto& store = builtinTactics();
  ASSERT_EQ(store.size(), 8u);
  std::vector<std::string> titles;
  for (const auto& t : store.tactics()) titles.push_back(t.title);
  EXPECT_EQ(titles, (std::vector<std::string>{
                        "Bridging Partial and Full Array Slices",
                        "Connecting Loop-Local Sequences to Final Arrays",
                        "Assisting Recursive Reasoning over Growing Array Slices",
                        "Simplifying Overly Complex Loop Invariants",
                        "Lexicographic Decreases for Mixed-Sign Recursion",
                        "Verifying Loop Invariant Initialization",
                        "Making Set Comprehension Updates Explicit",
                        "Conditional Invariants for Boundary Cases",
                    }));
  for (const auto& t : store.tactics()) {
    EXPECT_FALSE(t.body.empty());
    EXPECT_FALSE(t.triggers.empty()) << t.id;
    EXPECT_FALSE(t.provenance.generated);
  }
}

TEST(TacticStoreTest, FilesOnDiskMatchTheBuiltins) {
  auto onDisk = loadTactics(fixtures::path("../../data/tactics"));
  EXPECT_EQ(onDisk, builtinTactics());
}

TEST(TacticStoreTest, SaveLoadRoundTrip) {
  fixtures::TempDir dir;
  saveTactics(builtinTactics(), dir.path());
  EXPECT_EQ(loadTactics(dir.path()), builtinTactics());
}

TEST(TacticStoreTest, RejectsBadStores) {
  TacticStore s;
  s.add(parseTactic("id: a\ntitle: A\n---\nbody"));
  EXPECT_THROW(s.add(parseTactic("id: a\ntitle: B\n---\nbody")), LoadError);
  EXPECT_THROW(s.add(parseTactic("id: b\ntitle: A\n---\nbody")), LoadError);
  EXPECT_THROW(parseTactic("id: c\ntitle: C\n---\n   \n"), LoadError);
  EXPECT_THROW(parseTactic("id: c\ntitle: C\nbody without separator"), LoadError);
  EXPECT_THROW(parseTactic("id: c\ntitle: C\ntrigger: nowhere:x\n---\nb"), LoadError);
  EXPECT_THROW(parseTactic("id: c\ntitle: C\ntrigger: program~(\n---\nb"), LoadError);
  EXPECT_THROW(loadTactics("/nonexistent/tactics"), LoadError);
}

TEST(TacticStoreTest, SerializeKeepsProvenance) {
  Tactic t;
  t.id = "x";
  t.title = "X";
  t.body = "line one\n\nline two";
  t.triggers.push_back(Trigger::parse("program:while && diagnostic~invariant.*entry"));
  t.provenance = {true, "abc", "def"};
  EXPECT_EQ(parseTactic(serializeTactic(t)), t);
}

TEST(Retrieval, TriggeredOnOnlyOnceFailure) {
  auto hits = retrieve(builtinTactics(), fixtures::read("only_once/failed.dfy"), {postcondition()},
                       HintMode::Triggered);
  auto got = ids(hits);
  EXPECT_NE(std::find(got.begin(), got.end(), "slicing-bridge"), got.end());
  EXPECT_LT(hits.size(), builtinTactics().size());
}

TEST(Retrieval, Modes) {
  auto program = fixtures::read("only_once/failed.dfy");
  EXPECT_EQ(retrieve(builtinTactics(), program, {}, HintMode::All).size(), 8u);
  EXPECT_TRUE(retrieve(builtinTactics(), program, {postcondition()}, HintMode::Off).empty());
  // no slices, no slicing hint
  auto other = retrieve(builtinTactics(), "method M() { }", {postcondition()}, HintMode::Triggered);
  auto got = ids(other);
  EXPECT_EQ(std::find(got.begin(), got.end(), "slicing-bridge"), got.end());
  EXPECT_EQ(hintModeFromString("triggered"), HintMode::Triggered);
  EXPECT_FALSE(hintModeFromString("some").has_value());
}

TEST(Retrieval, TriggerTerms) {
  auto t = Trigger::parse("program:[..] && diagnostic~POSTCONDITION");
  EXPECT_TRUE(t.matches("a[..]", {postcondition()}));
  EXPECT_FALSE(t.matches("a[0]", {postcondition()}));
  EXPECT_FALSE(t.matches("a[..]", {}));
  // the classification name is part of the matched diagnostic text
  EXPECT_TRUE(Trigger::parse("diagnostic:PostconditionFailure").matches("", {postcondition()}));
}

TEST(Retrieval, PromptFormat) {
  std::vector<Tactic> two(builtinTactics().tactics().begin(), builtinTactics().tactics().begin() + 2);
  auto text = formatForPrompt(two);
  EXPECT_EQ(text.rfind("### Hint 1: Bridging Partial and Full Array Slices\n", 0), 0u);
  EXPECT_NE(text.find("\n\n### Hint 2: Connecting Loop-Local Sequences to Final Arrays\n"), std::string::npos);
  EXPECT_EQ(formatForPrompt({}), "");
}

TEST(Generate, ReplayReproducesTheSlicingTactic) {
  fixtures::TempDir dir;
  auto replay = fixtures::onlyOnceTacticReplay(dir.path());
  auto t = generateTactic(fixtures::read("only_once/failed.dfy"), fixtures::read("only_once/ground_truth.dfy"),
                          replay->asCompletionFn());
  EXPECT_EQ(t.title, "Bridging Partial and Full Array Slices");
  EXPECT_EQ(t.id, "bridging-partial-and-full-array-slices");
  EXPECT_TRUE(t.provenance.generated);
  EXPECT_EQ(t.provenance.failedRef.size(), 16u);
  EXPECT_NE(t.body.find("- Add `assert a[..a.Length] == a[..];` after the loop"), std::string::npos);
  EXPECT_NE(t.body.find("1. Loop invariants track properties over `a[..i]`"), std::string::npos);
  EXPECT_EQ(t.body.find("\\item"), std::string::npos);
  EXPECT_EQ(replay->fuzzyHits(), 0u);
}

TEST(Generate, InputChecks) {
  auto never = [](const Prompt&) -> std::string { throw std::logic_error("not called"); };
  auto truth = fixtures::read("only_once/ground_truth.dfy");
  EXPECT_THROW(generateTactic(truth, truth, never), NoDifference);
  EXPECT_THROW(generateTactic(fixtures::read("online_max/over_annotated.dfy"), truth, never), InputMismatch);
  EXPECT_THROW(generateTactic("method M() {", truth, never), InputMismatch);
}

TEST(Generate, ProblemSpecificAndFormatErrors) {
  auto failed = fixtures::read("only_once/failed.dfy");
  auto truth = fixtures::read("only_once/ground_truth.dfy");
  auto reply = [](std::string text) { return [text](const Prompt&) { return text; }; };
  EXPECT_THROW(generateTactic(failed, truth, reply("Tactic: Count keys\n\nTrack keyCount in only_once.")),
               ProblemSpecific);
  EXPECT_THROW(generateTactic(failed, truth, reply("no heading here")), FormatError);
  EXPECT_THROW(generateTactic(failed, truth, reply("Tactic: Empty\n")), FormatError);
  auto ok = generateTactic(failed, truth, reply("**Tactic: Slice bridge**\nAssert a[..] == a[..a.Length] after the loop."));
  EXPECT_EQ(ok.title, "Slice bridge");
}

TEST(Generate, PromptCarriesBothProgramsAndAnExample) {
  std::string seen;
  auto capture = [&](const Prompt& p) {
    seen = p.userText;
    return std::string("Tactic: T\nbody");
  };
  generateTactic(fixtures::read("only_once/failed.dfy"), fixtures::read("only_once/ground_truth.dfy"), capture);
  EXPECT_NE(seen.find("assert a[..] == a[..a.Length];"), std::string::npos);
  EXPECT_NE(seen.find("Tactic: Bridging Partial and Full Array Slices"), std::string::npos);
  EXPECT_EQ(seen.find("{{"), std::string::npos);
}
