#include <gtest/gtest.h>

#include "dfyannot/pruner.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"
#include "suites.hpp"

using namespace dfyannot;

namespace {

const char* kThree = R"(method M(n: nat) returns (r: nat)
  ensures r == n
{
  r := 0;
  while r < n
    invariant a1 >= 0
    invariant a2 >= 0
    invariant a3 >= 0
  {
    r := r + 1;
  }
}
)";

std::string without(std::string text, const std::vector<std::string>& lines) {
  for (const auto& l : lines) {
    auto at = text.find(l);
    text.erase(at, l.size());
  }
  return text;
}

}  // namespace

TEST(Pruner, OnlineMaxDropsExactlyTheBoundaryClause) {
  auto over = fixtures::read("online_max/over_annotated.dfy");
  auto oracleImpl = ScriptedOracle::fromJson(fixtures::onlineMaxOracleJson(), PatternTable::defaultTable());
  auto res = pruneNonInductive(parseProgram(over), oracleImpl.asVerifyFn());
  EXPECT_EQ(res.trace.finalStatus, PruneStatus::PrunedVerified);
  EXPECT_EQ(res.program.sourceText, fixtures::read("online_max/pruned.dfy"));
  ASSERT_EQ(res.trace.rounds.size(), 1u);
  EXPECT_EQ(res.trace.verifierCalls, 2);
  EXPECT_TRUE(res.finalOutcome.verified());
}

TEST(Pruner, BatchRemovalInOneRound) {
  ScriptedOracle o({}, {ScriptedOracle::flagInvariants({"a1 >= 0", "a3 >= 0"}),
                        ScriptedOracle::verifiedEntry()});
  auto res = pruneNonInductive(parseProgram(kThree), o.asVerifyFn());
  EXPECT_EQ(res.trace.finalStatus, PruneStatus::PrunedVerified);
  ASSERT_EQ(res.trace.rounds.size(), 1u);
  EXPECT_EQ(res.trace.rounds[0].removedClauseIds.size(), 2u);
  EXPECT_EQ(res.program.sourceText,
            without(kThree, {"    invariant a1 >= 0\n", "    invariant a3 >= 0\n"}));
  EXPECT_EQ(res.trace.verifierCalls, 2);
}

TEST(Pruner, CascadeAcrossRounds) {
  ScriptedOracle o({}, {ScriptedOracle::flagInvariants({"a2 >= 0"}),
                        ScriptedOracle::flagInvariants({"a1 >= 0"}, Classification::InvariantOnEntry),
                        ScriptedOracle::verifiedEntry()});
  auto res = pruneNonInductive(parseProgram(kThree), o.asVerifyFn());
  EXPECT_EQ(res.trace.finalStatus, PruneStatus::PrunedVerified);
  EXPECT_EQ(res.trace.rounds.size(), 2u);
  EXPECT_EQ(res.trace.verifierCalls, 3);
  EXPECT_EQ(res.program.sourceText,
            without(kThree, {"    invariant a1 >= 0\n", "    invariant a2 >= 0\n"}));
}

TEST(Pruner, PostconditionUnprovableRestoresOriginal) {
  ScriptedOracle o({}, {ScriptedOracle::flagInvariants({"a2 >= 0"}), ScriptedOracle::postconditionFailure()});
  auto res = pruneNonInductive(parseProgram(kThree), o.asVerifyFn());
  EXPECT_EQ(res.trace.finalStatus, PruneStatus::RestoredOriginal);
  EXPECT_EQ(res.trace.reason, RestoreReason::PostconditionUnprovable);
  EXPECT_EQ(res.program.sourceText, kThree);
  EXPECT_EQ(res.trace.rounds.size(), 1u);  // the attempted round stays in the trace
}

TEST(Pruner, RoundCapTerminates) {
  // the verifier keeps blaming a clause; the cap stops the loop
  ScriptedOracle o({}, {ScriptedOracle::flagInvariants({"a1 >= 0"}), ScriptedOracle::flagInvariants({"a2 >= 0"}),
                        ScriptedOracle::flagInvariants({"a3 >= 0"})});
  PruneOptions opts;
  opts.maxRounds = 2;
  auto res = pruneNonInductive(parseProgram(kThree), o.asVerifyFn(), opts);
  EXPECT_EQ(res.trace.reason, RestoreReason::RoundLimit);
  EXPECT_EQ(res.trace.verifierCalls, 3);
  EXPECT_EQ(res.program.sourceText, kThree);
}

TEST(Pruner, RemovingEverythingStillEndsWithinBudget) {
  ScriptedOracle o({}, {ScriptedOracle::flagInvariants({"a1 >= 0"}), ScriptedOracle::flagInvariants({"a2 >= 0"}),
                        ScriptedOracle::flagInvariants({"a3 >= 0"}), ScriptedOracle::postconditionFailure()});
  auto res = pruneNonInductive(parseProgram(kThree), o.asVerifyFn());
  EXPECT_EQ(res.trace.reason, RestoreReason::PostconditionUnprovable);
  EXPECT_EQ(res.trace.verifierCalls, 4);  // clauses + 1
}

TEST(Pruner, NothingFlagged) {
  VerifierOutcome unbound;
  unbound.status = VerifierStatus::VerificationFailed;
  Diagnostic d;
  d.line = 1;
  d.col = 1;
  d.classification = Classification::InvariantNotMaintained;
  unbound.diagnostics.push_back(d);
  ScriptedOracle o({}, {{unbound, {}}});
  auto res = pruneNonInductive(parseProgram(kThree), o.asVerifyFn());
  EXPECT_EQ(res.trace.reason, RestoreReason::NoFlaggedClauses);
  EXPECT_EQ(res.trace.verifierCalls, 1);
}

TEST(Pruner, TimeoutRestores) {
  VerifierOutcome timeout;
  timeout.status = VerifierStatus::Timeout;
  ScriptedOracle o({}, {ScriptedOracle::flagInvariants({"a1 >= 0"}), {timeout, {}}});
  auto res = pruneNonInductive(parseProgram(kThree), o.asVerifyFn());
  EXPECT_EQ(res.trace.reason, RestoreReason::VerifierFailure);
  EXPECT_EQ(res.program.sourceText, kThree);
}

TEST(Pruner, InitialOutcomeSavesACall) {
  ScriptedOracle first({}, {ScriptedOracle::flagInvariants({"a1 >= 0"})});
  auto initial = first.verify(kThree);
  ScriptedOracle rest({}, {ScriptedOracle::verifiedEntry()});
  auto res = pruneNonInductive(parseProgram(kThree), rest.asVerifyFn(), {}, initial);
  EXPECT_EQ(res.trace.finalStatus, PruneStatus::PrunedVerified);
  EXPECT_EQ(res.trace.verifierCalls, 1);
  EXPECT_EQ(rest.calls(), 1u);
}

TEST(Pruner, AlreadyVerified) {
  ScriptedOracle o({}, {ScriptedOracle::verifiedEntry()});
  auto res = pruneNonInductive(parseProgram(kThree), o.asVerifyFn());
  EXPECT_EQ(res.trace.finalStatus, PruneStatus::PrunedVerified);
  EXPECT_TRUE(res.trace.rounds.empty());
  EXPECT_EQ(res.program.sourceText, kThree);
}

TEST(Pruner, GeneratedScripts) {
  auto r = suites::prunerSuite(300, 99u);
  EXPECT_EQ(r.cases, 300);
  std::string shown;
  for (std::size_t i = 0; i < r.failures.size() && i < 3; ++i) shown += r.failures[i] + "\n";
  EXPECT_TRUE(r.ok()) << r.failures.size() << " failures\n" << shown;
  auto seen = [&](const std::string& needle) {
    for (const auto& [cat, n] : r.categories)
      if (cat.find(needle) != std::string::npos && n > 0) return true;
    return false;
  };
  EXPECT_TRUE(seen("+batch"));
  EXPECT_TRUE(seen("+cascade"));
  EXPECT_TRUE(seen("PostconditionUnprovable"));
  EXPECT_TRUE(seen("RoundLimit"));
  EXPECT_TRUE(seen("NoFlaggedClauses"));
  EXPECT_TRUE(seen("VerifierFailure"));
}
