#include <gtest/gtest.h>

#include "dfyannot/surface.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace dfyannot;

namespace {

std::vector<std::string> lexemesOf(const TokenStream& s) {
  std::vector<std::string> out;
  for (const auto& t : s.tokens) out.push_back(t.lexeme);
  return out;
}

}  // namespace

TEST(Lexer, SlicingAssertTokens) {
  auto s = tokenize("assert a[..] == a[..a.Length];");
  ASSERT_TRUE(s.status.ok());
  std::vector<std::string> want = {"assert", "a", "[", "..", "]", "==", "a",
                                   "[", "..", "a", ".", "Length", "]", ";"};
  EXPECT_EQ(lexemesOf(s), want);
  EXPECT_EQ(lexemesOf(s), oracle::lexemes("assert a[..] == a[..a.Length];"));
  EXPECT_EQ(s.tokens[0].kind, TokenKind::Keyword);
  EXPECT_EQ(s.tokens[3].kind, TokenKind::OperatorPunct);
}

TEST(Lexer, NestedCommentsAndLocations) {
  auto s = tokenize("x /* a /* b */ still comment */ y // tail\n  z");
  ASSERT_TRUE(s.status.ok());
  EXPECT_EQ(lexemesOf(s), (std::vector<std::string>{"x", "y", "z"}));
  EXPECT_EQ(s.tokens[2].loc, (SourceLoc{2, 3}));
  EXPECT_EQ(s.comments.size(), 2u);
}

TEST(Lexer, LiteralKinds) {
  auto s = tokenize(R"(var c := 'x'; var e := '\n'; var h := 0x1F_FF; var r := 1.5; var t := "a\"b"; var v := @"q""q"; x' {:axiom})");
  ASSERT_TRUE(s.status.ok()) << s.status.describe();
  auto find = [&](std::string_view lex) {
    for (const auto& t : s.tokens)
      if (t.lexeme == lex) return t.kind;
    ADD_FAILURE() << "missing " << lex;
    return TokenKind::Identifier;
  };
  EXPECT_EQ(find("'x'"), TokenKind::CharLiteral);
  EXPECT_EQ(find(R"('\n')"), TokenKind::CharLiteral);
  EXPECT_EQ(find("0x1F_FF"), TokenKind::NumericLiteral);
  EXPECT_EQ(find("1.5"), TokenKind::NumericLiteral);
  EXPECT_EQ(find(R"("a\"b")"), TokenKind::StringLiteral);
  EXPECT_EQ(find(R"(@"q""q")"), TokenKind::StringLiteral);
  EXPECT_EQ(find("x'"), TokenKind::Identifier);
  EXPECT_EQ(find("{:"), TokenKind::AttributeOpen);
}

TEST(Lexer, RangeIsNotAReal) {
  auto s = tokenize("a[1..2]");
  EXPECT_EQ(lexemesOf(s), (std::vector<std::string>{"a", "[", "1", "..", "2", "]"}));
}

TEST(Lexer, UnterminatedThingsAreReported) {
  EXPECT_EQ(tokenize("var s := \"abc").status.code, ScanStatus::Code::UnterminatedLiteral);
  EXPECT_EQ(tokenize("x /* never closed").status.code, ScanStatus::Code::UnterminatedComment);
  EXPECT_EQ(tokenize("x /* /* */").status.code, ScanStatus::Code::UnterminatedComment);
}

TEST(Lexer, AgreesWithOracleOnEveryBase) {
  for (const auto& marked : oracle::markedBases()) {
    auto s = tokenize(marked);
    ASSERT_TRUE(s.status.ok());
    EXPECT_EQ(lexemesOf(s), oracle::lexemes(marked));
  }
}

TEST(Scanner, GroundTruthHasTwoInvariants) {
  auto p = parseProgram(fixtures::read("cheating/ground_truth.dfy"));
  ASSERT_TRUE(p.scanStatus.ok());
  auto inv = p.ofKind(AnnotationKind::LoopInvariant);
  ASSERT_EQ(inv.size(), 2u);
  EXPECT_EQ(inv[0]->clauseText, "0 <= a < b <= n + 1");
  EXPECT_EQ(inv[1]->clauseText, "( b == n + 1 ) ==> ( a == n )");
  EXPECT_EQ(inv[0]->enclosingConstructId, inv[1]->enclosingConstructId);
  EXPECT_NE(inv[0]->clauseId, inv[1]->clauseId);
  EXPECT_EQ(p.findClause(inv[1]->clauseId), inv[1]);
}

TEST(Scanner, MultilineInvariantSpansContinuationLines) {
  auto p = parseProgram(fixtures::read("get_even/ground_truth.dfy"));
  auto inv = p.ofKind(AnnotationKind::LoopInvariant);
  ASSERT_EQ(inv.size(), 3u);
  EXPECT_EQ(inv[1]->startLoc.line, 9);
  EXPECT_EQ(inv[1]->endLoc.line, 11);
  EXPECT_EQ(inv[1]->clauseText,
            oracle::normalize("forall j :: 0 <= j < i ==> if old(s[j]) % 2 == 1 then s[j] == "
                              "old(s[j]) + 1 else s[j] == old(s[j])"));
}

TEST(Scanner, StatementAnnotations) {
  auto p = parseProgram(R"(method M(x: int) decreases x
{
  assert x == x;
  assert x > 0 by { assert true; }
  calc == { x; { assert true; } x; }
  assume x > 0;
  ghost var g := x;
  Lemma(x);
  while x > 0 invariant x >= 0 decreases x { }
}
)",
                         ScanOptions{{"Lemma"}});
  ASSERT_TRUE(p.scanStatus.ok());
  EXPECT_EQ(p.ofKind(AnnotationKind::MethodDecreases).size(), 1u);
  EXPECT_EQ(p.ofKind(AnnotationKind::AssertStmt).size(), 1u);
  ASSERT_EQ(p.ofKind(AnnotationKind::AssertByBlock).size(), 1u);
  EXPECT_EQ(p.ofKind(AnnotationKind::AssertByBlock)[0]->clauseText, "x > 0 by { assert true ; }");
  EXPECT_EQ(p.ofKind(AnnotationKind::CalcBlock).size(), 1u);
  EXPECT_EQ(p.ofKind(AnnotationKind::AssumeStmt).size(), 1u);
  EXPECT_EQ(p.ofKind(AnnotationKind::GhostDecl).size(), 1u);
  EXPECT_EQ(p.ofKind(AnnotationKind::LemmaCallStmt).size(), 1u);
  EXPECT_EQ(p.ofKind(AnnotationKind::LoopInvariant).size(), 1u);
  EXPECT_EQ(p.ofKind(AnnotationKind::LoopDecreases).size(), 1u);
}

TEST(Scanner, UnbalancedDelimiters) {
  auto p = parseProgram("method M() { while true { }");
  EXPECT_EQ(p.scanStatus.code, ScanStatus::Code::UnbalancedDelimiters);
  EXPECT_FALSE(p.scanStatus.describe().empty());
}

TEST(Scanner, ClauseIdsAreStable) {
  auto text = fixtures::read("online_max/over_annotated.dfy");
  auto a = parseProgram(text);
  auto b = parseProgram("// shifted\n\n" + text);
  ASSERT_EQ(a.annotations.size(), b.annotations.size());
  for (std::size_t i = 0; i < a.annotations.size(); ++i)
    EXPECT_EQ(a.annotations[i].clauseId, b.annotations[i].clauseId);
}

TEST(Strip, OverAnnotatedDropsInvariantLines) {
  auto text = fixtures::read("online_max/over_annotated.dfy");
  std::string expected;
  for (const auto& line : splitLines(text))
    if (line.find("invariant") == std::string::npos) expected += line + "\n";
  EXPECT_EQ(strip(parseProgram(text), defaultStrippableKinds()), expected);
}

TEST(Strip, MultilineInvariantLeavesNoDebris) {
  auto stripped = strip(parseProgram(fixtures::read("get_even/ground_truth.dfy")), defaultStrippableKinds());
  EXPECT_EQ(stripped.find("invariant"), std::string::npos);
  EXPECT_EQ(stripped.find("old(s[j])"), std::string::npos);
  EXPECT_TRUE(oracle::resolvesCleanly(stripped));
  // the ad hoc remover leaves the continuation lines behind
  EXPECT_FALSE(oracle::resolvesCleanly(fixtures::read("get_even/broken_base.dfy")));
}

TEST(Strip, OptInKindsOnlyWhenAsked) {
  std::string text = "method M() {\n  ghost var g := 1;\n  assert g == 1;\n}\n";
  auto p = parseProgram(text);
  EXPECT_EQ(strip(p, defaultStrippableKinds()), "method M() {\n  ghost var g := 1;\n}\n");
  auto kinds = defaultStrippableKinds();
  kinds.insert(AnnotationKind::GhostDecl);
  EXPECT_EQ(strip(p, kinds), "method M() {\n}\n");
}

TEST(Strip, KeepsCodeSharingALine) {
  auto out = strip(parseProgram("method M() { assert true; var x := 1; }"), defaultStrippableKinds());
  EXPECT_EQ(oracle::normalize(out), "method M ( ) { var x := 1 ; }");
}

TEST(Strip, StripClausesRemovesOnlyListed) {
  auto p = parseProgram(fixtures::read("online_max/over_annotated.dfy"));
  std::string victim;
  for (const auto* inv : p.ofKind(AnnotationKind::LoopInvariant))
    if (inv->clauseText == oracle::normalize(fixtures::kOnlineMaxBadInvariant)) victim = inv->clauseId;
  ASSERT_FALSE(victim.empty());
  EXPECT_EQ(stripClauses(p, {victim}), fixtures::read("online_max/pruned.dfy"));
}

TEST(Diff, CheatingCandidateIsRejected) {
  auto v = diffCheck(fixtures::read("cheating/cheat.dfy"), fixtures::read("cheating/base.dfy"));
  ASSERT_TRUE(std::holds_alternative<DiffMismatch>(v.verdict)) << v.describe();
  const auto& m = std::get<DiffMismatch>(v.verdict);
  EXPECT_EQ(m.candidateToken, ";");
  EXPECT_EQ(m.baseToken, "+");
  EXPECT_EQ(m.candidateLoc, (SourceLoc{1, 7}));
}

TEST(Diff, GroundTruthIsEqualWithTwoInvariants) {
  auto v = diffCheck(fixtures::read("cheating/ground_truth.dfy"), fixtures::read("cheating/base.dfy"));
  ASSERT_TRUE(v.equal()) << v.describe();
  ASSERT_EQ(v.addedAnnotations.size(), 2u);
  for (const auto& a : v.addedAnnotations) EXPECT_EQ(a.kind, AnnotationKind::LoopInvariant);
}

TEST(Diff, AssumeIsUnsound) {
  auto v = diffCheck(fixtures::read("cheating/assume.dfy"), fixtures::read("cheating/base.dfy"));
  ASSERT_TRUE(std::holds_alternative<DiffUnsound>(v.verdict)) << v.describe();
  EXPECT_EQ(std::get<DiffUnsound>(v.verdict).kind, UnsoundKind::AssumeStmt);
}

TEST(Diff, AxiomAttributeAndExpectAreUnsound) {
  const std::string base = "method M() ensures false { }";
  auto axiom = diffCheck("method {:axiom} M() ensures false { }", base);
  ASSERT_TRUE(std::holds_alternative<DiffUnsound>(axiom.verdict));
  EXPECT_EQ(std::get<DiffUnsound>(axiom.verdict).kind, UnsoundKind::AxiomAttribute);
  auto expect = diffCheck("method M() ensures false { expect false; }", base);
  ASSERT_TRUE(std::holds_alternative<DiffUnsound>(expect.verdict));
  // an assume hidden inside an assert-by block is still an assume
  auto hidden = diffCheck("method M() ensures false { assert false by { assume false; } }", base);
  EXPECT_TRUE(std::holds_alternative<DiffUnsound>(hidden.verdict));
}

TEST(Diff, AssumeAlreadyInBaseIsTolerated) {
  const std::string base = "method M(x: int) { assume x > 0; }";
  EXPECT_TRUE(diffCheck("method M(x: int) { assume x > 0; assert x > 0; }", base).equal());
  EXPECT_FALSE(diffCheck("method M(x: int) { assume x > 0; assume x > 1; }", base).equal());
}

TEST(Diff, ScanFailureNamesTheSide) {
  auto v = diffCheck("method M() {", "method M() { }");
  ASSERT_TRUE(std::holds_alternative<DiffScanFailure>(v.verdict));
  EXPECT_EQ(std::get<DiffScanFailure>(v.verdict).side, DiffSide::Candidate);
  auto w = diffCheck("method M() { }", "method M() \"");
  ASSERT_TRUE(std::holds_alternative<DiffScanFailure>(w.verdict));
  EXPECT_EQ(std::get<DiffScanFailure>(w.verdict).side, DiffSide::Base);
}

TEST(Diff, TruncatedCandidateReportsEof) {
  auto v = diffCheck("method M() { }", "method M() { } method N() { }");
  ASSERT_TRUE(std::holds_alternative<DiffMismatch>(v.verdict));
  EXPECT_EQ(std::get<DiffMismatch>(v.verdict).candidateToken, "<eof>");
}

TEST(Diff, SpecificationChangesAreMismatches) {
  const std::string base = "method M(x: int) returns (y: int) ensures y > x { y := x + 1; }";
  EXPECT_FALSE(diffCheck("method M(x: int) returns (y: int) ensures y >= x { y := x + 1; }", base).equal());
  EXPECT_FALSE(
      diffCheck("method M(x: int) returns (y: int) requires x > 0 ensures y > x { y := x + 1; }", base)
          .equal());
  EXPECT_TRUE(diffCheck("method M(x: int) returns (y: int)\n  ensures y > x\n{\n  y := x + 1;\n}", base).equal());
}

TEST(Diff, OnlyOnceGroundTruthAgainstItsBase) {
  auto truth = fixtures::read("only_once/ground_truth.dfy");
  auto base = strip(parseProgram(truth), defaultStrippableKinds());
  auto v = diffCheck(truth, base);
  ASSERT_TRUE(v.equal());
  EXPECT_EQ(v.addedAnnotations.size(), 4u);
  EXPECT_TRUE(diffCheck(fixtures::read("only_once/failed.dfy"), base).equal());
}
