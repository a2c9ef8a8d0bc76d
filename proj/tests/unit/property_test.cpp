#include <gtest/gtest.h>

#include "oracle.hpp"
#include "suites.hpp"

namespace {

std::string firstFailures(const suites::Result& r, std::size_t n = 3) {
  std::string out;
  for (std::size_t i = 0; i < r.failures.size() && i < n; ++i) out += r.failures[i] + "\n---\n";
  return out;
}

}  // namespace

TEST(OracleSelfCheck, MarkersAreComments) {
  for (const auto& marked : oracle::markedBases())
    EXPECT_EQ(oracle::lexemes(marked), oracle::lexemes(oracle::clean(marked)));
}

TEST(OracleSelfCheck, EnoughBases) { EXPECT_GE(oracle::markedBases().size(), 20u); }

TEST(Property, InsertionsAreEqual) {
  auto r = suites::insertionSuite(600, 20240601u);
  EXPECT_EQ(r.cases, 600);
  EXPECT_GE(r.bases, 20);
  EXPECT_TRUE(r.ok()) << r.failures.size() << " failures\n" << firstFailures(r);
  for (const char* kind : {"LoopInvariant", "AssertStmt", "AssertByBlock", "CalcBlock",
                           "LoopDecreases", "MethodDecreases"})
    EXPECT_GT(r.categories[kind], 0) << kind;
}

TEST(Property, MutationsAreNeverEqual) {
  auto r = suites::mutationSuite(600, 7u);
  EXPECT_EQ(r.cases, 600);
  EXPECT_GE(r.bases, 20);
  EXPECT_TRUE(r.ok()) << r.failures.size() << " false Equal verdicts\n" << firstFailures(r);
}

TEST(Property, OtherSeedsToo) {
  for (unsigned seed : {1u, 2u, 3u}) {
    auto ins = suites::insertionSuite(200, seed);
    EXPECT_TRUE(ins.ok()) << "seed " << seed << "\n" << firstFailures(ins, 1);
    auto mut = suites::mutationSuite(200, seed);
    EXPECT_TRUE(mut.ok()) << "seed " << seed << "\n" << firstFailures(mut, 1);
  }
}
