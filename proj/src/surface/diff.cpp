#include <map>

#include "dfyannot/surface.hpp"

namespace dfyannot {

std::string_view toString(UnsoundKind kind) {
  switch (kind) {
    case UnsoundKind::AssumeStmt: return "AssumeStmt";
    case UnsoundKind::AxiomAttribute: return "AxiomAttribute";
    case UnsoundKind::ExpectStmt: return "ExpectStmt";
  }
  return "?";
}

namespace {

std::string locText(SourceLoc loc) {
  return std::to_string(loc.line) + ":" + std::to_string(loc.col);
}

struct UnsoundSite {
  UnsoundKind kind;
  std::string key;
  SourceLoc loc;
  std::size_t tokenIndex;
};

std::vector<UnsoundSite> unsoundSites(const AnnotatedProgram& p) {
  std::vector<UnsoundSite> sites;
  const auto& toks = p.tokens;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const auto& t = toks[i];
    if (t.isKeyword("assume")) {
      std::string key;
      for (auto k = i; k < toks.size() && !toks[k].isPunct(";"); ++k) key += toks[k].lexeme + " ";
      sites.push_back({UnsoundKind::AssumeStmt, key, t.loc, i});
    } else if (t.isKeyword("expect")) {
      std::string key;
      for (auto k = i; k < toks.size() && !toks[k].isPunct(";"); ++k) key += toks[k].lexeme + " ";
      sites.push_back({UnsoundKind::ExpectStmt, key, t.loc, i});
    } else if (t.kind == TokenKind::AttributeOpen && i + 1 < toks.size() &&
               toks[i + 1].lexeme == "axiom") {
      sites.push_back({UnsoundKind::AxiomAttribute, "axiom", t.loc, i});
    }
  }
  return sites;
}

}  // namespace

std::string DiffVerdict::describe() const {
  return std::visit(
      [&](const auto& v) -> std::string {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, DiffEqual>) {
          return "Equal (" + std::to_string(addedAnnotations.size()) + " added annotations)";
        } else if constexpr (std::is_same_v<V, DiffMismatch>) {
          return "Mismatch: candidate has '" + v.candidateToken + "' at " + locText(v.candidateLoc) +
                 " where the base has '" + v.baseToken + "' at " + locText(v.baseLoc);
        } else if constexpr (std::is_same_v<V, DiffUnsound>) {
          return "UnsoundConstruct: " + std::string(toString(v.kind)) + " at " + locText(v.location);
        } else {
          return std::string("ScanFailure (") +
                 (v.side == DiffSide::Candidate ? "candidate" : "base") + "): " + v.detail;
        }
      },
      verdict);
}

DiffVerdict diffCheck(std::string_view candidateText, std::string_view baseText,
                      const KindSet& strippable, const ScanOptions& options) {
  auto candidate = parseProgram(candidateText, options);
  if (!candidate.scanStatus.ok()) {
    return {DiffScanFailure{DiffSide::Candidate, candidate.scanStatus.describe()}, {}};
  }
  auto base = parseProgram(baseText, options);
  if (!base.scanStatus.ok()) {
    return {DiffScanFailure{DiffSide::Base, base.scanStatus.describe()}, {}};
  }

  // Verification-bypassing constructs: rejected inside anything we would
  // strip, and rejected outright unless the base already carries the same one.
  std::vector<bool> stripped(candidate.tokens.size(), false);
  for (const auto& a : candidate.annotations) {
    if (!strippable.contains(a.kind)) continue;
    for (auto k = a.firstToken; k <= a.lastToken; ++k) stripped[k] = true;
  }
  std::map<std::pair<UnsoundKind, std::string>, int> baseBudget;
  for (const auto& s : unsoundSites(base)) ++baseBudget[{s.kind, s.key}];
  for (const auto& s : unsoundSites(candidate)) {
    if (stripped[s.tokenIndex] || --baseBudget[{s.kind, s.key}] < 0) {
      return {DiffUnsound{s.kind, s.loc}, {}};
    }
  }

  auto lhs = canonicalTokens(candidate, strippable);
  const auto& rhs = base.tokens;
  std::size_t n = std::min(lhs.size(), rhs.size());
  for (std::size_t i = 0; i <= n; ++i) {
    bool lhsEnd = i == lhs.size();
    bool rhsEnd = i == rhs.size();
    if (lhsEnd && rhsEnd) break;
    if (!lhsEnd && !rhsEnd && lhs[i].kind == rhs[i].kind && lhs[i].lexeme == rhs[i].lexeme) continue;
    DiffMismatch m;
    m.candidateToken = lhsEnd ? "<eof>" : lhs[i].lexeme;
    m.baseToken = rhsEnd ? "<eof>" : rhs[i].lexeme;
    m.candidateLoc = lhsEnd ? SourceLoc{} : lhs[i].loc;
    m.baseLoc = rhsEnd ? SourceLoc{} : rhs[i].loc;
    return {m, {}};
  }

  DiffVerdict verdict{DiffEqual{}, {}};
  for (const auto& a : candidate.annotations) {
    if (strippable.contains(a.kind)) verdict.addedAnnotations.push_back(a);
  }
  return verdict;
}

}  // namespace dfyannot
