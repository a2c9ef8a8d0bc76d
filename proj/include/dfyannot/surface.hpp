#pragma once

// Lexing, annotation scanning, stripping and token-level diffing of Dafny
// source. Scanning is structural (keywords plus balanced delimiters); it does
// not resolve names or types.

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dfyannot {

struct ByteSpan {
  std::size_t begin = 0;
  std::size_t end = 0;  // half-open

  bool contains(std::size_t offset) const { return begin <= offset && offset < end; }
  bool operator==(const ByteSpan&) const = default;
};

struct SourceLoc {
  int line = 0;  // 1-based
  int col = 0;   // 1-based
  bool operator==(const SourceLoc&) const = default;
};

enum class TokenKind {
  Identifier,
  Keyword,
  NumericLiteral,
  StringLiteral,
  CharLiteral,
  OperatorPunct,
  AttributeOpen,
};

std::string_view toString(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::Identifier;
  std::string lexeme;
  SourceLoc loc;
  ByteSpan span;

  bool is(TokenKind k, std::string_view text) const { return kind == k && lexeme == text; }
  bool isKeyword(std::string_view text) const { return is(TokenKind::Keyword, text); }
  bool isPunct(std::string_view text) const { return is(TokenKind::OperatorPunct, text); }
};

struct ScanStatus {
  enum class Code { Ok, UnbalancedDelimiters, UnterminatedLiteral, UnterminatedComment };
  Code code = Code::Ok;
  SourceLoc location;
  std::string detail;

  bool ok() const { return code == Code::Ok; }
  std::string describe() const;
};

/// Tokens plus the trivia (whitespace and comments) that separates them.
struct TokenStream {
  std::string source;
  std::vector<Token> tokens;
  std::vector<ByteSpan> comments;
  ScanStatus status;
};

bool isDafnyKeyword(std::string_view word);

TokenStream tokenize(std::string_view source);

// ---------------------------------------------------------------------------

enum class AnnotationKind {
  LoopInvariant,
  AssertStmt,
  AssertByBlock,
  CalcBlock,
  LoopDecreases,
  MethodDecreases,
  AssumeStmt,
  GhostDecl,
  LemmaCallStmt,
};

std::string_view toString(AnnotationKind kind);
std::optional<AnnotationKind> annotationKindFromString(std::string_view name);

using KindSet = std::set<AnnotationKind>;

/// LoopInvariant, AssertStmt, AssertByBlock, CalcBlock, LoopDecreases,
/// MethodDecreases. Ghost declarations and lemma calls are opt-in.
const KindSet& defaultStrippableKinds();

struct AnnotationSpan {
  AnnotationKind kind = AnnotationKind::LoopInvariant;
  ByteSpan span;
  std::optional<int> enclosingConstructId;
  std::string clauseText;
  std::string clauseId;
  SourceLoc startLoc;
  SourceLoc endLoc;
  std::size_t firstToken = 0;
  std::size_t lastToken = 0;  // inclusive
};

struct ScanOptions {
  /// Names whose bare call statements are reported as LemmaCallStmt.
  std::set<std::string> lemmaAllowlist;
};

struct AnnotatedProgram {
  std::string sourceText;
  std::vector<Token> tokens;
  std::vector<AnnotationSpan> annotations;
  ScanStatus scanStatus;

  std::vector<const AnnotationSpan*> ofKind(AnnotationKind kind) const;
  const AnnotationSpan* findClause(std::string_view clauseId) const;
};

AnnotatedProgram scanAnnotations(const TokenStream& stream, const ScanOptions& options = {});

/// tokenize + scanAnnotations.
AnnotatedProgram parseProgram(std::string_view source, const ScanOptions& options = {});

/// Single-space join of the lexemes of `text`; the form used for clauseText.
std::string normalizeClause(std::string_view text);

/// Stable id for the `ordinal`-th clause of `kind` with this normalized text.
std::string makeClauseId(AnnotationKind kind, std::string_view normalizedText, int ordinal = 0);

/// Deletes every annotation whose kind is in `strippable`. Lines left blank by
/// a deletion are removed entirely.
std::string strip(const AnnotatedProgram& program, const KindSet& strippable);

/// Deletes exactly the listed clauses (by clauseId).
std::string stripClauses(const AnnotatedProgram& program, const std::set<std::string>& clauseIds);

/// Tokens that survive stripping `strippable`, in order, with original locations.
std::vector<Token> canonicalTokens(const AnnotatedProgram& program, const KindSet& strippable);

// ---------------------------------------------------------------------------

struct DiffEqual {};

struct DiffMismatch {
  std::string candidateToken;  // "<eof>" past the end
  std::string baseToken;
  SourceLoc candidateLoc;
  SourceLoc baseLoc;
};

enum class UnsoundKind { AssumeStmt, AxiomAttribute, ExpectStmt };
std::string_view toString(UnsoundKind kind);

struct DiffUnsound {
  UnsoundKind kind = UnsoundKind::AssumeStmt;
  SourceLoc location;
};

enum class DiffSide { Candidate, Base };

struct DiffScanFailure {
  DiffSide side = DiffSide::Candidate;
  std::string detail;
};

using DiffOutcome = std::variant<DiffEqual, DiffMismatch, DiffUnsound, DiffScanFailure>;

struct DiffVerdict {
  DiffOutcome verdict;
  std::vector<AnnotationSpan> addedAnnotations;  // only for DiffEqual

  bool equal() const { return std::holds_alternative<DiffEqual>(verdict); }
  std::string describe() const;
};

DiffVerdict diffCheck(std::string_view candidateText, std::string_view baseText,
                      const KindSet& strippable = defaultStrippableKinds(),
                      const ScanOptions& options = {});

}  // namespace dfyannot
