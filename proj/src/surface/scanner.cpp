#include <map>
#include <unordered_set>

#include "dfyannot/surface.hpp"
#include "dfyannot/util.hpp"

namespace dfyannot {

std::string_view toString(AnnotationKind kind) {
  switch (kind) {
    case AnnotationKind::LoopInvariant: return "LoopInvariant";
    case AnnotationKind::AssertStmt: return "AssertStmt";
    case AnnotationKind::AssertByBlock: return "AssertByBlock";
    case AnnotationKind::CalcBlock: return "CalcBlock";
    case AnnotationKind::LoopDecreases: return "LoopDecreases";
    case AnnotationKind::MethodDecreases: return "MethodDecreases";
    case AnnotationKind::AssumeStmt: return "AssumeStmt";
    case AnnotationKind::GhostDecl: return "GhostDecl";
    case AnnotationKind::LemmaCallStmt: return "LemmaCallStmt";
  }
  return "?";
}

std::optional<AnnotationKind> annotationKindFromString(std::string_view name) {
  for (auto k : {AnnotationKind::LoopInvariant, AnnotationKind::AssertStmt,
                 AnnotationKind::AssertByBlock, AnnotationKind::CalcBlock,
                 AnnotationKind::LoopDecreases, AnnotationKind::MethodDecreases,
                 AnnotationKind::AssumeStmt, AnnotationKind::GhostDecl,
                 AnnotationKind::LemmaCallStmt}) {
    if (toString(k) == name) return k;
  }
  return std::nullopt;
}

const KindSet& defaultStrippableKinds() {
  static const KindSet kDefault = {
      AnnotationKind::LoopInvariant, AnnotationKind::AssertStmt,
      AnnotationKind::AssertByBlock, AnnotationKind::CalcBlock,
      AnnotationKind::LoopDecreases, AnnotationKind::MethodDecreases};
  return kDefault;
}

std::vector<const AnnotationSpan*> AnnotatedProgram::ofKind(AnnotationKind kind) const {
  std::vector<const AnnotationSpan*> out;
  for (const auto& a : annotations) {
    if (a.kind == kind) out.push_back(&a);
  }
  return out;
}

const AnnotationSpan* AnnotatedProgram::findClause(std::string_view clauseId) const {
  for (const auto& a : annotations) {
    if (a.clauseId == clauseId) return &a;
  }
  return nullptr;
}

std::string normalizeClause(std::string_view text) {
  auto stream = tokenize(text);
  std::string out;
  for (const auto& t : stream.tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t.lexeme;
  }
  return out;
}

std::string makeClauseId(AnnotationKind kind, std::string_view normalizedText, int ordinal) {
  auto ord = std::to_string(ordinal);
  auto digest = digestFields({toString(kind), normalizedText, ord});
  return std::string(toString(kind)) + ":" + digest.substr(0, 16);
}

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

bool isDeclKeyword(const Token& t) {
  static const std::unordered_set<std::string_view> kDecl = {
      "method", "function", "lemma", "predicate", "constructor", "iterator"};
  return t.kind == TokenKind::Keyword && kDecl.contains(t.lexeme);
}

bool isScopeKeyword(const Token& t) {
  static const std::unordered_set<std::string_view> kScope = {
      "class", "trait", "datatype", "codatatype", "module", "newtype", "type",
      "import", "const", "include"};
  return t.kind == TokenKind::Keyword && kScope.contains(t.lexeme);
}

bool isOpener(const Token& t) {
  return t.kind == TokenKind::AttributeOpen || t.isPunct("(") || t.isPunct("[") || t.isPunct("{");
}

bool isCloser(const Token& t) { return t.isPunct(")") || t.isPunct("]") || t.isPunct("}"); }

class Scanner {
 public:
  Scanner(const TokenStream& stream, const ScanOptions& options)
      : toks_(stream.tokens), options_(options) {
    out_.sourceText = stream.source;
    out_.tokens = stream.tokens;
    out_.scanStatus = stream.status;
  }

  AnnotatedProgram run() {
    if (!out_.scanStatus.ok()) return std::move(out_);
    if (!matchBrackets()) return std::move(out_);
    bodyOwner_.assign(toks_.size(), -1);
    walk();
    return std::move(out_);
  }

 private:
  struct OpenBody {
    std::size_t close;
    int constructId;
  };

  bool matchBrackets() {
    match_.assign(toks_.size(), kNone);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < toks_.size(); ++i) {
      const auto& t = toks_[i];
      if (isOpener(t)) {
        stack.push_back(i);
      } else if (isCloser(t)) {
        bool ok = !stack.empty();
        if (ok) {
          const auto& open = toks_[stack.back()];
          ok = (t.lexeme == ")" && open.lexeme == "(") || (t.lexeme == "]" && open.lexeme == "[") ||
               (t.lexeme == "}" && (open.lexeme == "{" || open.kind == TokenKind::AttributeOpen));
        }
        if (!ok) {
          unbalanced(t.loc, "unexpected '" + t.lexeme + "'");
          return false;
        }
        match_[stack.back()] = i;
        match_[i] = stack.back();
        stack.pop_back();
      }
    }
    if (!stack.empty()) {
      unbalanced(toks_[stack.back()].loc, "unclosed '" + toks_[stack.back()].lexeme + "'");
      return false;
    }
    return true;
  }

  void unbalanced(SourceLoc loc, std::string detail) {
    out_.scanStatus.code = ScanStatus::Code::UnbalancedDelimiters;
    out_.scanStatus.location = loc;
    out_.scanStatus.detail = std::move(detail);
    out_.annotations.clear();
  }

  // Whether a plain `{` at `j` opens a body rather than a set/map display.
  bool opensBody(std::size_t j, int barCount) const {
    if (!toks_[j].isPunct("{") || j == 0) return false;
    const auto& prev = toks_[j - 1];
    switch (prev.kind) {
      case TokenKind::Identifier:
      case TokenKind::NumericLiteral:
      case TokenKind::StringLiteral:
      case TokenKind::CharLiteral:
        return true;
      case TokenKind::AttributeOpen:
        return false;
      case TokenKind::Keyword: {
        static const std::unordered_set<std::string_view> kEnds = {
            "true", "false", "null", "this", "int", "nat", "bool", "real",
            "char", "string", "object", "ORDINAL", "while"};
        return kEnds.contains(prev.lexeme);
      }
      case TokenKind::OperatorPunct:
        if (prev.lexeme == ")" || prev.lexeme == "]" || prev.lexeme == "}" || prev.lexeme == ">")
          return true;
        if (prev.lexeme == "|") return barCount % 2 == 0;
        if (prev.lexeme == "*" && j >= 2) {
          const auto& before = toks_[j - 2];
          return before.kind == TokenKind::Keyword || before.isPunct(",");
        }
        return false;
    }
    return false;
  }

  // First index at or after `start` (scanning at the current nesting level)
  // where a clause stops: a stop keyword, a body brace, an enclosing closer,
  // a declaration keyword or `;`.
  std::size_t clauseEnd(std::size_t start, const std::unordered_set<std::string_view>& stops,
                        int& barCount) const {
    std::size_t j = start;
    while (j < toks_.size()) {
      const auto& t = toks_[j];
      if (t.kind == TokenKind::Keyword && stops.contains(t.lexeme)) return j;
      if (isDeclKeyword(t) || isScopeKeyword(t)) return j;
      if (t.isPunct(";") || isCloser(t)) return j;
      if (t.isPunct("{") && opensBody(j, barCount)) return j;
      if (isOpener(t)) {
        j = match_[j] + 1;
        continue;
      }
      if (t.isPunct("|")) ++barCount;
      if (t.isPunct("::")) barCount = 0;
      ++j;
    }
    return j;
  }

  // Index of the `;` ending a statement that starts at `start`, or kNone.
  std::size_t statementEnd(std::size_t start) const {
    std::size_t j = start;
    while (j < toks_.size()) {
      const auto& t = toks_[j];
      if (t.isPunct(";")) return j;
      if (isCloser(t)) return kNone;
      if (isOpener(t)) {
        j = match_[j] + 1;
        continue;
      }
      ++j;
    }
    return kNone;
  }

  std::optional<int> enclosing() const {
    if (bodies_.empty()) return std::nullopt;
    return bodies_.back().constructId;
  }

  void record(AnnotationKind kind, std::size_t first, std::size_t last, std::optional<int> owner) {
    // Clause text drops the introducing keyword(s) and a trailing `;`.
    std::size_t textFirst = kind == AnnotationKind::LemmaCallStmt ? first : first + 1;
    std::size_t textEnd = toks_[last].isPunct(";") ? last : last + 1;
    std::string text;
    for (std::size_t k = textFirst; k < textEnd; ++k) {
      if (!text.empty()) text.push_back(' ');
      text += toks_[k].lexeme;
    }
    int ordinal = ordinals_[{kind, text}]++;

    AnnotationSpan span;
    span.kind = kind;
    span.span = {toks_[first].span.begin, toks_[last].span.end};
    span.enclosingConstructId = owner;
    span.clauseId = makeClauseId(kind, text, ordinal);
    span.clauseText = std::move(text);
    span.startLoc = toks_[first].loc;
    span.endLoc = toks_[last].loc;
    span.firstToken = first;
    span.lastToken = last;
    out_.annotations.push_back(std::move(span));
  }

  std::size_t scanDeclHeader(std::size_t i) {
    int id = nextConstruct_++;
    std::size_t j = i + 1;
    if (j < toks_.size() && toks_[j].isKeyword("method")) ++j;  // `function method`
    static const std::unordered_set<std::string_view> kSigStops = {
        "requires", "ensures", "modifies", "reads", "decreases", "invariant", "yields"};
    int barCount = 0;
    while (j < toks_.size()) {
      const auto& t = toks_[j];
      if (t.isPunct("{")) {
        if (opensBody(j, barCount)) {
          bodyOwner_[j] = id;
          return j;
        }
        j = match_[j] + 1;
        continue;
      }
      if (isOpener(t)) {
        j = match_[j] + 1;
        continue;
      }
      if (isCloser(t) || isDeclKeyword(t) || isScopeKeyword(t)) return j;
      if (t.isKeyword("decreases")) {
        int clauseBars = 0;
        auto end = clauseEnd(j + 1, kSigStops, clauseBars);
        record(AnnotationKind::MethodDecreases, j, end - 1, id);
        j = end;
        continue;
      }
      if (t.isPunct("|")) ++barCount;
      ++j;
    }
    return j;
  }

  std::size_t scanLoopHeader(std::size_t i) {
    int id = nextConstruct_++;
    static const std::unordered_set<std::string_view> kLoopStops = {"invariant", "decreases",
                                                                    "modifies"};
    int barCount = 0;
    std::size_t j = i + 1;
    if (j < toks_.size() && toks_[j].isPunct("{")) {
      bodyOwner_[j] = id;
      return j;
    }
    j = clauseEnd(j, kLoopStops, barCount);
    while (j < toks_.size() && toks_[j].kind == TokenKind::Keyword &&
           kLoopStops.contains(toks_[j].lexeme)) {
      int clauseBars = 0;
      auto end = clauseEnd(j + 1, kLoopStops, clauseBars);
      if (toks_[j].lexeme == "invariant") {
        record(AnnotationKind::LoopInvariant, j, end - 1, id);
      } else if (toks_[j].lexeme == "decreases") {
        record(AnnotationKind::LoopDecreases, j, end - 1, id);
      }
      j = end;
    }
    if (j < toks_.size() && toks_[j].isPunct("{")) bodyOwner_[j] = id;
    return j;
  }

  bool atStatementStart(std::size_t i) const {
    if (i == 0) return true;
    const auto& prev = toks_[i - 1];
    return prev.isPunct(";") || prev.isPunct("{") || prev.isPunct("}");
  }

  void walk() {
    std::size_t i = 0;
    while (i < toks_.size() && out_.scanStatus.ok()) {
      const auto& t = toks_[i];
      if (t.isPunct("}")) {
        if (!bodies_.empty() && bodies_.back().close == i) bodies_.pop_back();
        ++i;
        continue;
      }
      if (t.isPunct("{")) {
        if (bodyOwner_[i] >= 0) bodies_.push_back({match_[i], bodyOwner_[i]});
        ++i;
        continue;
      }
      if (t.kind == TokenKind::Keyword) {
        if (isDeclKeyword(t)) {
          i = scanDeclHeader(i);
          continue;
        }
        if (t.lexeme == "while" || t.lexeme == "for") {
          i = scanLoopHeader(i);
          continue;
        }
        if (t.lexeme == "assert") {
          i = scanAssert(i);
          continue;
        }
        if (t.lexeme == "assume") {
          auto end = statementEnd(i + 1);
          if (end == kNone) {
            unbalanced(t.loc, "assume without ';'");
            return;
          }
          record(AnnotationKind::AssumeStmt, i, end, enclosing());
          i = end + 1;
          continue;
        }
        if (t.lexeme == "calc") {
          std::size_t j = i + 1;
          while (j < toks_.size() && !toks_[j].isPunct("{") && !isCloser(toks_[j]) &&
                 !toks_[j].isPunct(";")) {
            j = toks_[j].kind == TokenKind::AttributeOpen ? match_[j] + 1 : j + 1;
          }
          if (j >= toks_.size() || !toks_[j].isPunct("{")) {
            unbalanced(t.loc, "calc without body");
            return;
          }
          record(AnnotationKind::CalcBlock, i, match_[j], enclosing());
          i = match_[j] + 1;
          continue;
        }
        if (t.lexeme == "ghost" && i + 1 < toks_.size() && toks_[i + 1].isKeyword("var") &&
            !bodies_.empty()) {
          auto end = statementEnd(i + 2);
          if (end != kNone) {
            record(AnnotationKind::GhostDecl, i, end, enclosing());
            i = end + 1;
            continue;
          }
        }
      }
      if (t.kind == TokenKind::Identifier && options_.lemmaAllowlist.contains(t.lexeme) &&
          atStatementStart(i) && i + 1 < toks_.size() && toks_[i + 1].isPunct("(")) {
        auto close = match_[i + 1];
        if (close + 1 < toks_.size() && toks_[close + 1].isPunct(";")) {
          record(AnnotationKind::LemmaCallStmt, i, close + 1, enclosing());
          i = close + 2;
          continue;
        }
      }
      ++i;
    }
  }

  std::size_t scanAssert(std::size_t i) {
    std::size_t j = i + 1;
    while (j < toks_.size()) {
      const auto& t = toks_[j];
      if (t.isPunct(";")) {
        record(AnnotationKind::AssertStmt, i, j, enclosing());
        return j + 1;
      }
      if (t.isKeyword("by") && j + 1 < toks_.size() && toks_[j + 1].isPunct("{")) {
        auto close = match_[j + 1];
        record(AnnotationKind::AssertByBlock, i, close, enclosing());
        return close + 1;
      }
      if (isCloser(t)) break;
      if (isOpener(t)) {
        j = match_[j] + 1;
        continue;
      }
      ++j;
    }
    unbalanced(toks_[i].loc, "assert without ';' or 'by' block");
    return toks_.size();
  }

  const std::vector<Token>& toks_;
  const ScanOptions& options_;
  AnnotatedProgram out_;
  std::vector<std::size_t> match_;
  std::vector<int> bodyOwner_;
  std::vector<OpenBody> bodies_;
  std::map<std::pair<AnnotationKind, std::string>, int> ordinals_;
  int nextConstruct_ = 0;
};

}  // namespace

AnnotatedProgram scanAnnotations(const TokenStream& stream, const ScanOptions& options) {
  return Scanner(stream, options).run();
}

AnnotatedProgram parseProgram(std::string_view source, const ScanOptions& options) {
  return scanAnnotations(tokenize(source), options);
}

}  // namespace dfyannot
