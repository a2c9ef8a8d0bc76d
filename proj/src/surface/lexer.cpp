#include <algorithm>
#include <array>
#include <unordered_set>

#include "dfyannot/surface.hpp"

namespace dfyannot {

std::string_view toString(TokenKind kind) {
  switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::NumericLiteral: return "numeric-literal";
    case TokenKind::StringLiteral: return "string-literal";
    case TokenKind::CharLiteral: return "char-literal";
    case TokenKind::OperatorPunct: return "operator-punct";
    case TokenKind::AttributeOpen: return "attribute-open";
  }
  return "?";
}

std::string ScanStatus::describe() const {
  std::string what;
  switch (code) {
    case Code::Ok: return "ok";
    case Code::UnbalancedDelimiters: what = "unbalanced delimiters"; break;
    case Code::UnterminatedLiteral: what = "unterminated literal"; break;
    case Code::UnterminatedComment: what = "unterminated comment"; break;
  }
  what += " at " + std::to_string(location.line) + ":" + std::to_string(location.col);
  if (!detail.empty()) what += " (" + detail + ")";
  return what;
}

bool isDafnyKeyword(std::string_view word) {
  static const std::unordered_set<std::string_view> kKeywords = {
      "abstract", "allocated", "as", "assert", "assume", "bool", "break", "by",
      "calc", "case", "char", "class", "codatatype", "const", "constructor",
      "continue", "datatype", "decreases", "default", "downto", "else", "ensures",
      "exists", "expect", "export", "extends", "false", "for", "forall", "fresh",
      "function", "ghost", "greatest", "if", "imap", "import", "in", "include",
      "int", "invariant", "is", "iset", "iterator", "label", "least", "lemma",
      "map", "match", "method", "modifies", "modify", "module", "multiset",
      "nameonly", "nat", "new", "newtype", "null", "object", "old", "opened",
      "ORDINAL", "predicate", "print", "provides", "reads", "real", "refines",
      "requires", "return", "returns", "reveal", "reveals", "seq", "set",
      "static", "string", "then", "this", "to", "trait", "true", "twostate",
      "type", "unchanged", "var", "while", "witness", "yield", "yields"};
  return kKeywords.contains(word);
}

namespace {

bool isIdentStart(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c >= 0x80;
}

bool isIdentChar(unsigned char c) {
  return isIdentStart(c) || (c >= '0' && c <= '9') || c == '\'' || c == '?';
}

bool isDigit(unsigned char c) { return c >= '0' && c <= '9'; }

bool isHexDigit(unsigned char c) {
  return isDigit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

// Longest match first.
constexpr std::array<std::string_view, 21> kMultiCharOps = {
    "<==>", "==>", "<==", "-->", ":=", ":-", ":|", "::", "..", "==", "!=",
    "<=",   ">=",  "&&",  "||",  "!!", "=>", "->", "~>", "<-", "#["};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { out_.source = std::string(src); }

  TokenStream run() {
    while (pos_ < src_.size()) {
      unsigned char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
        advance(1);
        continue;
      }
      if (startsWith("//")) {
        auto begin = pos_;
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
        out_.comments.push_back({begin, pos_});
        continue;
      }
      if (startsWith("/*")) {
        if (!blockComment()) return std::move(out_);
        continue;
      }
      if (!token()) return std::move(out_);
    }
    return std::move(out_);
  }

 private:
  bool startsWith(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void fail(ScanStatus::Code code, SourceLoc where, std::string detail) {
    out_.status.code = code;
    out_.status.location = where;
    out_.status.detail = std::move(detail);
  }

  bool blockComment() {
    SourceLoc start{line_, col_};
    auto begin = pos_;
    advance(2);
    int depth = 1;
    while (pos_ < src_.size() && depth > 0) {
      if (startsWith("/*")) {
        ++depth;
        advance(2);
      } else if (startsWith("*/")) {
        --depth;
        advance(2);
      } else {
        advance(1);
      }
    }
    if (depth > 0) {
      fail(ScanStatus::Code::UnterminatedComment, start, "block comment");
      return false;
    }
    out_.comments.push_back({begin, pos_});
    return true;
  }

  void emit(TokenKind kind, std::size_t begin, SourceLoc loc) {
    out_.tokens.push_back(Token{kind, std::string(src_.substr(begin, pos_ - begin)), loc, {begin, pos_}});
  }

  bool token() {
    SourceLoc loc{line_, col_};
    auto begin = pos_;
    unsigned char c = src_[pos_];

    if (isIdentStart(c)) {
      while (pos_ < src_.size() && isIdentChar(static_cast<unsigned char>(src_[pos_]))) advance(1);
      auto word = src_.substr(begin, pos_ - begin);
      emit(isDafnyKeyword(word) ? TokenKind::Keyword : TokenKind::Identifier, begin, loc);
      return true;
    }

    if (isDigit(c)) {
      if (startsWith("0x") && pos_ + 2 < src_.size() && isHexDigit(src_[pos_ + 2])) {
        advance(2);
        while (pos_ < src_.size() && (isHexDigit(src_[pos_]) || src_[pos_] == '_')) advance(1);
      } else {
        while (pos_ < src_.size() && (isDigit(src_[pos_]) || src_[pos_] == '_')) advance(1);
        // A real literal needs a digit after the dot; `1..` is a range.
        if (pos_ + 1 < src_.size() && src_[pos_] == '.' && isDigit(src_[pos_ + 1])) {
          advance(1);
          while (pos_ < src_.size() && (isDigit(src_[pos_]) || src_[pos_] == '_')) advance(1);
        }
      }
      emit(TokenKind::NumericLiteral, begin, loc);
      return true;
    }

    if (startsWith("@\"")) {
      advance(2);
      while (true) {
        if (pos_ >= src_.size()) {
          fail(ScanStatus::Code::UnterminatedLiteral, loc, "verbatim string");
          return false;
        }
        if (startsWith("\"\"")) {
          advance(2);
        } else if (src_[pos_] == '"') {
          advance(1);
          break;
        } else {
          advance(1);
        }
      }
      emit(TokenKind::StringLiteral, begin, loc);
      return true;
    }

    if (c == '"') {
      advance(1);
      while (true) {
        if (pos_ >= src_.size() || src_[pos_] == '\n') {
          fail(ScanStatus::Code::UnterminatedLiteral, loc, "string");
          return false;
        }
        if (src_[pos_] == '\\') {
          advance(2);
        } else if (src_[pos_] == '"') {
          advance(1);
          break;
        } else {
          advance(1);
        }
      }
      emit(TokenKind::StringLiteral, begin, loc);
      return true;
    }

    if (c == '\'') {
      advance(1);
      if (pos_ < src_.size() && src_[pos_] == '\\') {
        advance(1);
        if (startsWith("u{")) {
          while (pos_ < src_.size() && src_[pos_] != '}' && src_[pos_] != '\n') advance(1);
          advance(1);
        } else if (pos_ < src_.size() && src_[pos_] == 'u') {
          advance(5);
        } else {
          advance(1);
        }
      } else if (pos_ < src_.size() && src_[pos_] != '\n') {
        // Consume one UTF-8 encoded code point.
        unsigned char lead = src_[pos_];
        std::size_t width = lead < 0x80 ? 1 : (lead >> 5) == 0x6 ? 2 : (lead >> 4) == 0xe ? 3 : 4;
        advance(width);
      }
      if (pos_ >= src_.size() || src_[pos_] != '\'') {
        fail(ScanStatus::Code::UnterminatedLiteral, loc, "char");
        return false;
      }
      advance(1);
      emit(TokenKind::CharLiteral, begin, loc);
      return true;
    }

    if (startsWith("{:")) {
      advance(2);
      emit(TokenKind::AttributeOpen, begin, loc);
      return true;
    }

    for (auto op : kMultiCharOps) {
      if (startsWith(op)) {
        advance(op.size());
        emit(TokenKind::OperatorPunct, begin, loc);
        return true;
      }
    }
    advance(1);
    emit(TokenKind::OperatorPunct, begin, loc);
    return true;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  TokenStream out_;
};

}  // namespace

TokenStream tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace dfyannot
