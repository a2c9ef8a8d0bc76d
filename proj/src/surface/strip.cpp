#include <algorithm>
#include <cctype>

#include "dfyannot/surface.hpp"

namespace dfyannot {

namespace {

bool isBlank(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

std::string removeSpans(const std::string& source, const std::vector<ByteSpan>& spans) {
  if (spans.empty()) return source;
  std::vector<bool> deleted(source.size(), false);
  for (const auto& s : spans) {
    for (auto k = s.begin; k < s.end && k < source.size(); ++k) deleted[k] = true;
  }

  std::string out;
  out.reserve(source.size());
  std::size_t lineStart = 0;
  while (lineStart < source.size()) {
    auto nl = source.find('\n', lineStart);
    std::size_t lineEnd = nl == std::string::npos ? source.size() : nl;

    bool anyDeleted = false;
    bool keptContent = false;
    for (auto k = lineStart; k < lineEnd; ++k) {
      if (deleted[k]) {
        anyDeleted = true;
      } else if (!isBlank(source[k])) {
        keptContent = true;
      }
    }
    // A newline swallowed by a multi-line span counts as deleted too.
    if (nl != std::string::npos && deleted[nl]) anyDeleted = true;

    if (anyDeleted && !keptContent) {
      lineStart = lineEnd + 1;
      continue;
    }

    bool inGap = false;
    for (auto k = lineStart; k < lineEnd; ++k) {
      if (deleted[k]) {
        inGap = true;
        continue;
      }
      if (inGap) {
        // Keep tokens on either side of a removed run from fusing.
        if (!out.empty() && !std::isspace(static_cast<unsigned char>(out.back())) &&
            !isBlank(source[k])) {
          out.push_back(' ');
        }
        inGap = false;
      }
      out.push_back(source[k]);
    }
    if (nl != std::string::npos) out.push_back('\n');
    lineStart = lineEnd + 1;
  }
  return out;
}

}  // namespace

std::string strip(const AnnotatedProgram& program, const KindSet& strippable) {
  std::vector<ByteSpan> spans;
  for (const auto& a : program.annotations) {
    if (strippable.contains(a.kind)) spans.push_back(a.span);
  }
  return removeSpans(program.sourceText, spans);
}

std::string stripClauses(const AnnotatedProgram& program, const std::set<std::string>& clauseIds) {
  std::vector<ByteSpan> spans;
  for (const auto& a : program.annotations) {
    if (clauseIds.contains(a.clauseId)) spans.push_back(a.span);
  }
  return removeSpans(program.sourceText, spans);
}

std::vector<Token> canonicalTokens(const AnnotatedProgram& program, const KindSet& strippable) {
  std::vector<bool> dropped(program.tokens.size(), false);
  for (const auto& a : program.annotations) {
    if (!strippable.contains(a.kind)) continue;
    for (auto k = a.firstToken; k <= a.lastToken && k < dropped.size(); ++k) dropped[k] = true;
  }
  std::vector<Token> out;
  out.reserve(program.tokens.size());
  for (std::size_t k = 0; k < program.tokens.size(); ++k) {
    if (!dropped[k]) out.push_back(program.tokens[k]);
  }
  return out;
}

}  // namespace dfyannot
