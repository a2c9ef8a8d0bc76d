#include <regex>

#include "dfyannot/llm.hpp"

namespace dfyannot {

namespace {

bool isFenceLine(std::string_view line) {
  auto t = trim(line);
  return t.rfind("```", 0) == 0;
}

}  // namespace

std::string extractProgram(std::string_view rawResponse) {
  auto whole = trim(rawResponse);
  if (whole.empty()) throw EmptyResponse("model response is empty");

  std::vector<std::string> blocks;
  auto lines = splitLines(rawResponse);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!isFenceLine(lines[i])) continue;
    std::size_t j = i + 1;
    std::string body;
    while (j < lines.size() && !isFenceLine(lines[j])) body += lines[j++] + "\n";
    if (j == lines.size()) break;  // unterminated fence: treat as prose
    blocks.push_back(trim(body));
    i = j;
  }

  static const std::regex decl(R"(\b(method|function|lemma)\b)");
  const std::string* best = nullptr;
  for (const auto& b : blocks) {
    if (b.empty() || !std::regex_search(b, decl)) continue;
    if (!best || b.size() > best->size()) best = &b;
  }
  if (!best) {
    for (const auto& b : blocks)
      if (!b.empty() && (!best || b.size() > best->size())) best = &b;
  }
  return best ? *best : whole;
}

}  // namespace dfyannot
