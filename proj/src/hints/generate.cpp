#include <algorithm>
#include <regex>
#include <set>

#include "dfyannot/hints.hpp"
#include "dfyannot/surface.hpp"

namespace dfyannot {

namespace {

// Builtin members and type names that any strategy may mention.
const std::set<std::string>& genericNames() {
  static const std::set<std::string> names = {
      "Length", "Keys", "Values", "Items", "Floor", "IsLimit", "IsSucc", "Offset", "IsNat",
      "array", "array2", "string", "char", "bool", "int", "nat", "real", "seq", "set", "map",
      "multiset", "object", "result", "res", "index", "count", "value", "values", "elem",
      "item", "items", "node", "left", "right", "temp", "tmp", "sum", "max", "min", "arr",
      "len", "low", "high", "mid", "key", "acc", "xs", "ys", "Sum", "Max", "Min",
  };
  return names;
}

const std::set<std::string>& declarationKeywords() {
  static const std::set<std::string> kws = {
      "method", "function", "lemma", "predicate", "class", "datatype", "codatatype",
      "module", "trait", "const", "type", "iterator", "constructor", "newtype", "twostate",
      "greatest", "least",
  };
  return kws;
}

// Minimal LaTeX to markdown; some models answer in itemize blocks.
std::string delatex(std::string text) {
  static const std::regex bold(R"(\\textbf\{([^{}]*)\})");
  static const std::regex tt(R"(\\texttt\{([^{}]*)\})");
  static const std::regex emph(R"(\\(?:emph|textit)\{([^{}]*)\})");
  static const std::regex sub(R"(\\subsection\*?\{([^{}]*)\})");
  text = std::regex_replace(text, bold, "**$1**");
  text = std::regex_replace(text, tt, "`$1`");
  text = std::regex_replace(text, emph, "*$1*");
  text = std::regex_replace(text, sub, "$1");

  std::string out;
  std::vector<std::pair<bool, int>> lists;  // (numbered, counter)
  for (const auto& raw : splitLines(text)) {
    auto line = trim(raw);
    if (line.rfind("\\begin{itemize}", 0) == 0) {
      lists.push_back({false, 0});
      continue;
    }
    if (line.rfind("\\begin{enumerate}", 0) == 0) {
      lists.push_back({true, 0});
      continue;
    }
    if (line.rfind("\\end{itemize}", 0) == 0 || line.rfind("\\end{enumerate}", 0) == 0) {
      if (!lists.empty()) lists.pop_back();
      continue;
    }
    if (line == "\\clearpage" || line == "\\newpage" || line.rfind("\\label{", 0) == 0) continue;
    if (line.rfind("\\item", 0) == 0) {
      auto rest = trim(std::string_view(line).substr(5));
      if (!lists.empty() && lists.back().first) {
        out += std::to_string(++lists.back().second) + ". " + rest + "\n";
      } else {
        out += "- " + rest + "\n";
      }
      continue;
    }
    out += raw + "\n";
  }
  // collapse runs of blank lines
  static const std::regex blanks(R"(\n{3,})");
  return std::regex_replace(out, blanks, "\n\n");
}

}  // namespace

std::string slugify(std::string_view title) {
  std::string out;
  bool dash = false;
  for (char c : title) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      if (dash && !out.empty()) out += '-';
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      dash = false;
    } else {
      dash = true;
    }
  }
  return out.empty() ? "tactic" : out;
}

std::vector<std::string> programSpecificIdentifiers(std::string_view program) {
  auto stream = tokenize(program);
  std::set<std::string> names;
  const auto& toks = stream.tokens;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const auto& t = toks[i];
    if (t.kind != TokenKind::Identifier) continue;
    bool declared = false;
    for (std::size_t j = i; j > 0; --j) {
      const auto& p = toks[j - 1];
      if (p.kind != TokenKind::Keyword) break;
      if (declarationKeywords().count(p.lexeme)) {
        declared = true;
        break;
      }
    }
    if (genericNames().count(t.lexeme)) continue;
    if (declared || t.lexeme.size() >= 4) names.insert(t.lexeme);
  }
  return {names.begin(), names.end()};
}

Tactic parseGeneratedTactic(std::string_view response) {
  auto text = delatex(std::string(response));
  // drop a wrapping code fence if the model used one
  static const std::regex fence(R"(^\s*```[A-Za-z]*\n([\s\S]*?)\n```\s*$)");
  std::smatch fm;
  if (std::regex_match(text, fm, fence)) text = fm[1].str();

  static const std::regex heading(R"(^[ \t#*]*Tactic:[ \t]*(.*?)[ \t*]*$)");
  auto lines = splitLines(text);
  std::size_t at = lines.size();
  std::string title;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::smatch m;
    if (std::regex_match(lines[i], m, heading)) {
      title = trim(m[1].str());
      at = i;
      break;
    }
  }
  if (at == lines.size() || title.empty()) throw FormatError("response has no 'Tactic: <title>' line");
  std::string body;
  for (std::size_t i = at + 1; i < lines.size(); ++i) body += lines[i] + "\n";
  body = trim(body);
  if (body.empty()) throw FormatError("tactic '" + title + "' has an empty body");

  Tactic t;
  t.title = title;
  t.id = slugify(title);
  t.body = body;
  t.provenance.generated = true;
  return t;
}

Tactic generateTactic(const std::string& failedProgram, const std::string& verifiedGroundTruth,
                      const CompletionFn& llm, const GenerateOptions& options) {
  auto failed = parseProgram(failedProgram);
  auto truth = parseProgram(verifiedGroundTruth);
  if (!failed.scanStatus.ok()) throw InputMismatch("failed program: " + failed.scanStatus.describe());
  if (!truth.scanStatus.ok()) throw InputMismatch("ground truth: " + truth.scanStatus.describe());

  auto sameTokens = [](const std::vector<Token>& a, const std::vector<Token>& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](const Token& x, const Token& y) {
      return x.kind == y.kind && x.lexeme == y.lexeme;
    });
  };
  if (sameTokens(failed.tokens, truth.tokens))
    throw NoDifference("failed attempt and ground truth are token-identical");
  const auto& kinds = defaultStrippableKinds();
  if (!sameTokens(canonicalTokens(failed, kinds), canonicalTokens(truth, kinds)))
    throw InputMismatch("failed attempt and ground truth do not share a base program");

  const auto& example = builtinTactics().tactics().front();
  std::string user = renderTemplate(options.templates.tacticGeneration,
                                    {{"FAILED", failedProgram},
                                     {"GROUND_TRUTH", verifiedGroundTruth},
                                     {"FORMAT_EXAMPLE", "Tactic: " + example.title + "\n\n" + example.body}});
  auto prompt = Prompt::make(
      "You are an expert in Dafny verification who writes reusable, problem-independent proof "
      "strategies.",
      {user}, user);

  auto tactic = parseGeneratedTactic(llm(prompt));

  // Problem independence: nothing specific to this base program may leak.
  auto base = strip(truth, kinds);
  std::set<std::string> bodyWords;
  static const std::regex word(R"([A-Za-z_][A-Za-z0-9_']*)");
  std::string haystack = tactic.title + "\n" + tactic.body;
  for (std::sregex_iterator it(haystack.begin(), haystack.end(), word), end; it != end; ++it)
    bodyWords.insert(it->str());
  std::vector<std::string> leaked;
  for (const auto& id : programSpecificIdentifiers(base))
    if (bodyWords.count(id)) leaked.push_back(id);
  if (!leaked.empty()) {
    std::string names;
    for (const auto& n : leaked) names += (names.empty() ? "" : ", ") + n;
    throw ProblemSpecific("generated tactic mentions program-specific identifiers: " + names);
  }

  tactic.provenance.failedRef =
      options.failedRef.empty() ? sha256Hex(failedProgram).substr(0, 16) : options.failedRef;
  tactic.provenance.groundTruthRef = options.groundTruthRef.empty()
                                         ? sha256Hex(verifiedGroundTruth).substr(0, 16)
                                         : options.groundTruthRef;
  return tactic;
}

}  // namespace dfyannot
