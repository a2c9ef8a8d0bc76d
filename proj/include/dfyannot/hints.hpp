#pragma once

#include <filesystem>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "dfyannot/prompt.hpp"
#include "dfyannot/verifier.hpp"

namespace dfyannot {

/// One conjunction of surface patterns. Terms are written `program:<text>`,
/// `diagnostic:<text>` (substring) or `program~<regex>`, `diagnostic~<regex>`,
/// joined by ` && `.
class Trigger {
 public:
  static Trigger parse(std::string_view spec);

  bool matches(std::string_view programText, const std::vector<Diagnostic>& diagnostics) const;
  const std::string& spec() const { return spec_; }
  bool operator==(const Trigger& o) const { return spec_ == o.spec_; }

 private:
  struct Term {
    bool onProgram = true;
    bool isRegex = false;
    std::string text;
    std::optional<std::regex> re;
  };
  std::string spec_;
  std::vector<Term> terms_;
};

struct TacticProvenance {
  bool generated = false;
  std::string failedRef;
  std::string groundTruthRef;
  bool operator==(const TacticProvenance&) const = default;
};

struct Tactic {
  std::string id;
  std::string title;
  std::string body;
  std::vector<Trigger> triggers;
  TacticProvenance provenance;

  bool operator==(const Tactic&) const = default;
};

/// Parses one tactic file: `key: value` header lines (id, title, trigger,
/// provenance), a `---` line, then the free-text body.
Tactic parseTactic(std::string_view text, const std::string& origin = "<memory>");
std::string serializeTactic(const Tactic& tactic);

class TacticStore {
 public:
  TacticStore() = default;

  /// Throws LoadError on a duplicate id or title or an empty body.
  void add(Tactic tactic, const std::string& origin = "<memory>");

  const std::vector<Tactic>& tactics() const { return tactics_; }
  std::size_t size() const { return tactics_.size(); }
  bool empty() const { return tactics_.empty(); }
  const Tactic* find(std::string_view id) const;

  bool operator==(const TacticStore& o) const { return tactics_ == o.tactics_; }

 private:
  std::vector<Tactic> tactics_;
};

/// Every `*.tactic` file in `dir`, ordered by file name.
TacticStore loadTactics(const std::filesystem::path& dir);
/// Writes `NN-<id>.tactic` files into `dir`.
void saveTactics(const TacticStore& store, const std::filesystem::path& dir);
/// The eight builtin strategies compiled into the library.
const TacticStore& builtinTactics();

enum class HintMode { All, Triggered, Off };
std::string_view toString(HintMode m);
std::optional<HintMode> hintModeFromString(std::string_view s);

std::vector<Tactic> retrieve(const TacticStore& store, std::string_view attemptProgram,
                             const std::vector<Diagnostic>& diagnostics, HintMode mode);

/// "### Hint k: <title>\n<body>" sections separated by blank lines.
std::string formatForPrompt(const std::vector<Tactic>& tactics);

class NoDifference : public Error {
 public:
  using Error::Error;
};
class FormatError : public Error {
 public:
  using Error::Error;
};
class ProblemSpecific : public Error {
 public:
  using Error::Error;
};
class InputMismatch : public Error {
 public:
  using Error::Error;
};

struct GenerateOptions {
  std::string failedRef;       // defaults to a digest of the failed program
  std::string groundTruthRef;  // defaults to a digest of the ground truth
  PromptTemplates templates = PromptTemplates::builtin();
};

/// Asks the model to explain, as a reusable strategy, what the verified
/// ground truth adds over a failed attempt on the same base program.
Tactic generateTactic(const std::string& failedProgram, const std::string& verifiedGroundTruth,
                      const CompletionFn& llm, const GenerateOptions& options = {});

/// Parses "Tactic: <title>" followed by a body out of a model response.
Tactic parseGeneratedTactic(std::string_view response);

/// Identifiers of `program` that must not appear in a problem-independent
/// strategy: declared names plus identifiers of three or more characters,
/// minus Dafny builtins and generic placeholder names.
std::vector<std::string> programSpecificIdentifiers(std::string_view program);

std::string slugify(std::string_view title);

}  // namespace dfyannot
