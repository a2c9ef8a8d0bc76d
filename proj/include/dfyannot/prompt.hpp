#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dfyannot/util.hpp"

namespace dfyannot {

/// A rendered chat prompt. The digest covers every text field and keys
/// transcript replay.
struct Prompt {
  std::string systemText;
  std::vector<std::string> userTurns;  // base, one per prior attempt, hints
  std::string userText;                // the single user message sent
  std::string digest;

  static Prompt make(std::string systemText, std::vector<std::string> userTurns,
                     std::string userText);
  std::size_t estimatedTokens() const;
};

using CompletionFn = std::function<std::string(const Prompt&)>;

class ProviderError : public Error {
 public:
  using Error::Error;
};
class TransportError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};
class AuthError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};
class ReplayMiss : public ProviderError {
 public:
  using ProviderError::ProviderError;
};
class ScriptExhausted : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

/// Prompt template files, overridable from a directory with the same names.
struct PromptTemplates {
  std::string system;
  std::string user;
  std::string attempt;
  std::string tacticGeneration;
  std::string informalize;

  static PromptTemplates builtin();
  /// Files missing from `dir` fall back to the builtin text.
  static PromptTemplates fromDirectory(const std::string& dir);
};

}  // namespace dfyannot
