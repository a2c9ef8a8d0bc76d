#include <algorithm>

#include "dfyannot/util.hpp"
#include "dfyannot/verifier.hpp"
#include "json_io.hpp"

namespace dfyannot {

ScriptedOracle::ScriptedOracle(std::vector<Rule> rules, std::vector<Entry> sequence)
    : rules_(std::move(rules)), sequence_(std::move(sequence)) {}

ScriptedOracle::ScriptedOracle(ScriptedOracle&& other) noexcept
    : rules_(std::move(other.rules_)),
      sequence_(std::move(other.sequence_)),
      next_(other.next_),
      calls_(other.calls_) {}

ScriptedOracle ScriptedOracle::fromJson(std::string_view text, const PatternTable& table) {
  using jsonio::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw LoadError(std::string("oracle script is not valid JSON: ") + e.what());
  }
  std::vector<Rule> rules;
  std::vector<Entry> sequence;
  const json* seq = j.is_array() ? &j : (j.contains("sequence") ? &j["sequence"] : nullptr);
  if (j.is_object() && j.contains("rules")) {
    for (const auto& r : j["rules"]) {
      Rule rule;
      if (r.contains("digest")) rule.digest = r["digest"].get<std::string>();
      rule.contains = r.value("contains", std::vector<std::string>{});
      rule.absent = r.value("absent", std::vector<std::string>{});
      rule.outcome = jsonio::outcomeFromJson(r.at("outcome"), table, &rule.invariantAnchors);
      rules.push_back(std::move(rule));
    }
  }
  if (seq) {
    for (const auto& o : *seq) {
      Entry e;
      e.outcome = jsonio::outcomeFromJson(o, table, &e.invariantAnchors);
      sequence.push_back(std::move(e));
    }
  }
  return ScriptedOracle(std::move(rules), std::move(sequence));
}

ScriptedOracle ScriptedOracle::load(const std::filesystem::path& path, const PatternTable& table) {
  try {
    return fromJson(readFile(path), table);
  } catch (const LoadError& e) {
    throw LoadError(path.string() + ": " + e.what());
  } catch (const std::exception& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

ScriptedOracle::Entry ScriptedOracle::flagInvariants(const std::vector<std::string>& invariantTexts,
                                                     Classification kind) {
  Entry e;
  e.outcome.status = VerifierStatus::VerificationFailed;
  for (const auto& text : invariantTexts) {
    Diagnostic d;
    d.severity = Severity::Error;
    d.classification = kind;
    d.messageText = kind == Classification::InvariantOnEntry
                        ? "this loop invariant could not be proved on entry"
                        : "this invariant could not be proved to be maintained by the loop";
    e.outcome.diagnostics.push_back(d);
    e.invariantAnchors.push_back(text);
  }
  return e;
}

ScriptedOracle::Entry ScriptedOracle::postconditionFailure() {
  Entry e;
  e.outcome.status = VerifierStatus::VerificationFailed;
  Diagnostic d;
  d.line = 1;
  d.col = 1;
  d.messageText = "a postcondition could not be proved on this return path";
  d.classification = Classification::PostconditionFailure;
  e.outcome.diagnostics.push_back(d);
  e.invariantAnchors.emplace_back();
  return e;
}

ScriptedOracle::Entry ScriptedOracle::verifiedEntry() {
  Entry e;
  e.outcome.status = VerifierStatus::Verified;
  return e;
}

VerifierOutcome ScriptedOracle::anchor(VerifierOutcome outcome,
                                       const std::vector<std::string>& anchors,
                                       const std::string& programText) {
  bool any = std::any_of(anchors.begin(), anchors.end(), [](const auto& a) { return !a.empty(); });
  if (!any) return outcome;
  auto program = parseProgram(programText);
  std::vector<Diagnostic> kept;
  for (std::size_t i = 0; i < outcome.diagnostics.size(); ++i) {
    auto d = outcome.diagnostics[i];
    if (i >= anchors.size() || anchors[i].empty()) {
      kept.push_back(std::move(d));
      continue;
    }
    auto wanted = normalizeClause(anchors[i]);
    for (const auto* inv : program.ofKind(AnnotationKind::LoopInvariant)) {
      if (inv->clauseText != wanted) continue;
      // Dafny points at the invariant expression, not the keyword.
      const auto& tok = program.tokens[std::min(inv->firstToken + 1, inv->lastToken)];
      d.line = tok.loc.line;
      d.col = tok.loc.col;
      kept.push_back(d);
      break;
    }
  }
  outcome.diagnostics = std::move(kept);
  return outcome;
}

VerifierOutcome ScriptedOracle::verify(const std::string& programText) {
  std::lock_guard lock(mu_);
  ++calls_;
  std::optional<std::string> digest;
  for (const auto& rule : rules_) {
    if (rule.digest) {
      if (!digest) digest = sha256Hex(programText);
      if (*rule.digest != *digest) continue;
    }
    bool ok = std::all_of(rule.contains.begin(), rule.contains.end(), [&](const auto& s) {
      return programText.find(s) != std::string::npos;
    });
    ok = ok && std::none_of(rule.absent.begin(), rule.absent.end(), [&](const auto& s) {
      return programText.find(s) != std::string::npos;
    });
    if (ok) return anchor(rule.outcome, rule.invariantAnchors, programText);
  }
  if (next_ < sequence_.size()) {
    const auto& e = sequence_[next_++];
    return anchor(e.outcome, e.invariantAnchors, programText);
  }
  VerifierOutcome exhausted;
  exhausted.status = VerifierStatus::ToolError;
  exhausted.exitDetail = "scripted oracle exhausted after " + std::to_string(calls_ - 1) + " calls";
  return exhausted;
}

VerifyFn ScriptedOracle::asVerifyFn() {
  return [this](const std::string& text) { return verify(text); };
}

std::size_t ScriptedOracle::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

std::size_t ScriptedOracle::remaining() const {
  std::lock_guard lock(mu_);
  return sequence_.size() - next_;
}

std::string outcomeToJson(const VerifierOutcome& outcome) {
  return jsonio::toJson(outcome).dump(2);
}

}  // namespace dfyannot
