#include <json.hpp>

#include "dfyannot/embedded.hpp"
#include "dfyannot/util.hpp"
#include "dfyannot/verifier.hpp"

namespace dfyannot {

std::string_view toString(Classification c) {
  switch (c) {
    case Classification::InvariantNotMaintained: return "InvariantNotMaintained";
    case Classification::InvariantOnEntry: return "InvariantOnEntry";
    case Classification::PostconditionFailure: return "PostconditionFailure";
    case Classification::AssertionFailure: return "AssertionFailure";
    case Classification::DecreasesFailure: return "DecreasesFailure";
    case Classification::SyntaxOrResolve: return "SyntaxOrResolve";
    case Classification::Other: return "Other";
  }
  return "Other";
}

std::optional<Classification> classificationFromString(std::string_view name) {
  for (auto c : {Classification::InvariantNotMaintained, Classification::InvariantOnEntry,
                 Classification::PostconditionFailure, Classification::AssertionFailure,
                 Classification::DecreasesFailure, Classification::SyntaxOrResolve,
                 Classification::Other}) {
    if (toString(c) == name) return c;
  }
  return std::nullopt;
}

PatternTable::PatternTable(std::string versionLabel, std::vector<Rule> rules)
    : versionLabel_(std::move(versionLabel)), rules_(std::move(rules)) {
  bool hasCatchAll = !rules_.empty() && !rules_.back().isRegex && rules_.back().pattern.empty() &&
                     rules_.back().classification == Classification::Other;
  if (!hasCatchAll) rules_.push_back({"", Classification::Other, false});
  compiled_.reserve(rules_.size());
  for (const auto& r : rules_) {
    if (!r.isRegex) {
      compiled_.emplace_back(std::nullopt);
      continue;
    }
    try {
      compiled_.emplace_back(std::regex(r.pattern, std::regex::ECMAScript | std::regex::icase));
    } catch (const std::regex_error& e) {
      throw LoadError("bad pattern '" + r.pattern + "': " + e.what());
    }
  }
}

Classification PatternTable::classify(std::string_view messageText) const {
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const auto& r = rules_[i];
    bool hit = r.isRegex ? std::regex_search(messageText.begin(), messageText.end(), *compiled_[i])
                         : containsIgnoreCase(messageText, r.pattern);
    if (hit) return r.classification;
  }
  return Classification::Other;
}

PatternTable PatternTable::fromJson(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(std::string("pattern table is not valid JSON: ") + e.what());
  }
  std::string label = "unlabeled";
  const nlohmann::json* rules = &j;
  if (j.is_object()) {
    label = j.value("versionLabel", label);
    if (!j.contains("patterns")) throw LoadError("pattern table object lacks \"patterns\"");
    rules = &j["patterns"];
  }
  if (!rules->is_array()) throw LoadError("pattern table must be a JSON array of rules");
  std::vector<Rule> parsed;
  for (const auto& r : *rules) {
    auto cls = classificationFromString(r.value("classification", ""));
    if (!cls) throw LoadError("unknown classification in pattern table: " + r.dump());
    parsed.push_back({r.value("pattern", ""), *cls, r.value("isRegex", false)});
  }
  return PatternTable(label, std::move(parsed));
}

PatternTable PatternTable::load(const std::filesystem::path& path) {
  try {
    return fromJson(readFile(path));
  } catch (const LoadError& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

std::string PatternTable::toJson() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rules_) {
    arr.push_back({{"pattern", r.pattern},
                   {"classification", std::string(dfyannot::toString(r.classification))},
                   {"isRegex", r.isRegex}});
  }
  return nlohmann::json{{"versionLabel", versionLabel_}, {"patterns", arr}}.dump(2);
}

const PatternTable& PatternTable::defaultTable() {
  static const PatternTable kTable = fromJson(embeddedFiles().at("patterns/dafny-4.11.json"));
  return kTable;
}

}  // namespace dfyannot
