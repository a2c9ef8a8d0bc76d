#pragma once

// nlohmann::json conversions shared by the library's file formats.

#include <json.hpp>

#include "dfyannot/surface.hpp"
#include "dfyannot/verifier.hpp"

namespace dfyannot::jsonio {

using nlohmann::json;

json toJson(const Diagnostic& d);
json toJson(const VerifierOutcome& o);
json toJson(const SourceLoc& loc);
json toJson(const AnnotationSpan& span);
json toJson(const DiffVerdict& verdict);

/// Missing classifications are derived from the message with `table`.
/// `anchor` receives the optional "atInvariant" field.
Diagnostic diagnosticFromJson(const json& j, const PatternTable& table, std::string* anchor = nullptr);
VerifierOutcome outcomeFromJson(const json& j, const PatternTable& table,
                                std::vector<std::string>* anchors = nullptr);

SourceLoc locFromJson(const json& j);
AnnotationSpan spanFromJson(const json& j);
DiffVerdict verdictFromJson(const json& j);

}  // namespace dfyannot::jsonio
