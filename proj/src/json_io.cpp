#include "json_io.hpp"

#include "dfyannot/util.hpp"

namespace dfyannot::jsonio {

json toJson(const SourceLoc& loc) { return {{"line", loc.line}, {"col", loc.col}}; }

SourceLoc locFromJson(const json& j) { return {j.value("line", 0), j.value("col", 0)}; }

json toJson(const Diagnostic& d) {
  json j = {{"line", d.line},
            {"col", d.col},
            {"severity", d.severity == Severity::Error ? "error" : "warning"},
            {"message", d.messageText},
            {"classification", std::string(toString(d.classification))}};
  j["boundClauseId"] = d.boundClauseId ? json(*d.boundClauseId) : json(nullptr);
  return j;
}

Diagnostic diagnosticFromJson(const json& j, const PatternTable& table, std::string* anchor) {
  Diagnostic d;
  d.line = j.value("line", 0);
  d.col = j.value("col", 0);
  d.severity = j.value("severity", "error") == "warning" ? Severity::Warning : Severity::Error;
  d.messageText = j.value("message", "");
  d.classification = table.classify(d.messageText);
  if (j.contains("classification") && j["classification"].is_string()) {
    if (auto c = classificationFromString(j["classification"].get<std::string>())) {
      d.classification = *c;
    }
  }
  if (j.contains("boundClauseId") && j["boundClauseId"].is_string()) {
    d.boundClauseId = j["boundClauseId"].get<std::string>();
  }
  if (anchor) *anchor = j.value("atInvariant", "");
  return d;
}

json toJson(const VerifierOutcome& o) {
  json diags = json::array();
  for (const auto& d : o.diagnostics) diags.push_back(toJson(d));
  json j = {{"status", std::string(toString(o.status))},
            {"diagnostics", diags},
            {"rawOutput", o.rawOutput},
            {"wallSeconds", o.wallSeconds}};
  if (!o.exitDetail.empty()) j["exitDetail"] = o.exitDetail;
  return j;
}

VerifierOutcome outcomeFromJson(const json& j, const PatternTable& table,
                                std::vector<std::string>* anchors) {
  VerifierOutcome o;
  auto status = verifierStatusFromString(j.value("status", ""));
  if (!status) throw LoadError("unknown verifier status in: " + j.dump());
  o.status = *status;
  o.rawOutput = j.value("rawOutput", "");
  o.wallSeconds = j.value("wallSeconds", 0.0);
  o.exitDetail = j.value("exitDetail", "");
  if (j.contains("diagnostics")) {
    for (const auto& d : j["diagnostics"]) {
      std::string anchor;
      o.diagnostics.push_back(diagnosticFromJson(d, table, &anchor));
      if (anchors) anchors->push_back(anchor);
    }
  }
  return o;
}

json toJson(const AnnotationSpan& s) {
  json j = {{"kind", std::string(toString(s.kind))},
            {"byteSpan", {s.span.begin, s.span.end}},
            {"clauseText", s.clauseText},
            {"clauseId", s.clauseId},
            {"start", toJson(s.startLoc)}};
  j["enclosingConstructId"] =
      s.enclosingConstructId ? json(*s.enclosingConstructId) : json(nullptr);
  return j;
}

AnnotationSpan spanFromJson(const json& j) {
  AnnotationSpan s;
  auto kind = annotationKindFromString(j.value("kind", ""));
  if (!kind) throw LoadError("unknown annotation kind in: " + j.dump());
  s.kind = *kind;
  s.span = {j["byteSpan"][0].get<std::size_t>(), j["byteSpan"][1].get<std::size_t>()};
  s.clauseText = j.value("clauseText", "");
  s.clauseId = j.value("clauseId", "");
  s.startLoc = locFromJson(j.value("start", json::object()));
  if (j.contains("enclosingConstructId") && j["enclosingConstructId"].is_number()) {
    s.enclosingConstructId = j["enclosingConstructId"].get<int>();
  }
  return s;
}

json toJson(const DiffVerdict& v) {
  json j = std::visit(
      [](const auto& x) -> json {
        using V = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<V, DiffEqual>) {
          return {{"verdict", "Equal"}};
        } else if constexpr (std::is_same_v<V, DiffMismatch>) {
          return {{"verdict", "Mismatch"},
                  {"candidateToken", x.candidateToken},
                  {"baseToken", x.baseToken},
                  {"candidateLoc", toJson(x.candidateLoc)},
                  {"baseLoc", toJson(x.baseLoc)}};
        } else if constexpr (std::is_same_v<V, DiffUnsound>) {
          return {{"verdict", "UnsoundConstruct"},
                  {"kind", std::string(toString(x.kind))},
                  {"location", toJson(x.location)}};
        } else {
          return {{"verdict", "ScanFailure"},
                  {"side", x.side == DiffSide::Candidate ? "candidate" : "base"},
                  {"detail", x.detail}};
        }
      },
      v.verdict);
  json added = json::array();
  for (const auto& a : v.addedAnnotations) added.push_back(toJson(a));
  j["addedAnnotations"] = added;
  return j;
}

DiffVerdict verdictFromJson(const json& j) {
  DiffVerdict v;
  auto kind = j.value("verdict", "");
  if (kind == "Equal") {
    v.verdict = DiffEqual{};
  } else if (kind == "Mismatch") {
    v.verdict = DiffMismatch{j.value("candidateToken", ""), j.value("baseToken", ""),
                             locFromJson(j.value("candidateLoc", json::object())),
                             locFromJson(j.value("baseLoc", json::object()))};
  } else if (kind == "UnsoundConstruct") {
    DiffUnsound u;
    auto k = j.value("kind", "");
    u.kind = k == "AxiomAttribute" ? UnsoundKind::AxiomAttribute
             : k == "ExpectStmt"   ? UnsoundKind::ExpectStmt
                                   : UnsoundKind::AssumeStmt;
    u.location = locFromJson(j.value("location", json::object()));
    v.verdict = u;
  } else if (kind == "ScanFailure") {
    v.verdict = DiffScanFailure{
        j.value("side", "candidate") == "base" ? DiffSide::Base : DiffSide::Candidate,
        j.value("detail", "")};
  } else {
    throw LoadError("unknown diff verdict in: " + j.dump());
  }
  if (j.contains("addedAnnotations")) {
    for (const auto& a : j["addedAnnotations"]) v.addedAnnotations.push_back(spanFromJson(a));
  }
  return v;
}

}  // namespace dfyannot::jsonio
