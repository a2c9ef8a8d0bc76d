#include <algorithm>
#include <cstdio>

#include "dfyannot/embedded.hpp"
#include "dfyannot/hints.hpp"

namespace dfyannot {

namespace {

std::string diagnosticText(const Diagnostic& d) {
  return d.messageText + " [" + std::string(toString(d.classification)) + "]";
}

std::vector<std::string> splitOn(std::string_view s, std::string_view sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    auto at = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, at == std::string_view::npos ? std::string_view::npos : at - pos)));
    if (at == std::string_view::npos) break;
    pos = at + sep.size();
  }
  return out;
}

}  // namespace

Trigger Trigger::parse(std::string_view spec) {
  Trigger t;
  t.spec_ = trim(spec);
  if (t.spec_.empty()) throw LoadError("empty trigger");
  for (const auto& raw : splitOn(t.spec_, "&&")) {
    Term term;
    auto sep = raw.find_first_of(":~");
    if (sep == std::string::npos) throw LoadError("trigger term without ':' or '~': " + raw);
    auto target = trim(std::string_view(raw).substr(0, sep));
    if (target == "program") {
      term.onProgram = true;
    } else if (target == "diagnostic") {
      term.onProgram = false;
    } else {
      throw LoadError("trigger target must be 'program' or 'diagnostic': " + raw);
    }
    term.isRegex = raw[sep] == '~';
    term.text = raw.substr(sep + 1);
    if (term.text.empty()) throw LoadError("empty trigger pattern: " + raw);
    if (term.isRegex) {
      try {
        auto flags = std::regex::ECMAScript;
        if (!term.onProgram) flags |= std::regex::icase;
        term.re.emplace(term.text, flags);
      } catch (const std::regex_error& e) {
        throw LoadError("bad trigger regex '" + term.text + "': " + e.what());
      }
    }
    t.terms_.push_back(std::move(term));
  }
  return t;
}

bool Trigger::matches(std::string_view programText,
                      const std::vector<Diagnostic>& diagnostics) const {
  for (const auto& term : terms_) {
    bool hit = false;
    if (term.onProgram) {
      hit = term.isRegex
                ? std::regex_search(programText.begin(), programText.end(), *term.re)
                : programText.find(term.text) != std::string_view::npos;
    } else {
      for (const auto& d : diagnostics) {
        auto text = diagnosticText(d);
        hit = term.isRegex ? std::regex_search(text, *term.re) : containsIgnoreCase(text, term.text);
        if (hit) break;
      }
    }
    if (!hit) return false;
  }
  return true;
}

Tactic parseTactic(std::string_view text, const std::string& origin) {
  Tactic t;
  auto lines = splitLines(text);
  std::size_t i = 0;
  bool sawSeparator = false;
  for (; i < lines.size(); ++i) {
    auto line = trim(lines[i]);
    if (line == "---") {
      sawSeparator = true;
      ++i;
      break;
    }
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw LoadError(origin + ": malformed header line: " + line);
    auto key = trim(std::string_view(line).substr(0, colon));
    auto value = trim(std::string_view(line).substr(colon + 1));
    if (key == "id") {
      t.id = value;
    } else if (key == "title") {
      t.title = value;
    } else if (key == "trigger") {
      try {
        t.triggers.push_back(Trigger::parse(value));
      } catch (const LoadError& e) {
        throw LoadError(origin + ": " + e.what());
      }
    } else if (key == "provenance") {
      // "builtin" or "generated failed=<ref> groundTruth=<ref>"
      std::string_view v = value;
      if (v.substr(0, 9) == "generated") {
        t.provenance.generated = true;
        for (const auto& part : splitOn(v.substr(9), " ")) {
          if (part.rfind("failed=", 0) == 0) t.provenance.failedRef = part.substr(7);
          if (part.rfind("groundTruth=", 0) == 0) t.provenance.groundTruthRef = part.substr(12);
        }
      } else if (v != "builtin") {
        throw LoadError(origin + ": unknown provenance: " + value);
      }
    } else {
      throw LoadError(origin + ": unknown header key: " + key);
    }
  }
  if (!sawSeparator) throw LoadError(origin + ": missing '---' separator");
  std::string body;
  for (; i < lines.size(); ++i) {
    body += lines[i];
    body += '\n';
  }
  t.body = trim(body);
  if (t.id.empty()) throw LoadError(origin + ": missing id");
  if (t.title.empty()) throw LoadError(origin + ": missing title");
  if (t.body.empty()) throw LoadError(origin + ": empty body");
  return t;
}

std::string serializeTactic(const Tactic& t) {
  std::string out = "id: " + t.id + "\ntitle: " + t.title + "\n";
  for (const auto& trig : t.triggers) out += "trigger: " + trig.spec() + "\n";
  if (t.provenance.generated) {
    out += "provenance: generated failed=" + t.provenance.failedRef +
           " groundTruth=" + t.provenance.groundTruthRef + "\n";
  } else {
    out += "provenance: builtin\n";
  }
  out += "---\n" + t.body + "\n";
  return out;
}

void TacticStore::add(Tactic tactic, const std::string& origin) {
  if (trim(tactic.body).empty()) throw LoadError(origin + ": tactic '" + tactic.id + "' has an empty body");
  for (const auto& t : tactics_) {
    if (t.id == tactic.id) throw LoadError(origin + ": duplicate tactic id '" + tactic.id + "'");
    if (t.title == tactic.title)
      throw LoadError(origin + ": duplicate tactic title '" + tactic.title + "'");
  }
  tactics_.push_back(std::move(tactic));
}

const Tactic* TacticStore::find(std::string_view id) const {
  for (const auto& t : tactics_)
    if (t.id == id) return &t;
  return nullptr;
}

TacticStore loadTactics(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw LoadError(dir.string() + ": not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".tactic") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  TacticStore store;
  for (const auto& f : files) store.add(parseTactic(readFile(f), f.string()), f.string());
  return store;
}

void saveTactics(const TacticStore& store, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  int n = 0;
  for (const auto& t : store.tactics()) {
    char prefix[16];
    std::snprintf(prefix, sizeof prefix, "%02d-", ++n);
    writeFile(dir / (prefix + t.id + ".tactic"), serializeTactic(t));
  }
}

const TacticStore& builtinTactics() {
  static const TacticStore store = [] {
    TacticStore s;
    for (const auto& [name, text] : embeddedFiles()) {
      if (name.rfind("tactics/", 0) == 0) s.add(parseTactic(text, name), name);
    }
    return s;
  }();
  return store;
}

std::string_view toString(HintMode m) {
  switch (m) {
    case HintMode::All: return "all";
    case HintMode::Triggered: return "triggered";
    case HintMode::Off: return "off";
  }
  return "?";
}

std::optional<HintMode> hintModeFromString(std::string_view s) {
  if (s == "all") return HintMode::All;
  if (s == "triggered") return HintMode::Triggered;
  if (s == "off") return HintMode::Off;
  return std::nullopt;
}

std::vector<Tactic> retrieve(const TacticStore& store, std::string_view attemptProgram,
                             const std::vector<Diagnostic>& diagnostics, HintMode mode) {
  std::vector<Tactic> out;
  if (mode == HintMode::Off) return out;
  for (const auto& t : store.tactics()) {
    if (mode == HintMode::All) {
      out.push_back(t);
      continue;
    }
    for (const auto& trig : t.triggers) {
      if (trig.matches(attemptProgram, diagnostics)) {
        out.push_back(t);
        break;
      }
    }
  }
  return out;
}

std::string formatForPrompt(const std::vector<Tactic>& tactics) {
  std::string out;
  int k = 0;
  for (const auto& t : tactics) {
    if (k) out += "\n\n";
    out += "### Hint " + std::to_string(++k) + ": " + t.title + "\n" + t.body;
  }
  return out;
}

}  // namespace dfyannot
