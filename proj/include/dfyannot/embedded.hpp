#pragma once

#include <map>
#include <string>

namespace dfyannot {

/// Files from data/ compiled into the library, keyed by relative path
/// (e.g. "prompts/system.txt").
const std::map<std::string, std::string>& embeddedFiles();

}  // namespace dfyannot
