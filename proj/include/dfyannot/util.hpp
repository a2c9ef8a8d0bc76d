#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dfyannot {

/// Base class for every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LoadError : public Error {
 public:
  using Error::Error;
};

/// Lowercase hex SHA-256 of `data`.
std::string sha256Hex(std::string_view data);

/// Digest of an ordered list of fields; fields are length-prefixed so that
/// ("ab","c") and ("a","bc") never collide.
std::string digestFields(const std::vector<std::string_view>& fields);

std::string readFile(const std::filesystem::path& path);
void writeFile(const std::filesystem::path& path, std::string_view content);

std::string trim(std::string_view s);
std::string toLower(std::string_view s);
bool containsIgnoreCase(std::string_view haystack, std::string_view needle);
std::vector<std::string> splitLines(std::string_view s);

/// Replaces every `{{NAME}}` with the matching value; unknown placeholders stay.
std::string renderTemplate(
    std::string_view tmpl,
    const std::vector<std::pair<std::string, std::string>>& values);

}  // namespace dfyannot
