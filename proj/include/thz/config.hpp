#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "thz/core.hpp"

namespace thz::config {

using Value = std::variant<bool, std::int64_t, double, std::string, std::vector<double>>;

struct Entry {
  Value value;
  int line = 0;
};

/// Sectioned key = value text: [section] headers, # comments, double-quoted
/// strings, booleans, decimal/hex integers, floats and flat numeric arrays.
/// Accessors record which keys were read so leftovers can be rejected.
class Document {
 public:
  static Document parse(std::string_view text, std::string origin = "<string>");
  static Document load(const std::filesystem::path& path);

  const std::string& origin() const { return origin_; }
  bool has_section(const std::string& section) const { return sections_.count(section) != 0; }
  bool has(const std::string& section, const std::string& key) const;
  std::vector<std::string> sections() const;

  std::optional<double> number(const std::string& section, const std::string& key);
  std::optional<std::int64_t> integer(const std::string& section, const std::string& key);
  std::optional<std::uint64_t> unsigned_integer(const std::string& section, const std::string& key);
  std::optional<std::string> string(const std::string& section, const std::string& key);
  std::optional<bool> boolean(const std::string& section, const std::string& key);
  std::optional<std::vector<double>> array(const std::string& section, const std::string& key);

  /// Throws a config error naming the first section.key that no accessor read.
  void reject_unread() const;

  /// "origin: section.key (line n)" for diagnostics.
  std::string where(const std::string& section, const std::string& key) const;

 private:
  const Entry* find(const std::string& section, const std::string& key);

  std::string origin_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
  std::map<std::string, int> section_lines_;
  std::set<std::pair<std::string, std::string>> read_;
};

}  // namespace thz::config
