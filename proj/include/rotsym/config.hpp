#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rotsym {

/// Minimal INI-style reader: `[section]` or `[section name]` headers,
/// `key = value` lines, `#` and `;` comments. Every entry remembers its line
/// so semantic errors can point back into the file.
struct ConfigEntry {
  std::string value;
  int line = 0;
};

struct ConfigSection {
  std::string kind;  // first word of the header
  std::string name;  // rest of the header, may be empty
  int line = 0;
  std::map<std::string, ConfigEntry> entries;

  const ConfigEntry* find(const std::string& key) const;
};

class ConfigFile {
 public:
  static ConfigFile parse(std::istream& in, const std::string& source = "<config>");
  static ConfigFile load(const std::string& path);

  const std::vector<ConfigSection>& sections() const { return sections_; }
  const std::string& source() const { return source_; }

  /// "source:line: message", thrown as ErrorCode::config.
  [[noreturn]] void fail(int line, const std::string& message) const;

 private:
  std::string source_;
  std::vector<ConfigSection> sections_;
};

/// Splits on commas and trims; empty pieces are dropped.
std::vector<std::string> split_list(const std::string& text);
std::string trim(const std::string& text);

}  // namespace rotsym
