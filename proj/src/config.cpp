#include "rotsym/config.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include "rotsym/error.hpp"

namespace rotsym {

std::string trim(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    piece = trim(piece);
    if (!piece.empty()) out.push_back(piece);
  }
  return out;
}

const ConfigEntry* ConfigSection::find(const std::string& key) const {
  const auto it = entries.find(key);
  return it == entries.end() ? nullptr : &it->second;
}

void ConfigFile::fail(int line, const std::string& message) const {
  throw Error(ErrorCode::config, source_ + ":" + std::to_string(line) + ": " + message);
}

ConfigFile ConfigFile::parse(std::istream& in, const std::string& source) {
  ConfigFile file;
  file.source_ = source;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') file.fail(line_no, "unterminated section header");
      const std::string header = trim(line.substr(1, line.size() - 2));
      if (header.empty()) file.fail(line_no, "empty section header");
      ConfigSection section;
      const auto space = header.find_first_of(" \t");
      section.kind = header.substr(0, space);
      if (space != std::string::npos) section.name = trim(header.substr(space));
      section.line = line_no;
      file.sections_.push_back(std::move(section));
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) file.fail(line_no, "expected 'key = value'");
    if (file.sections_.empty()) file.fail(line_no, "entry outside of any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) file.fail(line_no, "missing key before '='");
    auto& entries = file.sections_.back().entries;
    if (entries.count(key)) {
      file.fail(line_no, "duplicate key '" + key + "' (first set on line " +
                             std::to_string(entries[key].line) + ")");
    }
    entries[key] = ConfigEntry{value, line_no};
  }
  return file;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::config, "cannot open config file '" + path + "'");
  return parse(in, path);
}

}  // namespace rotsym
