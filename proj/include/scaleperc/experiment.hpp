#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace scaleperc {

// Minimal INI: [section] headers, key = value lines, '#' or ';' comments.
struct IniEntry {
  std::string key, value;
  int line = 0;
};

struct IniSection {
  std::string name;
  int line = 0;
  std::vector<IniEntry> entries;
  const IniEntry* find(const std::string& key) const;
};

struct IniFile {
  std::string source;
  std::vector<IniSection> sections;
  std::string text;  // raw bytes, for hashing
};

// Errors are parse_error with "source:line: message".
IniFile parse_ini(std::istream& in, const std::string& source = "<config>");
IniFile read_ini(const std::filesystem::path& path);

struct ExperimentResult {
  std::vector<std::filesystem::path> files;  // CSVs then the manifest
  std::vector<std::string> warnings;
};

inline constexpr int kCsvFormat = 1;

// Validates every section and key first, then runs the estimators in file
// order. An empty out_dir means [experiment] output (default "out"). Output is a pure function of the config (and master seed): worker
// count never changes a byte.
ExperimentResult run_experiment(const IniFile& config, const std::filesystem::path& out_dir,
                                std::optional<int> workers = std::nullopt);

std::uint64_t fnv1a(const std::string& bytes);

}  // namespace scaleperc
