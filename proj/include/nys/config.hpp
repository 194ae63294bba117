#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "nys/common.hpp"

namespace nys {

// Flat dotted-key configuration: one `key.path = value` per line, `#`
// comments. Values read with a default are written back, so echoing after
// a run dumps the fully resolved configuration and a run re-launched from
// that echo is identical. Keys that were never consumed are reported as
// errors by the CLI to catch typos.
class Config {
 public:
  Config() = default;

  static Config from_file(const std::filesystem::path& path);
  // Tokens of the form key=value (already stripped of any leading --).
  static Config from_overrides(const std::vector<std::string>& tokens);

  // Later sources win: merged values overwrite existing ones.
  void merge(const Config& other);

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::string get_string(const std::string& key);
  std::string get_string(const std::string& key, const std::string& fallback);
  double get_double(const std::string& key);
  double get_double(const std::string& key, double fallback);
  Index get_index(const std::string& key);
  Index get_index(const std::string& key, Index fallback);
  uint64_t get_uint64(const std::string& key, uint64_t fallback);
  bool get_bool(const std::string& key, bool fallback);

  // Comma-separated values; each element may be a `lo:step:hi` grid, which
  // expands to lo, lo+step, ..., up to hi inclusive.
  std::vector<double> get_double_list(const std::string& key);
  std::vector<double> get_double_list(const std::string& key, const std::string& fallback);
  std::vector<Index> get_index_list(const std::string& key);
  std::vector<std::string> get_string_list(const std::string& key,
                                           const std::string& fallback);

  void set(const std::string& key, const std::string& value);
  void mark_consumed(const std::string& key);
  std::vector<std::string> unconsumed() const;

  void echo(std::ostream& out) const;

 private:
  std::string raw(const std::string& key);

  std::map<std::string, std::string> kv_;
  std::set<std::string> consumed_;
};

// Expands `lo:step:hi` grid syntax; plain numbers pass through as a
// singleton.
std::vector<double> expand_grid(const std::string& text);

}  // namespace nys
