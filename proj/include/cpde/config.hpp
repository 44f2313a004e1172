#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace cpde {

/// Key-value run configuration: `key = value` lines, `#` comments. Every key
/// a command reads lands in the resolved map (with the default when the file
/// omits it); keys the command never reads are rejected, so typos fail loudly.
/// Writing the resolved map back yields a config that reproduces the run.
class Config {
 public:
  Config() = default;
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  /// CLI override `key=value`; wins over the file.
  void set(const std::string& key, const std::string& value);

  std::string str(const std::string& key, const std::string& fallback);
  std::string str_required(const std::string& key);
  double num(const std::string& key, double fallback);
  double num_required(const std::string& key);
  long integer(const std::string& key, long fallback);
  bool flag(const std::string& key, bool fallback);
  /// Comma list `a,b,c` or range `start:stop:step` (inclusive stop).
  std::vector<double> num_list(const std::string& key, const std::string& fallback);
  bool has(const std::string& key) const { return values_.count(key) > 0; }

  /// Rejects keys present in the input that no getter consumed.
  void reject_unknown() const;
  /// Sorted `key = value` text of everything the run actually used.
  std::string resolved_text() const;

 private:
  std::string raw(const std::string& key, const std::string& fallback, bool required);

  std::map<std::string, std::string> values_;
  std::set<std::string> consumed_;
  std::map<std::string, std::string> resolved_;
};

std::vector<double> parse_num_list(const std::string& text);

}  // namespace cpde
