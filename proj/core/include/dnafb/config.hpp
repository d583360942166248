#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>

namespace dnafb {

/// Sectioned key-value configuration. File syntax:
///   [section]
///   key = value    # comment
/// Keys address as "section.key"; values read typed with defaults. After all
/// reads, check_consumed() turns leftover (unknown/typo) keys into errors.
class Config {
 public:
  Config() = default;

  void load_stream(std::istream& in, const std::string& origin = "<stream>");
  void load_file(const std::string& path);

  /// CLI overrides; wins over file values.
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& def);
  double get_double(const std::string& key, double def);
  int get_int(const std::string& key, int def);
  std::uint64_t get_u64(const std::string& key, std::uint64_t def);
  bool get_bool(const std::string& key, bool def);

  /// Throws naming the first key that was never read.
  void check_consumed() const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  const std::string* lookup(const std::string& key);

  std::map<std::string, std::string> values_;
  std::set<std::string> consumed_;
};

}  // namespace dnafb
