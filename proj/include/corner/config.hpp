#pragma once
#include <map>
#include <string>
#include <vector>

namespace corner {

// Flat "key = value" configuration. Keys may be dotted (grid.n_theta); '#'
// starts a comment; blank lines are ignored. Values keep internal spaces.
struct config {
  std::map<std::string, std::string> kv;

  static config parse_file(const std::string& path);
  static config parse_string(const std::string& text);

  bool has(const std::string& key) const { return kv.count(key) > 0; }
  std::string get_str(const std::string& key, const std::string& dflt) const;
  double get_num(const std::string& key, double dflt) const;
  int get_int(const std::string& key, int dflt) const;
  bool get_bool(const std::string& key, bool dflt) const;

  // Required variants fail with a precondition error when the key is absent.
  std::string need_str(const std::string& key) const;
  double need_num(const std::string& key) const;

  void set(const std::string& key, const std::string& value) { kv[key] = value; }

  // Sorted key/value pairs, used to echo the resolved configuration into reports.
  std::vector<std::pair<std::string, std::string>> items() const;
};

}  // namespace corner
