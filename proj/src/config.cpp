#include "corner/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "corner/errors.hpp"

namespace corner {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

config config::parse_string(const std::string& text) {
  config c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string s = trim(line);
    if (s.empty()) continue;
    auto eq = s.find('=');
    if (eq == std::string::npos)
      fail_parse("config line " + std::to_string(lineno) + ": expected key = value, got \"" + s + "\"");
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (key.empty())
      fail_parse("config line " + std::to_string(lineno) + ": empty key");
    c.kv[key] = val;
  }
  return c;
}

config config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_parse("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

std::string config::get_str(const std::string& key, const std::string& dflt) const {
  auto it = kv.find(key);
  return it == kv.end() ? dflt : it->second;
}

double config::get_num(const std::string& key, double dflt) const {
  auto it = kv.find(key);
  if (it == kv.end()) return dflt;
  const char* s = it->second.c_str();
  char* end = nullptr;
  double v = std::strtod(s, &end);
  if (end == s || *end != '\0')
    fail_parse("config key " + key + ": not a number: \"" + it->second + "\"");
  return v;
}

int config::get_int(const std::string& key, int dflt) const {
  auto it = kv.find(key);
  if (it == kv.end()) return dflt;
  const char* s = it->second.c_str();
  char* end = nullptr;
  long v = std::strtol(s, &end, 10);
  if (end == s || *end != '\0')
    fail_parse("config key " + key + ": not an integer: \"" + it->second + "\"");
  return static_cast<int>(v);
}

bool config::get_bool(const std::string& key, bool dflt) const {
  auto it = kv.find(key);
  if (it == kv.end()) return dflt;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  fail_parse("config key " + key + ": not a boolean: \"" + v + "\"");
}

std::string config::need_str(const std::string& key) const {
  auto it = kv.find(key);
  if (it == kv.end()) fail_pre("missing required config key: " + key);
  return it->second;
}

double config::need_num(const std::string& key) const {
  if (!has(key)) fail_pre("missing required config key: " + key);
  return get_num(key, 0.0);
}

std::vector<std::pair<std::string, std::string>> config::items() const {
  return {kv.begin(), kv.end()};
}

}  // namespace corner
