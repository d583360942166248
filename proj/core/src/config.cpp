#include "dnafb/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace dnafb {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

void Config::load_stream(std::istream& in, const std::string& origin) {
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": empty key");
    if (!section.empty() && key.find('.') == std::string::npos) key = section + "." + key;
    values_[key] = value;
  }
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  load_stream(in, path);
}

void Config::set(const std::string& key, const std::string& value) { values_[key] = value; }

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

const std::string* Config::lookup(const std::string& key) {
  const auto it = values_.find(key);
  if (it == values_.end()) return nullptr;
  consumed_.insert(key);
  return &it->second;
}

std::string Config::get_string(const std::string& key, const std::string& def) {
  const std::string* v = lookup(key);
  return v ? *v : def;
}

double Config::get_double(const std::string& key, double def) {
  const std::string* v = lookup(key);
  if (!v) return def;
  std::size_t pos = 0;
  const double out = std::stod(*v, &pos);
  if (pos != v->size()) throw std::invalid_argument("config key '" + key + "': not a number: " + *v);
  return out;
}

int Config::get_int(const std::string& key, int def) {
  const std::string* v = lookup(key);
  if (!v) return def;
  std::size_t pos = 0;
  const int out = std::stoi(*v, &pos);
  if (pos != v->size()) throw std::invalid_argument("config key '" + key + "': not an integer: " + *v);
  return out;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t def) {
  const std::string* v = lookup(key);
  if (!v) return def;
  std::size_t pos = 0;
  const std::uint64_t out = std::stoull(*v, &pos);
  if (pos != v->size()) throw std::invalid_argument("config key '" + key + "': not an integer: " + *v);
  return out;
}

bool Config::get_bool(const std::string& key, bool def) {
  const std::string* v = lookup(key);
  if (!v) return def;
  std::string s = *v;
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw std::invalid_argument("config key '" + key + "': not a boolean: " + *v);
}

void Config::check_consumed() const {
  for (const auto& [key, value] : values_)
    if (!consumed_.count(key))
      throw std::invalid_argument("unknown config key '" + key + "'");
}

}  // namespace dnafb
