#include "cofix/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "cofix/errors.hpp"
#include "cofix/trace_io.hpp"

namespace cofix {
namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r");
  auto end = s.find_last_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  return s.substr(begin, end - begin + 1);
}

}  // namespace

FlatConfig FlatConfig::parse(const std::string& text) {
  FlatConfig config;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DiagnosticError("config line " + std::to_string(lineno) + " is not 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw DiagnosticError("config line " + std::to_string(lineno) + " has an empty key or value");
    if (!config.values_.emplace(key, value).second)
      throw DiagnosticError("duplicate config key: " + key);
  }
  return config;
}

FlatConfig FlatConfig::parse_file(const std::string& path) {
  return parse(read_text_file(path));
}

bool FlatConfig::has(const std::string& key) const { return values_.count(key) > 0; }

const std::string& FlatConfig::raw(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw DiagnosticError("missing config key: " + key);
  return it->second;
}

double FlatConfig::number(const std::string& key) const {
  const std::string& text = raw(key);
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &consumed);
  } catch (const std::exception&) {
    throw DiagnosticError("config key '" + key + "' is not a number: " + text);
  }
  if (consumed != text.size())
    throw DiagnosticError("config key '" + key + "' has trailing junk: " + text);
  return value;
}

double FlatConfig::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

long FlatConfig::integer(const std::string& key) const {
  const std::string& text = raw(key);
  std::size_t consumed = 0;
  long value = 0;
  try {
    value = std::stol(text, &consumed);
  } catch (const std::exception&) {
    throw DiagnosticError("config key '" + key + "' is not an integer: " + text);
  }
  if (consumed != text.size())
    throw DiagnosticError("config key '" + key + "' has trailing junk: " + text);
  return value;
}

long FlatConfig::integer_or(const std::string& key, long fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::string FlatConfig::text_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? raw(key) : fallback;
}

void FlatConfig::require_known(const std::vector<std::string>& allowed) const {
  for (const auto& [key, value] : values_) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw DiagnosticError("unknown config key: " + key);
  }
}

}  // namespace cofix
