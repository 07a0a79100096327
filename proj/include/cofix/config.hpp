#pragma once

#include <map>
#include <string>
#include <vector>

namespace cofix {

/// Flat `key = value` configuration file: one assignment per line, `#` starts
/// a comment, numeric values are plain decimals. Duplicate keys are errors,
/// and consumers reject unknown keys, so a config either means exactly what
/// it says or fails loudly.
class FlatConfig {
 public:
  static FlatConfig parse(const std::string& text);       // throws DiagnosticError
  static FlatConfig parse_file(const std::string& path);  // throws DiagnosticError

  bool has(const std::string& key) const;
  const std::string& raw(const std::string& key) const;

  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  long integer(const std::string& key) const;
  long integer_or(const std::string& key, long fallback) const;
  std::string text_or(const std::string& key, const std::string& fallback) const;

  /// Throws DiagnosticError naming the first key not in the allowed list.
  void require_known(const std::vector<std::string>& allowed) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace cofix
