#pragma once

#include <map>
#include <string>
#include <vector>

#include "rational.hpp"

namespace hvf {

// Plain-text run configuration: "[section]" headers over key = value lines,
// '#' comments. CLI flags overwrite individual keys.
class RunConfig {
 public:
  static RunConfig from_file(const std::string& path);
  static RunConfig from_string(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback = "") const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long get_long(const std::string& section, const std::string& key, long fallback) const;
  Rational get_rational(const std::string& section, const std::string& key,
                        const Rational& fallback) const;
  // whitespace-separated doubles
  std::vector<double> get_doubles(const std::string& section, const std::string& key) const;

  void set(const std::string& section, const std::string& key, const std::string& value);

  const std::map<std::string, std::map<std::string, std::string>>& sections() const {
    return sections_;
  }

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace hvf
