#include "config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "errors.hpp"

namespace hvf {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str());
}

RunConfig RunConfig::from_string(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section = "run";
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw DomainError("config line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DomainError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw DomainError("config line " + std::to_string(lineno) + ": empty key");
    cfg.sections_[section][key] = value;
  }
  return cfg;
}

bool RunConfig::has(const std::string& section, const std::string& key) const {
  auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) > 0;
}

std::string RunConfig::get(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  auto it = sections_.find(section);
  if (it == sections_.end()) return fallback;
  auto kt = it->second.find(key);
  return kt == it->second.end() ? fallback : kt->second;
}

double RunConfig::get_double(const std::string& section, const std::string& key,
                             double fallback) const {
  std::string v = get(section, key);
  if (v.empty()) return fallback;
  try {
    return std::stod(v);
  } catch (const std::exception&) {
    throw DomainError("config [" + section + "] " + key + ": not a number: " + v);
  }
}

long RunConfig::get_long(const std::string& section, const std::string& key,
                         long fallback) const {
  std::string v = get(section, key);
  if (v.empty()) return fallback;
  try {
    return std::stol(v);
  } catch (const std::exception&) {
    throw DomainError("config [" + section + "] " + key + ": not an integer: " + v);
  }
}

Rational RunConfig::get_rational(const std::string& section, const std::string& key,
                                 const Rational& fallback) const {
  std::string v = get(section, key);
  if (v.empty()) return fallback;
  try {
    return Rational::parse(v);
  } catch (const std::exception&) {
    throw DomainError("config [" + section + "] " + key + ": not a rational: " + v);
  }
}

std::vector<double> RunConfig::get_doubles(const std::string& section,
                                           const std::string& key) const {
  std::vector<double> out;
  std::istringstream in(get(section, key));
  double v;
  while (in >> v) out.push_back(v);
  return out;
}

void RunConfig::set(const std::string& section, const std::string& key,
                    const std::string& value) {
  sections_[section][key] = value;
}

}  // namespace hvf
