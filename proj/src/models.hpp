#pragma once

#include <string>
#include <vector>

#include "system.hpp"

namespace hvf::gallery {

struct Model {
  std::string name;
  std::string source;       // DSL text
  std::string domain_box;   // "lo hi" per axis, ';'-separated
  std::string indicator;    // optional Omega = {g < 0}
};

const std::vector<Model>& models();
const Model* find(const std::string& name);
// Parsed system + default domain for a gallery name; throws if unknown.
VectorFieldSystem system_for(const std::string& name);
DomainSpec domain_for(const std::string& name);

}  // namespace hvf::gallery
