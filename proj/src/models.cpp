#include "models.hpp"

#include <sstream>

#include "parser.hpp"

namespace hvf::gallery {

const std::vector<Model>& models() {
  static const std::vector<Model> kModels = {
      {"euclid2", "dim 2; X1 = D1; X2 = D2; step 1", "0 1; 0 1", ""},
      {"euclid3", "dim 3; X1 = D1; X2 = D2; X3 = D3; step 1", "0 1; 0 1; 0 1", ""},
      {"heisenberg", "dim 3; X1 = D1 - (x2/2)*D3; X2 = D2 + (x1/2)*D3; step 2",
       "-1 1; -1 1; -1 1", ""},
      {"grushin", "dim 2; X1 = D1; X2 = x1*D2; step 2", "-1 1; -1 1", ""},
      {"martinet", "dim 3; X1 = D1; X2 = D2 + x1^2*D3; step 3", "-1 1; -1 1; -1 1", ""},
      {"example21", "dim 2; X1 = exp(x2)*D1; X2 = exp(2*x2)*D1; X3 = x1*D2; step 2",
       "-1 1; -1 1", "x1^2 + x2^2 - 1"},
  };
  return kModels;
}

const Model* find(const std::string& name) {
  for (const auto& m : models())
    if (m.name == name) return &m;
  return nullptr;
}

VectorFieldSystem system_for(const std::string& name) {
  const Model* m = find(name);
  if (!m) throw std::invalid_argument("unknown gallery model: " + name);
  return parse_system(m->source);
}

DomainSpec domain_for(const std::string& name) {
  const Model* m = find(name);
  if (!m) throw std::invalid_argument("unknown gallery model: " + name);
  DomainSpec d;
  d.label = m->name;
  std::istringstream axes(m->domain_box);
  std::string axis;
  while (std::getline(axes, axis, ';')) {
    std::istringstream pair(axis);
    double lo, hi;
    pair >> lo >> hi;
    d.lo.push_back(lo);
    d.hi.push_back(hi);
  }
  if (!m->indicator.empty()) d.indicator = parse_expression(m->indicator, d.dim());
  return d;
}

}  // namespace hvf::gallery
