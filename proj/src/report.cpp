#include "report.hpp"

#include <cstdio>
#include <set>

namespace hvf {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

nlohmann::json to_json(const IndexReport& rep) {
  nlohmann::json j;
  j["nu_tilde"] = rep.nu_tilde;
  j["Q"] = rep.local_q;
  j["s_max"] = rep.s_max;
  j["samples"] = rep.nu_samples.size();
  std::map<int, int> histogram;
  for (const auto& [pt, nu] : rep.nu_samples) histogram[nu]++;
  for (const auto& [nu, count] : histogram) j["nu_histogram"][std::to_string(nu)] = count;
  j["singular_point_count"] = rep.singular_points.size();
  for (std::size_t i = 0; i < rep.singular_points.size() && i < 50; ++i)
    j["singular_points"].push_back(rep.singular_points[i]);
  j["nu_tilde_witness"]["point"] = rep.nu_tilde_witness_point;
  j["nu_tilde_witness"]["tuple"] = rep.nu_tilde_witness_tuple;
  j["Q_witness"]["point"] = rep.q_witness_point;
  j["Q_witness"]["tuple"] = rep.q_witness_tuple;
  j["note"] = "nu_tilde and Q are grid-attained lower bounds with recorded witnesses";
  return j;
}

nlohmann::json to_json(const SuiteReport& rep) {
  nlohmann::json j;
  j["suite"] = rep.suite;
  j["exponents"] = rep.exponents;
  j["constant"] = rep.constant;
  j["family_size"] = rep.family_size;
  j["worst_params"] = rep.worst_params;
  j["verdict"] = rep.verdict;
  if (!rep.notes.empty()) j["notes"] = rep.notes;
  j["metrics"] = rep.metrics;
  j["provenance"] = {{"exponents", "exact rational arithmetic"},
                     {"constants", "empirical: boundedness over a finite family"}};
  return j;
}

nlohmann::json to_json(const VolumeEstimate& est) {
  nlohmann::json j;
  j["center"] = est.center;
  j["r"] = est.r;
  j["volume"] = est.volume;
  j["stderr"] = est.stderr_;
  j["samples"] = est.samples;
  j["seed"] = est.seed;
  return j;
}

nlohmann::json to_json(const BallBoxReport& rep) {
  nlohmann::json j;
  j["suite"] = "ballbox";
  j["min_ratio"] = rep.min_ratio;
  j["max_ratio"] = rep.max_ratio;
  j["spread"] = rep.min_ratio > 0 ? rep.max_ratio / rep.min_ratio : 0.0;
  j["bound"] = rep.bound;
  j["verdict"] = rep.pass ? "PASS" : "FAIL";
  for (const auto& row : rep.rows) {
    nlohmann::json r;
    r["center"] = row.center;
    r["r"] = row.r;
    r["volume"] = row.volume;
    r["stderr"] = row.stderr_;
    r["lambda"] = row.lambda;
    r["ratio"] = row.ratio;
    j["rows"].push_back(r);
  }
  return j;
}

nlohmann::json to_json(const DoublingReport& rep) {
  nlohmann::json j;
  j["suite"] = "doubling";
  j["C3"] = rep.c3;
  if (rep.refined_c3 >= 0.0) {
    j["C3_refined"] = rep.refined_c3;
    j["drift"] = rep.drift;
  }
  j["verdict"] = rep.pass ? "PASS" : "FAIL";
  for (const auto& row : rep.rows) {
    nlohmann::json r;
    r["center"] = row.center;
    r["r"] = row.r;
    r["vol_r"] = row.vol_r;
    r["vol_2r"] = row.vol_2r;
    r["ratio"] = row.ratio;
    j["rows"].push_back(r);
  }
  return j;
}

nlohmann::json to_json(const WeakTypeReport& rep) {
  nlohmann::json j;
  j["suite"] = "weak-type";
  j["d_I"] = rep.d_I;
  j["decay_exponent"] = rep.exponent;
  j["C_emp"] = rep.c_emp;
  j["f_l1"] = rep.f_l1;
  j["slack"] = rep.slack;
  j["verdict"] = rep.pass ? "PASS" : "FAIL";
  for (const auto& row : rep.rows) {
    nlohmann::json r;
    r["t"] = row.t;
    r["measure"] = row.measure;
    r["bound"] = row.bound;
    j["rows"].push_back(r);
  }
  return j;
}

nlohmann::json config_echo(const RunConfig& cfg) {
  nlohmann::json j;
  for (const auto& [section, kv] : cfg.sections())
    for (const auto& [key, value] : kv) j[section][key] = value;
  return j;
}

std::string rows_csv(const std::vector<std::map<std::string, double>>& rows) {
  std::set<std::string> keys;
  for (const auto& row : rows)
    for (const auto& [k, v] : row) keys.insert(k);
  std::string out;
  bool first = true;
  for (const auto& k : keys) {
    if (!first) out += ',';
    out += k;
    first = false;
  }
  out += '\n';
  for (const auto& row : rows) {
    first = true;
    for (const auto& k : keys) {
      if (!first) out += ',';
      first = false;
      auto it = row.find(k);
      if (it != row.end()) out += fmt(it->second);
    }
    out += '\n';
  }
  return out;
}

}  // namespace hvf
