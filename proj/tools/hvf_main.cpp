// Command-line driver for the hvf toolkit, built on the public C API.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hvf/hvf.h"
#include "json.hpp"

namespace {

struct CommonOpts {
  std::string model;
  std::string config_path;
  std::string out_dir = "out";
  std::string seed;
  std::string samples;
  std::string h;
  std::vector<std::string> sets;  // generic section.key=value overrides
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->set_help_flag("--help", "print help");  // frees --h for the lattice spacing
  cmd->add_option("--model", opts.model, "gallery name, .vf path, or inline DSL");
  cmd->add_option("--config", opts.config_path, "run configuration file");
  cmd->add_option("--out", opts.out_dir, "output directory (default: out)");
  cmd->add_option("--seed", opts.seed, "RNG seed");
  cmd->add_option("--samples", opts.samples, "Monte Carlo samples per ball");
  cmd->add_option("--h", opts.h, "oracle lattice spacing");
  cmd->add_option("--set", opts.sets, "override: section.key=value")->take_all();
}

std::string build_config(const CommonOpts& opts, const std::string& extra) {
  std::string text;
  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path);
    if (!in) {
      std::cerr << "error: cannot open config: " << opts.config_path << "\n";
      std::exit(1);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    text = buf.str();
    text += "\n";
  }
  if (!opts.model.empty()) text += "[model]\nsource = " + opts.model + "\n";
  if (!opts.seed.empty()) text += "[run]\nseed = " + opts.seed + "\n";
  if (!opts.samples.empty()) text += "[run]\nsamples = " + opts.samples + "\n";
  if (!opts.h.empty()) text += "[oracle]\nh = " + opts.h + "\n";
  for (const auto& kv : opts.sets) {
    auto dot = kv.find('.');
    auto eq = kv.find('=');
    if (dot == std::string::npos || eq == std::string::npos || eq < dot) {
      std::cerr << "error: --set expects section.key=value, got: " << kv << "\n";
      std::exit(1);
    }
    text += "[" + kv.substr(0, dot) + "]\n" + kv.substr(dot + 1, eq - dot - 1) + " = " +
            kv.substr(eq + 1) + "\n";
  }
  text += extra;
  return text;
}

hvf_workspace* open_or_die(const CommonOpts& opts, const std::string& extra = "") {
  hvf_workspace* w = nullptr;
  if (hvf_open(build_config(opts, extra).c_str(), &w) != HVF_OK) {
    std::cerr << "error: " << hvf_last_error() << "\n";
    std::exit(1);
  }
  return w;
}

std::vector<double> parse_point(std::string text) {
  for (char& c : text)
    if (c == ',') c = ' ';
  std::vector<double> out;
  std::istringstream in(text);
  double v;
  while (in >> v) out.push_back(v);
  return out;
}

std::string model_label(hvf_workspace* w) {
  char* info = nullptr;
  if (hvf_model_info(w, &info) != HVF_OK) return "model";
  auto j = nlohmann::json::parse(info);
  hvf_free(info);
  return j.value("label", "model");
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    std::exit(1);
  }
}

int run_analyze(const CommonOpts& opts) {
  hvf_workspace* w = open_or_die(opts);
  char* json = nullptr;
  char* csv = nullptr;
  int rc = hvf_analyze(w, &json, &csv);
  if (rc != HVF_OK && !json) {
    std::cerr << "error: " << hvf_last_error() << "\n";
    hvf_close(w);
    return 1;
  }
  std::string label = model_label(w);
  write_file(std::filesystem::path(opts.out_dir) / (label + "_analyze.json"), json);
  if (csv && csv[0])
    write_file(std::filesystem::path(opts.out_dir) / (label + "_nu_samples.csv"), csv);
  auto j = nlohmann::json::parse(json);
  const auto& r = j["result"];
  bool ok = r["hormander"]["ok"].get<bool>();
  std::cout << "model " << label << ": hormander " << (ok ? "ok" : "FAILED");
  if (ok) {
    std::cout << " (step " << r["hormander"]["s_max"] << ")"
              << ", nu_tilde = " << r["index"]["nu_tilde"] << ", Q = " << r["index"]["Q"];
  }
  std::cout << "\n";
  if (r.contains("probes"))
    for (const auto& probe : r["probes"])
      std::cout << "  nu" << probe["point"].dump() << " = " << probe["nu"] << "\n";
  std::cout << "report: " << (std::filesystem::path(opts.out_dir) / (label + "_analyze.json"))
            << "\n";
  hvf_free(json);
  if (csv) hvf_free(csv);
  hvf_close(w);
  return ok ? 0 : 2;
}

int run_distance(const CommonOpts& opts, const std::string& xs, const std::string& ys,
                 const std::string& geodesic_path) {
  hvf_workspace* w = open_or_die(opts);
  auto x = parse_point(xs);
  auto y = parse_point(ys);
  char* json = nullptr;
  char* geocsv = nullptr;
  int rc = hvf_distance_report(w, x.data(), y.data(), static_cast<int>(x.size()),
                               geodesic_path.empty() ? 0 : 1, &json, &geocsv);
  if (rc != HVF_OK) {
    std::cerr << "error: " << hvf_last_error() << "\n";
    hvf_close(w);
    return 1;
  }
  auto j = nlohmann::json::parse(json);
  std::printf("d = %.9g +/- %.3g\n", j["result"]["distance"].get<double>(),
              j["result"]["error_bound"].get<double>());
  if (!geodesic_path.empty() && geocsv) write_file(geodesic_path, geocsv);
  hvf_free(json);
  if (geocsv) hvf_free(geocsv);
  hvf_close(w);
  return 0;
}

int run_ball_volume(const CommonOpts& opts, const std::string& cs, double r) {
  hvf_workspace* w = open_or_die(opts);
  auto c = parse_point(cs);
  char* json = nullptr;
  int rc = hvf_ball_volume(w, c.data(), static_cast<int>(c.size()), r, &json);
  if (rc != HVF_OK) {
    std::cerr << "error: " << hvf_last_error() << "\n";
    hvf_close(w);
    return 1;
  }
  auto j = nlohmann::json::parse(json);
  std::printf("|B| = %.9g +/- %.3g  (samples %ld, seed %llu)\n",
              j["result"]["volume"].get<double>(), j["result"]["stderr"].get<double>(),
              j["result"]["samples"].get<long>(),
              static_cast<unsigned long long>(j["result"]["seed"].get<std::uint64_t>()));
  std::string label = model_label(w);
  write_file(std::filesystem::path(opts.out_dir) / (label + "_ball_volume.json"), json);
  hvf_free(json);
  hvf_close(w);
  return 0;
}

int run_verify(const CommonOpts& opts, const std::string& suite, const std::string& k,
               const std::string& p, const std::string& q_override,
               const std::string& exponent_override, const std::string& save_oracle) {
  std::string extra;
  if (!k.empty()) extra += "[suite." + suite + "]\nk = " + k + "\n";
  if (!p.empty()) extra += "[suite." + suite + "]\np = " + p + "\n";
  if (!q_override.empty()) extra += "[run]\nq_override = " + q_override + "\n";
  if (!exponent_override.empty()) extra += "[run]\nexponent_override = " + exponent_override + "\n";
  hvf_workspace* w = open_or_die(opts, extra);
  char* json = nullptr;
  char* csv = nullptr;
  int verdict = 0;
  int rc = hvf_verify(w, suite.c_str(), &json, &csv, &verdict);
  if (rc != HVF_OK) {
    std::cerr << "error: " << hvf_last_error() << "\n";
    hvf_close(w);
    return 1;
  }
  std::string label = model_label(w);
  auto base = std::filesystem::path(opts.out_dir) / (label + "_" + suite);
  write_file(base.string() + ".json", json);
  if (csv && csv[0]) write_file(base.string() + ".csv", csv);
  auto j = nlohmann::json::parse(json);
  const auto& r = j["result"];
  std::cout << suite << " on " << label << ": " << r.value("verdict", "?");
  if (r.contains("constant")) std::cout << "  constant = " << r["constant"];
  if (r.contains("exponents") && r["exponents"].contains("q"))
    std::cout << "  q = " << r["exponents"]["q"].get<std::string>();
  std::cout << "\nreport: " << base.string() + ".json" << "\n";
  if (!save_oracle.empty()) {
    if (hvf_oracle_save(w, save_oracle.c_str()) != HVF_OK)
      std::cerr << "warning: oracle save failed: " << hvf_last_error() << "\n";
  }
  hvf_free(json);
  if (csv) hvf_free(csv);
  hvf_close(w);
  return verdict;
}

int run_report(const std::string& out_dir) {
  char* text = nullptr;
  if (hvf_report_summary(out_dir.c_str(), &text) != HVF_OK) {
    std::cerr << "error: " << hvf_last_error() << "\n";
    return 1;
  }
  std::cout << text;
  hvf_free(text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hvf: geometry and sharp-inequality verification for Hörmander vector fields"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");
  app.set_version_flag("--version", hvf_version());

  CommonOpts a_opts, d_opts, b_opts, v_opts;
  std::string dx, dy, geodesic, center, suite, k, p, q_override, exponent_override, save_oracle;
  std::string report_dir = "out";
  double radius = 0.0;

  auto* analyze = app.add_subcommand("analyze", "commutator analysis and embedding table");
  add_common(analyze, a_opts);

  auto* distance = app.add_subcommand("distance", "subunit distance between two points");
  add_common(distance, d_opts);
  distance->add_option("--x", dx, "first point, e.g. \"0,0\"")->required();
  distance->add_option("--y", dy, "second point")->required();
  distance->add_option("--geodesic", geodesic, "write the approximate geodesic CSV here");

  auto* ball = app.add_subcommand("ball-volume", "Monte Carlo subunit ball volume");
  add_common(ball, b_opts);
  ball->add_option("--center", center, "ball center")->required();
  ball->add_option("--r", radius, "ball radius")->required();

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  add_common(verify, v_opts);
  verify->add_option("suite", suite,
                     "sobolev | gn | nash | moser | isoperimetric | log-sobolev | holder | "
                     "moser-trudinger | poincare | representation | rayleigh | ballbox | "
                     "doubling | kernel-weight | weak-type")
      ->required();
  verify->add_option("--k", k, "derivative order");
  verify->add_option("--p", p, "Lebesgue exponent (rational, e.g. 2 or 7/2)");
  verify->add_option("--q-override", q_override, "override the probe/target exponent q");
  verify->add_option("--exponent-override", exponent_override,
                     "override the isoperimetric exponent (rational)");
  verify->add_option("--save-oracle", save_oracle, "dump the distance oracle after the run");

  auto* report = app.add_subcommand("report", "summarize the JSON reports in a directory");
  report->set_help_flag("--help", "print help");
  report->add_option("--out", report_dir, "report directory (default: out)");

  CLI11_PARSE(app, argc, argv);

  if (analyze->parsed()) return run_analyze(a_opts);
  if (distance->parsed()) return run_distance(d_opts, dx, dy, geodesic);
  if (ball->parsed()) return run_ball_volume(b_opts, center, radius);
  if (verify->parsed())
    return run_verify(v_opts, suite, k, p, q_override, exponent_override, save_oracle);
  if (report->parsed()) return run_report(report_dir);
  return 1;
}
