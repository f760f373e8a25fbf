// Acceptance suite: one pass/fail line per criterion, each with a wall-clock
// budget. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lie.hpp"
#include "metric.hpp"
#include "models.hpp"
#include "session.hpp"
#include "suites.hpp"
#include "volume.hpp"

using namespace hvf;

namespace {

struct Check {
  std::vector<std::string> failures;
  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  template <class... Args>
  void requiref(bool ok, const char* fmt, Args... args) {
    if (!ok) {
      char buf[512];
      std::snprintf(buf, sizeof buf, fmt, args...);
      failures.emplace_back(buf);
    }
  }
};

double rel_gap(double got, double want) {
  return std::fabs(got - want) / std::max({1.0, std::fabs(got), std::fabs(want)});
}

Workspace open_ws(const std::string& config_text) {
  return Workspace(RunConfig::from_string(config_text));
}

// ---- criterion 1: example21 golden indices ---------------------------------

void c1_example21_golden(Check& c) {
  auto ws = open_ws(
      "[model]\nsource = example21\n"
      "[analyze]\nprobe_points = 0.5 0.1; 0 0.3\n");
  auto outcome = ws.analyze();
  const auto& r = outcome.report["result"];
  c.require(r["hormander"]["ok"].get<bool>(), "hormander check failed");
  c.requiref(r["hormander"]["s_max"].get<int>() == 2, "step = %d, want 2",
             r["hormander"]["s_max"].get<int>());
  c.requiref(r["index"]["nu_tilde"].get<int>() == 3, "nu_tilde = %d, want 3",
             r["index"]["nu_tilde"].get<int>());
  c.requiref(r["index"]["Q"].get<int>() == 4, "Q = %d, want 4", r["index"]["Q"].get<int>());
  c.requiref(r["probes"][0]["nu"].get<int>() == 2, "nu(0.5,0.1) = %d, want 2",
             r["probes"][0]["nu"].get<int>());
  c.requiref(r["probes"][1]["nu"].get<int>() == 3, "nu(0,0.3) = %d, want 3",
             r["probes"][1]["nu"].get<int>());

  // the four determinant closed forms at 10 random points, 1e-9 relative
  auto sys = gallery::system_for("example21");
  CommutatorBasis basis(sys, 2);
  int i13 = -1, i23 = -1;
  for (int i = 0; i < basis.size(); ++i) {
    if (basis.entry(i).multi_index == std::vector<int>{1, 3}) i13 = i;
    if (basis.entry(i).multi_index == std::vector<int>{2, 3}) i23 = i;
  }
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    std::vector<double> x{u(rng), u(rng)};
    double x1 = x[0], e1 = std::exp(x[1]), e2 = std::exp(2 * x[1]), e3 = std::exp(3 * x[1]);
    c.require(rel_gap(lambda_det(basis, std::vector<int>{0, 2}, x), x1 * e1) < 1e-9,
              "det(X1,X3) mismatch");
    c.require(rel_gap(lambda_det(basis, std::vector<int>{1, 2}, x), x1 * e2) < 1e-9,
              "det(X2,X3) mismatch");
    c.require(rel_gap(lambda_det(basis, std::vector<int>{0, i13}, x), e2) < 1e-9,
              "det(X1,[X1,X3]) mismatch");
    c.require(rel_gap(lambda_det(basis, std::vector<int>{i13, i23}, x), x1 * e3) < 1e-9,
              "det([X1,X3],[X2,X3]) mismatch");
  }
}

// ---- criterion 2: bracket algebra properties -------------------------------

void c2_bracket_properties(Check& c) {
  std::mt19937 rng(202);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& model : gallery::models()) {
    auto sys = gallery::system_for(model.name);
    auto point = [&] {
      std::vector<double> x(sys.n);
      for (double& v : x) v = u(rng);
      return x;
    };
    auto eval = [&](const VectorField& f, const std::vector<double>& x) {
      std::vector<double> out;
      for (const auto& e : f) out.push_back(evaluate(e, x));
      return out;
    };
    // antisymmetry over all field pairs, 100 points total per model
    int points_per_pair = std::max(1, 100 / (sys.m * sys.m));
    for (int i = 0; i < sys.m; ++i)
      for (int j = 0; j < sys.m; ++j) {
        auto ab = lie_bracket(sys.fields[i], sys.fields[j]);
        auto ba = lie_bracket(sys.fields[j], sys.fields[i]);
        for (int t = 0; t < points_per_pair; ++t) {
          auto x = point();
          auto va = eval(ab, x);
          auto vb = eval(ba, x);
          for (int k = 0; k < sys.n; ++k)
            c.requiref(rel_gap(va[k], -vb[k]) < 1e-9, "%s: antisymmetry violated",
                       model.name.c_str());
        }
      }
    // jacobi identity on random basis triples, 100 points per model
    CommutatorBasis basis(sys, sys.s0_hint.value_or(2));
    std::uniform_int_distribution<int> pick(0, basis.size() - 1);
    for (int trip = 0; trip < 4; ++trip) {
      const auto& a = basis.entry(pick(rng)).field;
      const auto& b = basis.entry(pick(rng)).field;
      const auto& cc = basis.entry(pick(rng)).field;
      auto j1 = lie_bracket(a, lie_bracket(b, cc));
      auto j2 = lie_bracket(b, lie_bracket(cc, a));
      auto j3 = lie_bracket(cc, lie_bracket(a, b));
      for (int t = 0; t < 25; ++t) {
        auto x = point();
        auto v1 = eval(j1, x);
        auto v2 = eval(j2, x);
        auto v3 = eval(j3, x);
        double scale = 1.0;
        for (int k = 0; k < sys.n; ++k)
          scale = std::max({scale, std::fabs(v1[k]), std::fabs(v2[k]), std::fabs(v3[k])});
        for (int k = 0; k < sys.n; ++k)
          c.requiref(std::fabs(v1[k] + v2[k] + v3[k]) / scale < 1e-9, "%s: jacobi violated",
                     model.name.c_str());
      }
    }
  }
}

// ---- criterion 3: euclidean metric exactness --------------------------------

void c3_euclidean_exactness(Check& c) {
  auto sys = gallery::system_for("euclid2");
  OracleParams params;
  params.h = 1.0 / 64;
  DistanceOracle oracle(sys, gallery::domain_for("euclid2"), params);
  std::mt19937 rng(303);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  double bound = oracle.error_bound();
  for (int s = 0; s < 20; ++s) {
    std::vector<double> x{u(rng), u(rng)};
    c.require(oracle.distance(x, x).value == 0.0, "d(x,x) != 0");
    for (int t = 0; t < 10; ++t) {
      std::vector<double> y{u(rng), u(rng)};
      double truth = std::hypot(x[0] - y[0], x[1] - y[1]);
      double got = oracle.distance(x, y).value;
      c.requiref(std::fabs(got - truth) <= 0.02 * std::max(truth, 1e-6),
                 "pair error %.3f%% > 2%%", 100 * std::fabs(got - truth) / truth);
    }
  }
  for (int t = 0; t < 10; ++t) {
    std::vector<double> x{u(rng), u(rng)}, y{u(rng), u(rng)}, z{u(rng), u(rng)};
    double dxy = oracle.distance(x, y).value;
    double dyx = oracle.distance(y, x).value;
    c.require(std::fabs(dxy - dyx) <= 2 * bound, "symmetry beyond the stated bound");
    double dxz = oracle.distance(x, z).value;
    double dyz = oracle.distance(y, z).value;
    c.require(dxz <= dxy + dyz + 2 * bound, "triangle inequality beyond the stated bound");
  }
}

// ---- criterion 4: grushin anisotropic scaling -------------------------------

void c4_grushin_scaling(Check& c) {
  auto sys = gallery::system_for("grushin");
  for (double eps : {0.04, 0.01}) {
    double t = std::sqrt(eps / 0.04);  // dilation factor relative to the 0.04 setup
    DomainSpec dom;
    dom.lo = {-0.5 * t, -0.1 * t * t};
    dom.hi = {0.5 * t, 0.3 * t * t};
    OracleParams params;
    params.h = t / 40.0;
    params.axis_scales = {1.0, 0.25 * t};
    DistanceOracle oracle(sys, dom, params);
    std::vector<double> origin{0.0, 0.0};
    double d1 = oracle.distance(origin, std::vector<double>{0.0, eps}).value;
    double d4 = oracle.distance(origin, std::vector<double>{0.0, 4 * eps}).value;
    double ratio = d4 / d1;
    c.requiref(ratio >= 1.8 && ratio <= 2.2, "eps=%.2f: ratio %.3f outside [1.8, 2.2]", eps,
               ratio);
  }
}

// ---- criterion 5: heisenberg ball-box and doubling --------------------------

void c5_heisenberg_ballbox(Check& c) {
  auto sys = gallery::system_for("heisenberg");
  CommutatorBasis basis(sys, 2);
  std::vector<double> origin{0, 0, 0};
  auto scan = scan_tuples(basis, origin);
  double radii[3] = {0.05, 0.1, 0.2};
  double vols[3], ratios[3];
  for (int i = 0; i < 3; ++i) {
    double r = radii[i];
    DomainSpec dom;
    dom.lo = {-1.4 * r, -1.4 * r, -0.22 * r * r};
    dom.hi = {1.4 * r, 1.4 * r, 0.22 * r * r};
    OracleParams params;
    params.h = r / 12;
    params.axis_scales = {1.0, 1.0, 0.156 * r};
    DistanceOracle oracle(sys, dom, params);
    auto est = ball_volume(oracle, origin, r, 200000, 5000 + i);
    double lambda = 0.0;
    for (const auto& [deg, coeff] : scan.lambda_by_degree) lambda += coeff * std::pow(r, deg);
    vols[i] = est.volume;
    ratios[i] = est.volume / lambda;
  }
  double spread = std::max({ratios[0], ratios[1], ratios[2]}) /
                  std::min({ratios[0], ratios[1], ratios[2]});
  c.requiref(spread <= 2.0, "|B|/Lambda spread %.3f > 2", spread);
  double doubling = vols[2] / vols[1];
  c.requiref(doubling >= 12.0 && doubling <= 20.0, "doubling %.2f outside [12, 20]", doubling);
}

// ---- criterion 6: small-radius volume growth slope --------------------------

void c6_growth_slope(Check& c) {
  for (const auto& model : gallery::models()) {
    auto sys = gallery::system_for(model.name);
    CommutatorBasis basis(sys, sys.s0_hint.value_or(2));
    auto dom = gallery::domain_for(model.name);
    for (int t = 0; t < 20; ++t) {
      std::vector<double> x(sys.n);
      for (int i = 0; i < sys.n; ++i) {
        double u = uniform01(606, static_cast<std::uint64_t>(t) * sys.n + i + 1);
        x[i] = dom.lo[i] + (dom.hi[i] - dom.lo[i]) * u;
      }
      int nu = pointwise_nu(basis, x);
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      int cnt = 0;
      for (double r = 1e-5; r <= 1.0000001e-3; r *= std::sqrt(10.0)) {
        double lx = std::log(r), ly = std::log(nsw_polynomial(basis, x, r));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++cnt;
      }
      double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
      c.requiref(std::fabs(slope - nu) < 0.1, "%s: slope %.3f vs nu %d", model.name.c_str(),
                 slope, nu);
    }
  }
}

// ---- criterion 7: sobolev embedding with sharpness probe --------------------

void c7_sobolev(Check& c) {
  auto ws = open_ws(
      "[model]\nsource = example21\n"
      "[suite.sobolev]\nk = 1\np = 2\nq_probe = 7\nfamily = 24\n");
  auto outcome = ws.verify("sobolev");
  const auto& r = outcome.report["result"];
  c.require(r["verdict"] == "PASS", "example21 sobolev verdict " + outcome.verdict);
  c.require(r["exponents"]["q"] == "6", "q != 6");
  double growth = r["metrics"]["stability_growth"].get<double>();
  c.requiref(growth <= 2.0, "constant drift %.2f > 2x", growth);
  double probe = r["metrics"]["probe_growth"].get<double>();
  c.requiref(probe >= 2.0, "q'=7 probe growth %.2f < 2x", probe);
  c.require(r["metrics"]["probe_monotone"].get<double>() == 1.0, "probe not monotone");

  auto ws2 = open_ws(
      "[model]\nsource = euclid2\n"
      "[suite.sobolev]\nk = 1\np = 1\nfamily = 12\n");
  auto out2 = ws2.verify("sobolev");
  const auto& r2 = out2.report["result"];
  c.require(r2["verdict"] == "PASS", "euclid2 sobolev verdict " + out2.verdict);
  c.require(r2["exponents"]["q"] == "2", "euclid2 q != 2");
}

// ---- criterion 8: isoperimetric sharpness ------------------------------------

void c8_isoperimetric(Check& c) {
  auto ws = open_ws("[model]\nsource = example21\n");
  auto outcome = ws.verify("isoperimetric");
  const auto& r = outcome.report["result"];
  c.require(r["verdict"] == "PASS", "nu-exponent quotient not bounded: " + outcome.verdict);
  c.require(r["exponents"]["exponent"] == "2/3", "exponent != 2/3");

  auto ws2 = open_ws(
      "[model]\nsource = example21\n"
      "[run]\nexponent_override = 3/4\n");
  auto out2 = ws2.verify("isoperimetric");
  const auto& r2 = out2.report["result"];
  double decay = r2["metrics"]["decay_factor"].get<double>();
  c.requiref(decay >= 2.0, "Q-exponent quotient decays only %.2fx", decay);
  c.require(r2["metrics"]["monotone_decay"].get<double>() == 1.0,
            "Q-exponent quotient not monotone");
}

// ---- criterion 9: interpolation parameter validator --------------------------

void c9_validator(Check& c) {
  auto nash = nash_params(Rational(3));
  c.require(nash.a == Rational(4, 3), "nash a != 4/nu");
  c.require(nash.b == Rational(5, 3), "nash b != 1 + 2/nu");
  c.require(nash.b * nash.s2 - nash.a * nash.s1 == nash.p, "nash b*s2 - a*s1 != p");
  c.require(nash.b - nash.a == (nash.nu - nash.p) / nash.nu, "nash b - a != (nu - kp)/nu");
  auto moser = moser_params(Rational(3));
  c.require(moser.s2 == Rational(10, 3), "moser s2 != 2 + 4/nu");
  auto gn = gn_theta_params(Rational(3), Rational(2), 1, Rational(1), Rational(1, 2));
  c.require(Rational(1) / gn.s2 ==
                (Rational(1) - Rational(1, 2)) / gn.s1 +
                    Rational(1, 2) * (Rational(1) / gn.p - Rational(1) / gn.nu),
            "gn interpolation identity failed");
  bool rejected = false;
  try {
    nash_params(Rational(2));
  } catch (const RegimeError&) {
    rejected = true;
  }
  c.require(rejected, "nash with nu = 2 was not rejected");
}

// ---- criterion 10: inequality suite battery ----------------------------------

void c10_battery(Check& c) {
  auto run = [&](const std::string& cfg, const std::string& suite, const std::string& name,
                 std::function<void(const nlohmann::json&)> extra = nullptr) {
    auto ws = open_ws(cfg);
    auto outcome = ws.verify(suite);
    c.require(outcome.verdict == "PASS", name + ": " + outcome.verdict);
    if (extra) extra(outcome.report["result"]);
  };

  run("[model]\nsource = example21\n[suite.log-sobolev]\nk = 1\np = 2\n", "log-sobolev",
      "log-sobolev example21");
  run("[model]\nsource = euclid2\n[suite.log-sobolev]\nk = 1\np = 1\n", "log-sobolev",
      "log-sobolev euclid2");

  run("[model]\nsource = example21\n[suite.holder]\nk = 1\np = 6\n", "holder",
      "holder example21", [&](const nlohmann::json& r) {
        c.require(r["exponents"]["alpha"] == "1/2", "holder example21 alpha != 1/2");
      });
  run("[model]\nsource = euclid2\n[suite.holder]\nk = 1\np = 3\n", "holder", "holder euclid2",
      [&](const nlohmann::json& r) {
        c.require(r["exponents"]["alpha"] == "1/3", "holder euclid2 alpha != 1/3");
      });

  run("[model]\nsource = euclid2\n[suite.poincare]\np = 2\n[quadrature]\npoints = 385\n",
      "poincare", "poincare euclid2");
  run("[model]\nsource = grushin\n[suite.poincare]\np = 2\n[quadrature]\npoints = 385\n",
      "poincare", "poincare grushin");

  run("[model]\nsource = euclid2\n[suite.representation]\nsample_points = 30\n",
      "representation", "representation euclid2");
  run("[model]\nsource = grushin\n[suite.representation]\nsample_points = 30\n",
      "representation", "representation grushin");

  run("[model]\nsource = euclid2\n", "weak-type", "weak-type euclid2",
      [&](const nlohmann::json& r) {
        c.require(r["d_I"].get<int>() == 2, "weak-type euclid2 d(I) != 2");
        c.requiref(rel_gap(r["decay_exponent"].get<double>(), 2.0) < 1e-12,
                   "weak-type euclid2 exponent %.3f != 2", r["decay_exponent"].get<double>());
      });
  run("[model]\nsource = grushin\n", "weak-type", "weak-type grushin");

  run("[model]\nsource = euclid2\n", "moser-trudinger", "moser-trudinger euclid2",
      [&](const nlohmann::json& r) {
        c.require(r["metrics"]["sigma_star"].get<double>() > 0.0,
                  "moser-trudinger euclid2 has no admissible sigma");
      });
  run("[model]\nsource = example21\n", "moser-trudinger", "moser-trudinger example21",
      [&](const nlohmann::json& r) {
        c.require(r["metrics"]["sigma_star"].get<double>() > 0.0,
                  "moser-trudinger example21 has no admissible sigma");
      });
}

// ---- criterion 11: reproducibility -------------------------------------------

void c11_reproducibility(Check& c) {
  namespace fs = std::filesystem;
  auto run_cli = [&](const std::string& args) {
    std::string cmd = std::string(HVF_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  fs::path d1 = fs::temp_directory_path() / "hvf_acc_repro1";
  fs::path d2 = fs::temp_directory_path() / "hvf_acc_repro2";
  fs::remove_all(d1);
  fs::remove_all(d2);
  std::string verify_cmd =
      "verify sobolev --model euclid2 --p 1 --seed 7 --set suite.sobolev.family=8 --out ";
  c.require(run_cli(verify_cmd + d1.string()) == 0, "verify run 1 failed");
  c.require(run_cli(verify_cmd + d2.string()) == 0, "verify run 2 failed");
  c.require(!slurp(d1 / "euclid2_sobolev.json").empty(), "missing report");
  c.require(slurp(d1 / "euclid2_sobolev.json") == slurp(d2 / "euclid2_sobolev.json"),
            "sobolev JSON reports differ between identical runs");
  c.require(slurp(d1 / "euclid2_sobolev.csv") == slurp(d2 / "euclid2_sobolev.csv"),
            "sobolev CSV tables differ between identical runs");

  std::string mc_cmd =
      "ball-volume --model euclid2 --center 0.5,0.5 --r 0.25 --samples 20000 --seed 9 --out ";
  c.require(run_cli(mc_cmd + d1.string()) == 0, "ball-volume run 1 failed");
  c.require(run_cli(mc_cmd + d2.string()) == 0, "ball-volume run 2 failed");
  c.require(slurp(d1 / "euclid2_ball_volume.json") == slurp(d2 / "euclid2_ball_volume.json"),
            "ball-volume reports differ between identical runs");

  std::string an_cmd = "analyze --model heisenberg --out ";
  c.require(run_cli(an_cmd + d1.string()) == 0, "analyze run 1 failed");
  c.require(run_cli(an_cmd + d2.string()) == 0, "analyze run 2 failed");
  c.require(slurp(d1 / "heisenberg_analyze.json") == slurp(d2 / "heisenberg_analyze.json"),
            "analyze reports differ between identical runs");
  fs::remove_all(d1);
  fs::remove_all(d2);
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_seconds;
    std::function<void(Check&)> fn;
  };
  const std::vector<Criterion> criteria = {
      {"example21 golden indices and determinants", 5.0, c1_example21_golden},
      {"bracket antisymmetry and jacobi on the gallery", 10.0, c2_bracket_properties},
      {"euclidean metric exactness and axioms (h = 1/64)", 60.0, c3_euclidean_exactness},
      {"grushin vertical-distance scaling ratio", 120.0, c4_grushin_scaling},
      {"heisenberg ball-box ratios and doubling", 300.0, c5_heisenberg_ballbox},
      {"NSW polynomial slope matches pointwise nu", 30.0, c6_growth_slope},
      {"sobolev suite with q' = 7 sharpness probe", 600.0, c7_sobolev},
      {"isoperimetric nu-sharpness vs Q-exponent decay", 300.0, c8_isoperimetric},
      {"interpolation parameter identities (exact rational)", 1.0, c9_validator},
      {"log-sobolev / holder / poincare / representation / weak-type / moser-trudinger",
       900.0, c10_battery},
      {"byte-identical reports for identical config and seed", 60.0, c11_reproducibility},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check check;
    auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].fn(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > criteria[i].limit_seconds)
      check.failures.push_back("runtime " + std::to_string(secs) + "s over the " +
                               std::to_string(criteria[i].limit_seconds) + "s budget");
    bool ok = check.failures.empty();
    failed += ok ? 0 : 1;
    std::printf("[%s] criterion %zu: %s (%.1fs < %.0fs)\n", ok ? "PASS" : "FAIL", i + 1,
                criteria[i].name, secs, criteria[i].limit_seconds);
    for (const auto& f : check.failures) std::printf("       - %s\n", f.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed;
}
