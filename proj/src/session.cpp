#include "session.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "models.hpp"
#include "parser.hpp"

namespace hvf {

namespace {

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  double v;
  while (in >> v) out.push_back(v);
  return out;
}

std::vector<std::vector<double>> parse_points(const std::string& text) {
  std::vector<std::vector<double>> out;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ';')) {
    auto p = parse_point(part);
    if (!p.empty()) out.push_back(std::move(p));
  }
  return out;
}

Rational snap_rational(double v, std::int64_t den = 64) {
  return Rational(static_cast<std::int64_t>(std::llround(v * static_cast<double>(den))), den);
}

// Round down to a coarse dyadic rational: concentrating families multiply the
// base radii by s^(w*kappa), so the base denominator budgets how deep the
// int64 rational carrier can go.
Rational snap_down_dyadic(double v) {
  for (std::int64_t den : {16, 64, 256, 1024, 4096}) {
    std::int64_t num = static_cast<std::int64_t>(std::floor(v * static_cast<double>(den)));
    if (num > 0 && static_cast<double>(num) / den >= 0.6 * v) return Rational(num, den);
  }
  return snap_rational(v, 1 << 20);
}

std::string file_stem(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

}  // namespace

Workspace::Workspace(RunConfig cfg) : cfg_(std::move(cfg)) {
  std::string src = cfg_.get("model", "source");
  if (src.empty()) throw DomainError("config [model] source is required");
  if (const auto* m = gallery::find(src)) {
    sys_ = gallery::system_for(src);
    domain_ = gallery::domain_for(src);
    label_ = m->name;
  } else if (src.find(';') != std::string::npos) {
    sys_ = parse_system(src);
    label_ = "inline";
  } else {
    std::ifstream in(src);
    if (!in) throw DomainError("cannot open model source: " + src);
    std::stringstream buf;
    buf << in.rdbuf();
    sys_ = parse_system(buf.str());
    label_ = file_stem(src);
  }
  label_ = cfg_.get("model", "label", label_);

  auto box = parse_points(cfg_.get("domain", "box"));
  if (!box.empty()) {
    if (static_cast<int>(box.size()) != sys_.n)
      throw DomainError("domain box has the wrong number of axes");
    domain_.lo.clear();
    domain_.hi.clear();
    for (const auto& axis : box) {
      if (axis.size() != 2 || axis[0] >= axis[1])
        throw DomainError("each box axis needs 'lo hi' with lo < hi");
      domain_.lo.push_back(axis[0]);
      domain_.hi.push_back(axis[1]);
    }
    domain_.indicator = nullptr;
  } else if (domain_.lo.empty()) {
    domain_.lo.assign(sys_.n, -1.0);
    domain_.hi.assign(sys_.n, 1.0);
  }
  std::string ind = cfg_.get("domain", "indicator");
  if (!ind.empty()) domain_.indicator = parse_expression(ind, sys_.n);
  domain_.label = label_;
}

void Workspace::ensure_analysis() {
  if (analyzed_) return;
  SamplingPlan plan;
  plan.tol = cfg_.get_double("analyze", "tol", 1e-9);
  int default_grid = sys_.n <= 2 ? 33 : sys_.n == 3 ? 21 : 9;
  plan.grid = static_cast<int>(cfg_.get_long("analyze", "grid", default_grid));
  plan.suspect_points = parse_points(cfg_.get("analyze", "suspects"));
  int max_depth = static_cast<int>(cfg_.get_long("analyze", "max_depth", 6));
  std::size_t node_budget =
      static_cast<std::size_t>(cfg_.get_long("analyze", "node_budget", 5'000'000));

  if (sys_.s0_hint) {
    s0_ = *sys_.s0_hint;
    basis_ = std::make_unique<CommutatorBasis>(sys_, s0_, node_budget);
    horm_ = hormander_check(*basis_, domain_, plan);
  } else {
    for (int depth = 1; depth <= max_depth; ++depth) {
      s0_ = depth;
      basis_ = std::make_unique<CommutatorBasis>(sys_, depth, node_budget);
      horm_ = hormander_check(*basis_, domain_, plan);
      if (horm_.ok) break;
    }
  }
  if (horm_.ok) index_ = metivier_index(*basis_, domain_, plan);
  analyzed_ = true;
}

DistanceOracle& Workspace::ensure_oracle() {
  if (oracle_) return *oracle_;
  ensure_analysis();
  std::string load = cfg_.get("oracle", "load");
  if (!load.empty()) {
    oracle_ = std::make_unique<DistanceOracle>(DistanceOracle::load(sys_, domain_, load));
    return *oracle_;
  }
  OracleParams params;
  params.h = cfg_.get_double("oracle", "h", 1.0 / 32);
  params.directions = static_cast<int>(cfg_.get_long("oracle", "directions", 32));
  params.steps_per_edge = static_cast<int>(cfg_.get_long("oracle", "steps", 4));
  auto taus = cfg_.get_doubles("oracle", "tau_factors");
  if (!taus.empty()) params.tau_factors = taus;
  auto scales = cfg_.get_doubles("oracle", "axis_scales");
  if (!scales.empty()) params.axis_scales = scales;
  params.node_budget = static_cast<std::size_t>(cfg_.get_long("oracle", "node_budget", 700'000));
  params.max_sweeps = static_cast<int>(cfg_.get_long("oracle", "max_sweeps", 512));
  params.s_max = static_cast<int>(
      cfg_.get_long("oracle", "s_max", horm_.ok ? horm_.s_max : sys_.s0_hint.value_or(2)));
  oracle_ = std::make_unique<DistanceOracle>(sys_, domain_, params);
  std::string save = cfg_.get("oracle", "save");
  if (!save.empty()) oracle_->save(save);
  return *oracle_;
}

Rational Workspace::nu_tilde_rational() {
  ensure_analysis();
  if (!horm_.ok) throw NoSpanError("Hörmander check failed; no Métivier index available");
  return Rational(index_.nu_tilde);
}

QuadPlan Workspace::quad_plan() const {
  QuadPlan plan;
  plan.points = static_cast<int>(
      cfg_.get_long("quadrature", "points", sys_.n <= 2 ? 129 : sys_.n == 3 ? 49 : 17));
  plan.flag_drift = cfg_.get_double("quadrature", "flag_drift", 0.005);
  return plan;
}

nlohmann::json Workspace::wrap(const nlohmann::json& result) const {
  nlohmann::json j;
  j["version"] = kVersion;
  j["model"] = label_;
  j["config"] = config_echo(cfg_);
  j["result"] = result;
  return j;
}

Workspace::FamilyPlan Workspace::family_plan(const std::string& suite) {
  ensure_analysis();
  FamilyPlan plan;
  std::string section = "suite." + suite;
  auto center_cfg = cfg_.has(section, "center") ? cfg_.get_doubles(section, "center")
                                                : cfg_.get_doubles("family", "center");
  std::vector<double> center_d;
  if (!center_cfg.empty()) {
    center_d = center_cfg;
  } else if (horm_.ok && !index_.nu_samples.empty()) {
    // Most interior sample attaining nu_tilde: witnesses on the boundary of
    // Omega leave no room for a compactly supported family.
    double best_score = -1e300;
    for (const auto& [pt, nu] : index_.nu_samples) {
      if (nu != index_.nu_tilde) continue;
      double score = 1e300;
      for (int i = 0; i < sys_.n; ++i)
        score = std::min({score, pt[i] - domain_.lo[i], domain_.hi[i] - pt[i]});
      if (domain_.indicator) score = std::min(score, -evaluate(domain_.indicator, pt));
      if (score > best_score) {
        best_score = score;
        center_d = pt;
      }
    }
  }
  if (center_d.empty()) {
    for (int i = 0; i < sys_.n; ++i) center_d.push_back(0.5 * (domain_.lo[i] + domain_.hi[i]));
  }
  for (double v : center_d) plan.center.push_back(snap_rational(v));
  plan.center_d.clear();
  for (const auto& r : plan.center) plan.center_d.push_back(r.to_double());

  auto radii_cfg = cfg_.has(section, "radii") ? cfg_.get_doubles(section, "radii")
                                              : cfg_.get_doubles("family", "radii");
  if (!radii_cfg.empty()) {
    for (double v : radii_cfg) plan.radii.push_back(snap_rational(v, 1024));
  } else {
    for (int i = 0; i < sys_.n; ++i) {
      double room = std::min(plan.center_d[i] - domain_.lo[i], domain_.hi[i] - plan.center_d[i]);
      plan.radii.push_back(snap_rational(0.8 * room, 1024));
    }
  }
  // Shrink until the support extremes sit inside the closure of Omega.
  for (int iter = 0; iter < 16; ++iter) {
    bool ok = true;
    std::vector<double> p(plan.center_d);
    for (int i = 0; i < sys_.n && ok; ++i) {
      double ri = plan.radii[i].to_double();
      for (double s : {-1.0, 1.0}) {
        p[i] = plan.center_d[i] + s * ri;
        if (!domain_.in_closure(p)) ok = false;
      }
      p[i] = plan.center_d[i];
    }
    double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(sys_.n));
    for (int corner = 0; corner < (1 << sys_.n) && ok; ++corner) {
      for (int i = 0; i < sys_.n; ++i)
        p[i] = plan.center_d[i] +
               ((corner >> i) & 1 ? 1.0 : -1.0) * plan.radii[i].to_double() * inv_sqrt_n;
      if (!domain_.in_closure(p)) ok = false;
    }
    if (ok) break;
    for (auto& r : plan.radii) r = r * Rational(3, 4);
    if (iter == 15) throw DomainError("cannot fit a test family inside the domain");
  }
  plan.weights = horm_.ok ? axis_weights(*basis_, plan.center_d) : std::vector<int>(sys_.n, 1);
  return plan;
}

RunOutcome Workspace::analyze() {
  ensure_analysis();
  nlohmann::json r;
  r["system"] = to_string(sys_);
  r["n"] = sys_.n;
  r["m"] = sys_.m;
  r["s0"] = s0_;
  r["hormander"]["ok"] = horm_.ok;
  r["hormander"]["s_max"] = horm_.s_max;
  if (!horm_.ok) r["hormander"]["witness"] = horm_.witness;

  RunOutcome out;
  out.verdict = horm_.ok ? "PASS" : "FAIL";
  if (horm_.ok) {
    r["index"] = to_json(index_);
    Rational nu(index_.nu_tilde);
    int k = static_cast<int>(cfg_.get_long("analyze", "k", 1));
    Rational p = cfg_.get_rational("analyze", "p", Rational(2));
    auto requested = critical_exponents(nu, k, p);
    r["embedding"]["requested"]["k"] = k;
    r["embedding"]["requested"]["p"] = p.str();
    r["embedding"]["requested"]["description"] = requested.describe();
    for (const Rational& pt :
         {Rational(1), Rational(3, 2), Rational(2), Rational(3), Rational(4), Rational(6)}) {
      auto info = critical_exponents(nu, 1, pt);
      nlohmann::json row;
      row["p"] = pt.str();
      row["k"] = 1;
      row["description"] = info.describe();
      r["embedding"]["table"].push_back(row);
    }
    auto probes = parse_points(cfg_.get("analyze", "probe_points"));
    for (const auto& pt : probes) {
      nlohmann::json row;
      row["point"] = pt;
      row["nu"] = pointwise_nu(*basis_, pt, cfg_.get_double("analyze", "tol", 1e-9));
      r["probes"].push_back(row);
    }
    std::vector<std::map<std::string, double>> rows;
    for (const auto& [pt, nu_x] : index_.nu_samples) {
      std::map<std::string, double> row;
      for (std::size_t i = 0; i < pt.size(); ++i) row["x" + std::to_string(i + 1)] = pt[i];
      row["nu"] = nu_x;
      rows.push_back(std::move(row));
    }
    out.csv = rows_csv(rows);
  }
  out.report = wrap(r);
  return out;
}

RunOutcome Workspace::distance_query(const std::vector<double>& x, const std::vector<double>& y,
                                     std::string* geodesic_csv) {
  auto& oracle = ensure_oracle();
  auto d = oracle.distance(x, y);
  nlohmann::json r;
  r["x"] = x;
  r["y"] = y;
  r["distance"] = d.value;
  r["error_bound"] = d.error_bound;
  if (geodesic_csv) {
    auto path = oracle.approximate_geodesic(x, y);
    std::vector<std::map<std::string, double>> rows;
    for (const auto& pt : path) {
      std::map<std::string, double> row;
      for (std::size_t i = 0; i < pt.size(); ++i) row["x" + std::to_string(i + 1)] = pt[i];
      rows.push_back(std::move(row));
    }
    *geodesic_csv = rows_csv(rows);
    r["geodesic_points"] = path.size();
  }
  RunOutcome out;
  out.report = wrap(r);
  out.verdict = "PASS";
  return out;
}

RunOutcome Workspace::ball_volume_query(const std::vector<double>& center, double r) {
  auto& oracle = ensure_oracle();
  long samples = cfg_.get_long("run", "samples", 200'000);
  std::uint64_t seed = static_cast<std::uint64_t>(cfg_.get_long("run", "seed", 42));
  auto est = ball_volume(oracle, center, r, samples, seed);
  RunOutcome out;
  out.report = wrap(to_json(est));
  out.verdict = "PASS";
  return out;
}

RunOutcome Workspace::verify(const std::string& suite) {
  ensure_analysis();
  const std::string section = "suite." + suite;
  QuadPlan plan = quad_plan();
  if (cfg_.has(section, "points")) {
    plan.points = static_cast<int>(cfg_.get_long(section, "points", plan.points));
  }
  std::uint64_t seed = static_cast<std::uint64_t>(cfg_.get_long("run", "seed", 42));
  long samples = cfg_.get_long("run", "samples", 200'000);

  auto make_family = [&](int radial, int aniso, const FamilyPlan& fp) {
    auto fam = radial_family(fp.center, fp.radii, radial);
    if (aniso > 0) {
      auto extra = aniso_family(fp.center, fp.radii, fp.weights, 1, aniso);
      fam.insert(fam.end(), extra.begin(), extra.end());
    }
    return fam;
  };

  RunOutcome out;
  if (suite == "sobolev") {
    FamilyPlan fp = family_plan("sobolev");
    SobolevOptions opt;
    opt.k = static_cast<int>(cfg_.get_long(section, "k", 1));
    opt.p = cfg_.get_rational(section, "p", Rational(2));
    opt.q_probe = cfg_.get_double(section, "q_probe", 0.0);
    if (cfg_.has("run", "q_override"))
      opt.q_probe = cfg_.get_double("run", "q_override", 0.0);
    opt.plan = plan;
    int fam_n = static_cast<int>(cfg_.get_long(section, "family", 24));
    // Concentration exponent for the sharpness probe: the supercritical ratio
    // grows like 16^{kappa * nu (1/q - 1/q')} over the s = 1..1/16 sweep, so
    // kappa is sized from the exponent gap to make the growth decisive.
    int kappa = static_cast<int>(cfg_.get_long(section, "kappa", 0));
    if (kappa <= 0) {
      auto info = critical_exponents(nu_tilde_rational(), opt.k, opt.p);
      double q_main = info.regime == Regime::Subcritical ? info.q.to_double()
                                                         : 4.0 * opt.p.to_double();
      double qp = opt.q_probe > 0.0 ? opt.q_probe : 1.1 * q_main;
      double gap = nu_tilde_rational().to_double() * (1.0 / q_main - 1.0 / qp);
      kappa = gap > 1e-9 ? static_cast<int>(std::ceil(1.3 / (4.0 * gap))) : 4;
      kappa = std::clamp(kappa, 1, 16);
    }
    // Probe radii on a coarse dyadic grid so s^(w*kappa) stays inside int64.
    std::vector<Rational> probe_radii;
    for (const auto& r : fp.radii) probe_radii.push_back(snap_down_dyadic(r.to_double()));
    int w_max = 1;
    for (int w : fp.weights) w_max = std::max(w_max, w);
    int kappa_budget = std::max(1, 52 / (4 * w_max));
    kappa = std::min(kappa, kappa_budget);
    auto family = make_family(fam_n - fam_n / 2, fam_n / 2, fp);
    auto probe = aniso_family(fp.center, probe_radii, fp.weights, kappa, 5);
    auto rep = sobolev_suite(sys_, nu_tilde_rational(), opt, family, probe);
    out.report = wrap(to_json(rep));
    out.csv = rows_csv(rep.rows);
    out.verdict = rep.verdict;
    return out;
  }
  if (suite == "nash" || suite == "moser" || suite == "gn") {
    FamilyPlan fp = family_plan(suite);
    GNParams params;
    if (suite == "nash") {
      params = nash_params(nu_tilde_rational());
    } else if (suite == "moser") {
      params = moser_params(nu_tilde_rational());
    } else {
      Rational p = cfg_.get_rational(section, "p", Rational(2));
      int k = static_cast<int>(cfg_.get_long(section, "k", 1));
      Rational s1 = cfg_.get_rational(section, "s1", Rational(1));
      Rational theta = cfg_.get_rational(section, "theta", Rational(1, 2));
      params = gn_theta_params(nu_tilde_rational(), p, k, s1, theta);
    }
    auto rep = gn_suite(sys_, params, suite, make_family(8, 4, fp), plan);
    out.report = wrap(to_json(rep));
    out.csv = rows_csv(rep.rows);
    out.verdict = rep.verdict;
    return out;
  }
  if (suite == "isoperimetric") {
    FamilyPlan fp = family_plan(suite);
    Rational nu = nu_tilde_rational();
    Rational expo = (nu - Rational(1)) / nu;
    if (cfg_.has("run", "exponent_override"))
      expo = cfg_.get_rational("run", "exponent_override", expo);
    else if (cfg_.has(section, "exponent"))
      expo = cfg_.get_rational(section, "exponent", expo);
    double r0 = cfg_.get_double(section, "radius", 0.0);
    if (r0 <= 0.0) {
      r0 = fp.radii.front().to_double();
      for (const auto& r : fp.radii) r0 = std::min(r0, r.to_double());
      r0 *= 0.5;
    }
    int levels = static_cast<int>(cfg_.get_long(section, "levels", 5));
    std::vector<Ellipsoid> shapes;
    double s = 1.0;
    for (int i = 0; i < levels; ++i, s *= 0.5)
      shapes.push_back({fp.center_d, std::vector<double>(sys_.n, r0 * s)});
    auto rep = isoperimetric_suite(sys_, expo, shapes,
                                   static_cast<int>(cfg_.get_long(section, "boundary_points", 1024)));
    out.report = wrap(to_json(rep));
    out.csv = rows_csv(rep.rows);
    out.verdict = rep.verdict;
    return out;
  }
  if (suite == "log-sobolev") {
    FamilyPlan fp = family_plan(suite);
    int k = static_cast<int>(cfg_.get_long(section, "k", 1));
    Rational p = cfg_.get_rational(section, "p", Rational(2));
    auto rep = log_sobolev_suite(sys_, nu_tilde_rational(), k, p, make_family(5, 3, fp), plan);
    out.report = wrap(to_json(rep));
    out.csv = rows_csv(rep.rows);
    out.verdict = rep.verdict;
    return out;
  }
  if (suite == "holder") {
    FamilyPlan fp = family_plan(suite);
    int k = static_cast<int>(cfg_.get_long(section, "k", 1));
    Rational p = cfg_.get_rational(section, "p", Rational(6));
    int pairs = static_cast<int>(cfg_.get_long(section, "pairs", 500));
    auto rep = holder_suite(sys_, ensure_oracle(), nu_tilde_rational(), k, p,
                            make_family(5, 3, fp), plan, pairs, seed);
    out.report = wrap(to_json(rep));
    out.csv = rows_csv(rep.rows);
    out.verdict = rep.verdict;
    return out;
  }
  if (suite == "moser-trudinger") {
    FamilyPlan fp = family_plan(suite);
    auto sigmas = cfg_.get_doubles(section, "sigmas");
    if (sigmas.empty()) sigmas = {0.05, 0.1, 0.2, 0.4, 0.8, 1.6};
    double multiple = cfg_.get_double(section, "omega_multiple", 10.0);
    auto rep = moser_trudinger_suite(sys_, domain_, nu_tilde_rational(), sigmas,
                                     make_family(5, 3, fp), plan, multiple);
    out.report = wrap(to_json(rep));
    out.csv = rows_csv(rep.rows);
    out.verdict = rep.verdict;
    return out;
  }
  if (suite == "poincare") {
    FamilyPlan fp = family_plan(suite);
    Rational p = cfg_.get_rational(section, "p", Rational(2));
    int levels = static_cast<int>(cfg_.get_long(section, "plateau_levels", 4));
    auto rep = poincare_check(sys_, p, plateau_family(fp.center, fp.radii, levels), plan);
    out.report = wrap(to_json(rep));
    out.csv = rows_csv(rep.rows);
    out.verdict = rep.verdict;
    return out;
  }
  if (suite == "representation") {
    FamilyPlan fp = family_plan(suite);
    int points = static_cast<int>(cfg_.get_long(section, "sample_points", 50));
    auto rep = representation_check(sys_, ensure_oracle(), *basis_, make_family(3, 2, fp), plan,
                                    points, seed);
    out.report = wrap(to_json(rep));
    out.csv = rows_csv(rep.rows);
    out.verdict = rep.verdict;
    return out;
  }
  if (suite == "rayleigh") {
    FamilyPlan fp = family_plan(suite);
    auto rep = rayleigh_bound(sys_, nu_tilde_rational(), make_family(5, 0, fp), plan);
    out.report = wrap(to_json(rep));
    out.csv = rows_csv(rep.rows);
    out.verdict = rep.verdict;
    return out;
  }
  if (suite == "ballbox") {
    FamilyPlan fp = family_plan(suite);
    auto centers = parse_points(cfg_.get(section, "centers"));
    if (centers.empty()) centers = {fp.center_d};
    auto radii = cfg_.get_doubles(section, "radii");
    if (radii.empty()) radii = {0.05, 0.1, 0.2};
    double bound = cfg_.get_double(section, "bound", 50.0);
    auto rep = ballbox_check(*basis_, ensure_oracle(), centers, radii, samples, seed, bound);
    out.report = wrap(to_json(rep));
    out.verdict = rep.pass ? "PASS" : "FAIL";
    return out;
  }
  if (suite == "doubling") {
    FamilyPlan fp = family_plan(suite);
    auto centers = parse_points(cfg_.get(section, "centers"));
    if (centers.empty()) centers = {fp.center_d};
    auto radii = cfg_.get_doubles(section, "radii");
    if (radii.empty()) radii = {0.05, 0.1};
    bool refine = cfg_.get_long(section, "refine", 1) != 0;
    std::unique_ptr<DistanceOracle> finer;
    std::string note;
    if (refine) {
      try {
        OracleParams params;
        params.h = cfg_.get_double("oracle", "h", 1.0 / 32) / 2.0;
        params.directions = static_cast<int>(cfg_.get_long("oracle", "directions", 32));
        auto scales = cfg_.get_doubles("oracle", "axis_scales");
        if (!scales.empty()) params.axis_scales = scales;
        params.node_budget =
            static_cast<std::size_t>(cfg_.get_long("oracle", "node_budget", 700'000));
        params.s_max = ensure_oracle().s_max();
        finer = std::make_unique<DistanceOracle>(sys_, domain_, params);
      } catch (const BudgetError& e) {
        note = std::string("refinement skipped: ") + e.what();
      }
    }
    auto rep = doubling_check(ensure_oracle(), centers, radii, samples, seed, finer.get());
    auto j = to_json(rep);
    if (!note.empty()) {
      j["notes"] = note;
      j["verdict"] = rep.pass ? "FLAG" : "FAIL";
    }
    out.report = wrap(j);
    out.verdict = j["verdict"].get<std::string>();
    return out;
  }
  if (suite == "kernel-weight") {
    FamilyPlan fp = family_plan(suite);
    double eta = cfg_.get_double(section, "eta", 1.0);
    double xi = cfg_.get_double(section, "xi", 1.0);
    double mu = xi + (eta - 1.0) * nu_tilde_rational().to_double();
    auto radii = cfg_.get_doubles(section, "radii");
    if (radii.empty()) {
      double ext = domain_.hi[0] - domain_.lo[0];
      for (int i = 0; i < sys_.n; ++i) ext = std::min(ext, domain_.hi[i] - domain_.lo[i]);
      double h = ensure_oracle().h_step();
      for (double f : {8.0, 16.0, 32.0}) radii.push_back(std::min(f * h, 0.45 * ext));
    }
    double bound = cfg_.get_double(section, "bound", 10.0);
    nlohmann::json r;
    r["suite"] = "kernel-weight";
    r["eta"] = eta;
    r["xi"] = xi;
    r["mu"] = mu;
    double lo = 1e300, hi = 0.0;
    bool under = false;
    for (double rr : radii) {
      auto ki = kernel_weight_integral(ensure_oracle(), *basis_, fp.center_d, rr, mu, eta, xi);
      double scaled = ki.value / std::pow(rr, xi);
      nlohmann::json row;
      row["r"] = rr;
      row["value"] = ki.value;
      row["value_over_r_xi"] = scaled;
      row["inner_fraction"] = ki.value > 0 ? ki.inner_value / ki.value : 0.0;
      r["rows"].push_back(row);
      lo = std::min(lo, scaled);
      hi = std::max(hi, scaled);
      under = under || ki.under_resolved;
    }
    r["spread"] = lo > 0 ? hi / lo : 0.0;
    r["bound"] = bound;
    bool pass = lo > 0 && hi / lo <= bound;
    r["verdict"] = !pass ? "FAIL" : under ? "FLAG" : "PASS";
    out.report = wrap(r);
    out.verdict = r["verdict"].get<std::string>();
    return out;
  }
  if (suite == "weak-type") {
    FamilyPlan fp = family_plan(suite);
    std::vector<int> tuple;
    {
      std::istringstream in(cfg_.get(section, "tuple"));
      int v;
      while (in >> v) tuple.push_back(v);
    }
    if (tuple.empty()) {
      tuple = cfg_.get_long(section, "use_q_witness", 0) != 0 ? index_.q_witness_tuple
                                                              : index_.nu_tilde_witness_tuple;
    }
    ScalarField f;
    auto fc = parse_point(cfg_.get(section, "f_center"));
    if (fc.empty()) fc = fp.center_d;
    double width = cfg_.get_double(section, "f_width", 0.0);
    if (width <= 0.0) {
      width = domain_.hi[0] - domain_.lo[0];
      for (int i = 0; i < sys_.n; ++i) width = std::min(width, domain_.hi[i] - domain_.lo[i]);
      width /= 16.0;
    }
    for (int i = 0; i < sys_.n; ++i) {
      f.lo.push_back(fc[i] - width / 2);
      f.hi.push_back(fc[i] + width / 2);
    }
    f.eval = [](std::span<const double>) { return 1.0; };
    auto thresholds = cfg_.get_doubles(section, "thresholds");
    auto rep = weak_lp_kernel_check(*basis_, ensure_oracle(), tuple, f, thresholds);
    out.report = wrap(to_json(rep));
    out.verdict = rep.pass ? "PASS" : "FAIL";
    return out;
  }
  throw DomainError("unknown suite: " + suite);
}

std::string report_summary(const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::ostringstream out;
  out << "report summary for " << out_dir << "\n";
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(out_dir))
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    std::ifstream in(path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const std::exception&) {
      out << path.filename().string() << ": unreadable\n";
      continue;
    }
    std::string verdict = "-", suite = "-", model = j.value("model", "-");
    double constant = 0.0;
    if (j.contains("result")) {
      const auto& r = j["result"];
      suite = r.value("suite", suite);
      verdict = r.value("verdict", verdict);
      constant = r.value("constant", 0.0);
      if (r.contains("hormander"))
        verdict = r["hormander"]["ok"].get<bool>() ? "PASS" : "FAIL";
    }
    out << path.filename().string() << "  model=" << model << "  suite=" << suite
        << "  verdict=" << verdict;
    if (constant != 0.0) out << "  constant=" << constant;
    out << "\n";
  }
  return out.str();
}

}  // namespace hvf
