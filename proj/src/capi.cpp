#include "hvf/hvf.h"

#include <cstring>
#include <string>

#include "exponents.hpp"
#include "parser.hpp"
#include "session.hpp"

using namespace hvf;

struct hvf_workspace {
  Workspace ws;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

int fail(int code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <class Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    return fail(HVF_ERR_PARSE, e.what());
  } catch (const RegimeError& e) {
    return fail(HVF_ERR_REGIME, e.what());
  } catch (const NoSpanError& e) {
    return fail(HVF_ERR_NOSPAN, e.what());
  } catch (const BudgetError& e) {
    return fail(HVF_ERR_BUDGET, e.what());
  } catch (const ResolutionError& e) {
    return fail(HVF_ERR_RESOLUTION, e.what());
  } catch (const DomainError& e) {
    return fail(HVF_ERR_DOMAIN, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(HVF_ERR_INVALID, e.what());
  } catch (const std::exception& e) {
    return fail(HVF_ERR_INTERNAL, e.what());
  }
}

int verdict_code(const std::string& verdict) {
  if (verdict == "PASS") return 0;
  if (verdict == "FLAG") return 3;
  return 2;
}

}  // namespace

extern "C" {

const char* hvf_version(void) { return kVersion; }

const char* hvf_last_error(void) { return g_last_error.c_str(); }

void hvf_free(char* s) { std::free(s); }

int hvf_open(const char* config_text, hvf_workspace** out) {
  if (!config_text || !out) return fail(HVF_ERR_INVALID, "null argument");
  return guarded([&] {
    auto cfg = RunConfig::from_string(config_text);
    *out = new hvf_workspace{Workspace(std::move(cfg))};
    return HVF_OK;
  });
}

int hvf_open_file(const char* config_path, hvf_workspace** out) {
  if (!config_path || !out) return fail(HVF_ERR_INVALID, "null argument");
  return guarded([&] {
    auto cfg = RunConfig::from_file(config_path);
    *out = new hvf_workspace{Workspace(std::move(cfg))};
    return HVF_OK;
  });
}

void hvf_close(hvf_workspace* w) { delete w; }

int hvf_model_info(hvf_workspace* w, char** json_out) {
  if (!w || !json_out) return fail(HVF_ERR_INVALID, "null argument");
  return guarded([&] {
    nlohmann::json j;
    j["label"] = w->ws.label();
    j["n"] = w->ws.system().n;
    j["m"] = w->ws.system().m;
    j["system"] = to_string(w->ws.system());
    j["box_lo"] = w->ws.domain().lo;
    j["box_hi"] = w->ws.domain().hi;
    *json_out = dup_string(j.dump(2));
    return HVF_OK;
  });
}

int hvf_analyze(hvf_workspace* w, char** json_out, char** csv_out) {
  if (!w || !json_out) return fail(HVF_ERR_INVALID, "null argument");
  return guarded([&] {
    auto outcome = w->ws.analyze();
    *json_out = dup_string(outcome.report.dump(2));
    if (csv_out) *csv_out = dup_string(outcome.csv);
    return verdict_code(outcome.verdict) == 0 ? HVF_OK : HVF_ERR_NOSPAN;
  });
}

int hvf_distance(hvf_workspace* w, const double* x, const double* y, int n, double* dist,
                 double* error_bound) {
  if (!w || !x || !y || !dist) return fail(HVF_ERR_INVALID, "null argument");
  return guarded([&] {
    if (n != w->ws.system().n) return fail(HVF_ERR_INVALID, "wrong point dimension");
    auto d = w->ws.ensure_oracle().distance(std::span<const double>(x, n),
                                            std::span<const double>(y, n));
    *dist = d.value;
    if (error_bound) *error_bound = d.error_bound;
    return HVF_OK;
  });
}

int hvf_distance_report(hvf_workspace* w, const double* x, const double* y, int n,
                        int want_geodesic, char** json_out, char** geodesic_csv_out) {
  if (!w || !x || !y || !json_out) return fail(HVF_ERR_INVALID, "null argument");
  return guarded([&] {
    if (n != w->ws.system().n) return fail(HVF_ERR_INVALID, "wrong point dimension");
    std::string geocsv;
    auto outcome = w->ws.distance_query(std::vector<double>(x, x + n),
                                        std::vector<double>(y, y + n),
                                        want_geodesic ? &geocsv : nullptr);
    *json_out = dup_string(outcome.report.dump(2));
    if (geodesic_csv_out) *geodesic_csv_out = dup_string(geocsv);
    return HVF_OK;
  });
}

int hvf_ball_volume(hvf_workspace* w, const double* center, int n, double r, char** json_out) {
  if (!w || !center || !json_out) return fail(HVF_ERR_INVALID, "null argument");
  return guarded([&] {
    if (n != w->ws.system().n) return fail(HVF_ERR_INVALID, "wrong point dimension");
    auto outcome = w->ws.ball_volume_query(std::vector<double>(center, center + n), r);
    *json_out = dup_string(outcome.report.dump(2));
    return HVF_OK;
  });
}

int hvf_verify(hvf_workspace* w, const char* suite, char** json_out, char** csv_out,
               int* verdict_out) {
  if (!w || !suite || !json_out) return fail(HVF_ERR_INVALID, "null argument");
  return guarded([&] {
    auto outcome = w->ws.verify(suite);
    *json_out = dup_string(outcome.report.dump(2));
    if (csv_out) *csv_out = dup_string(outcome.csv);
    if (verdict_out) *verdict_out = verdict_code(outcome.verdict);
    return HVF_OK;
  });
}

int hvf_critical_exponents(const char* nu_tilde, int k, const char* p, char** json_out) {
  if (!nu_tilde || !p || !json_out) return fail(HVF_ERR_INVALID, "null argument");
  return guarded([&] {
    auto info = critical_exponents(Rational::parse(nu_tilde), k, Rational::parse(p));
    nlohmann::json j;
    j["nu_tilde"] = nu_tilde;
    j["k"] = k;
    j["p"] = p;
    j["description"] = info.describe();
    switch (info.regime) {
      case Regime::Subcritical:
        j["regime"] = "subcritical";
        j["q"] = info.q.str();
        break;
      case Regime::Critical:
        j["regime"] = "critical";
        break;
      case Regime::Supercritical:
        j["regime"] = "supercritical";
        j["holder_order"] = info.holder_order;
        if (info.alpha_free)
          j["alpha"] = "any value in (0,1)";
        else
          j["alpha"] = info.alpha.str();
        break;
    }
    *json_out = dup_string(j.dump(2));
    return HVF_OK;
  });
}

int hvf_oracle_save(hvf_workspace* w, const char* path) {
  if (!w || !path) return fail(HVF_ERR_INVALID, "null argument");
  return guarded([&] {
    w->ws.ensure_oracle().save(path);
    return HVF_OK;
  });
}

int hvf_report_summary(const char* out_dir, char** text_out) {
  if (!out_dir || !text_out) return fail(HVF_ERR_INVALID, "null argument");
  return guarded([&] {
    *text_out = dup_string(report_summary(out_dir));
    return HVF_OK;
  });
}

}  // extern "C"
