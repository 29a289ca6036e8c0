#include "casimir/app/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <thread>

namespace casimir::app {

bool SweepRow::flagged() const {
  if (!error.empty() || !sample) return true;
  if (!sample->flags.ok()) return true;
  return entropy && !entropy->flags.ok();
}

std::string SweepRow::flags() const {
  if (!error.empty() || !sample) return "error";
  SampleFlags f = sample->flags;
  if (entropy) {
    f.converged = f.converged && entropy->flags.converged;
    f.degraded = f.degraded || entropy->flags.degraded;
  }
  return f.describe();
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<SweepRow> run_sweep(const SweepGrid& grid, const RunConfig& cfg) {
  grid.validate();
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (double l0 : grid.lambda0_values) {
    for (double t : grid.t_values) {
      for (Method m : grid.methods) {
        SweepRow r;
        r.index = rows.size();
        r.lambda0 = l0;
        r.t = t;
        r.method = m;
        rows.push_back(r);
      }
    }
  }

  const int workers = resolve_workers(cfg.workers);
  const long n = static_cast<long>(rows.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (long i = 0; i < n; ++i) {
    SweepRow& r = rows[i];
    try {
      const ShellParams p(r.lambda0, r.t);
      r.sample = freeenergy::evaluate(p, r.method, cfg.eval);
      if (cfg.entropy) r.entropy = freeenergy::entropy(p, r.method, cfg.stencil_h, cfg.eval);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  }
  return rows;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "lambda0,t,alpha,xi,method,aF,aS,err,l_max,flags\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const SweepRow& r : rows) {
    const double alpha = 2.0 * std::numbers::pi * r.t;
    const double xi = alpha * std::sqrt(3.0 / (2.0 * r.lambda0));
    out << format_number(r.lambda0) << ',' << format_number(r.t) << ',' << format_number(alpha) << ','
        << format_number(xi) << ',' << to_string(r.method) << ',' << format_number(r.sample ? r.sample->aF : nan)
        << ',' << (r.entropy ? format_number(r.entropy->aS) : std::string()) << ','
        << format_number(r.sample ? r.sample->error_estimate : nan) << ',' << (r.sample ? r.sample->l_max : 0)
        << ',' << r.flags() << '\n';
  }
}

nlohmann::json config_json(const RunConfig& cfg) {
  const auto& q = cfg.eval.exact.quad;
  const auto& m = cfg.eval.exact.modes;
  const char* precision = cfg.eval.exact.precision == PrecisionPolicy::extended   ? "extended"
                          : cfg.eval.exact.precision == PrecisionPolicy::standard ? "standard"
                                                                                  : "automatic";
  nlohmann::json j = {
      {"rel_tol", q.rel_tol},
      {"abs_tol", q.abs_tol},
      {"tail_cut_weight", q.tail_cut_weight},
      {"pv_epsilon0", q.pv_epsilon0},
      {"pv_max_halvings", q.pv_max_halvings},
      {"max_subdivisions", q.max_subdivisions},
      {"mode_rel_tol", m.rel_tol},
      {"mode_floor_min", m.l_floor_min},
      {"mode_hard_cap", m.hard_cap},
      {"feature_floor", cfg.eval.exact.feature_floor},
      {"precision", precision},
      {"lowT_form", cfg.eval.lowT_form == LowTForm::arctan ? "arctan" : "linearized"},
      {"entropy", cfg.entropy},
  };
  if (cfg.stencil_h) j["stencil_h"] = *cfg.stencil_h;
  return j;
}

nlohmann::json grid_json(const SweepGrid& grid) {
  nlohmann::json methods = nlohmann::json::array();
  for (Method m : grid.methods) methods.push_back(std::string(to_string(m)));
  return {{"lambda0", grid.lambda0_values}, {"t", grid.t_values}, {"methods", methods}};
}

nlohmann::json rows_json(const std::vector<SweepRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const SweepRow& r : rows) {
    nlohmann::json j = {{"index", r.index},
                        {"lambda0", r.lambda0},
                        {"t", r.t},
                        {"method", std::string(to_string(r.method))},
                        {"flags", r.flags()}};
    if (r.sample) {
      j["aF"] = r.sample->aF;
      j["err"] = r.sample->error_estimate;
      j["l_max"] = r.sample->l_max;
    }
    if (r.entropy) {
      j["aS"] = r.entropy->aS;
      j["aS_err"] = r.entropy->error_estimate;
      j["stencil_h"] = r.entropy->stencil_h;
    }
    if (!r.error.empty()) j["error"] = r.error;
    out.push_back(std::move(j));
  }
  return out;
}

nlohmann::json manifest_json(const std::string& command, const RunConfig& cfg, const nlohmann::json& grid,
                             const nlohmann::json& outputs, double wall_seconds) {
  return {{"schema_version", kManifestSchemaVersion},
          {"tool", "casimir_shell"},
          {"version", CASIMIR_VERSION},
          {"command", command},
          {"config", config_json(cfg)},
          {"grid", grid},
          {"workers", resolve_workers(cfg.workers)},
          {"wall_seconds", wall_seconds},
          {"outputs", outputs}};
}

}  // namespace casimir::app
