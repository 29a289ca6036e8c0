#include "casimir/app/commands.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "casimir/app/figures.hpp"
#include "casimir/app/sweep.hpp"
#include "casimir/specfun.hpp"

namespace casimir::app {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct CommonOptions {
  std::optional<double> rel_tol;
  std::optional<double> abs_tol;
  std::optional<int> workers;
  std::string config_file;
  std::string manifest;
  bool entropy = false;
  std::optional<double> stencil_h;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--rel-tol", o.rel_tol, "relative quadrature tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--abs-tol", o.abs_tol, "absolute quadrature tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--workers", o.workers, "worker threads (default: available parallelism)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--manifest", o.manifest, "write a JSON run manifest here");
  cmd->add_flag("--entropy", o.entropy, "also compute aS = -d(aF)/dt");
  cmd->add_option("--stencil-h", o.stencil_h, "finite-difference step for the entropy")->check(CLI::PositiveNumber);
}

// File values first, flags on top.
RunConfig build_config(const CommonOptions& o, const KeyValues& file_values, KeyValues* leftover) {
  RunConfig cfg;
  KeyValues rest = apply_config(file_values, cfg);
  if (o.rel_tol) cfg.eval.exact.quad.rel_tol = *o.rel_tol;
  if (o.abs_tol) cfg.eval.exact.quad.abs_tol = *o.abs_tol;
  if (o.workers) cfg.workers = *o.workers;
  if (o.entropy) cfg.entropy = true;
  if (o.stencil_h) cfg.stencil_h = o.stencil_h;
  cfg.eval.exact.precision = precision_policy_from_env(cfg.eval.exact.precision);
  if (leftover) *leftover = std::move(rest);
  return cfg;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

// --- eval -------------------------------------------------------------------

struct EvalOptions {
  CommonOptions common;
  double lambda0 = 0.0;
  double t = 0.0;
  std::string method = "exact";
  std::string out;
};

int cmd_eval(const EvalOptions& o, std::ostream& out) {
  const auto start = Clock::now();
  const auto method = parse_method(o.method);
  if (!method) throw ConfigError("unknown method '" + o.method + "'");
  const KeyValues file = o.common.config_file.empty() ? KeyValues{} : load_keyvalue(o.common.config_file);
  KeyValues leftover;
  const RunConfig cfg = build_config(o.common, file, &leftover);
  if (!leftover.empty()) throw ConfigError("unknown key '" + leftover.begin()->first + "'");

  SweepGrid grid{{o.lambda0}, {o.t}, {*method}};
  grid.validate();
  const std::vector<SweepRow> rows = run_sweep(grid, cfg);
  const SweepRow& r = rows.front();
  if (!r.error.empty()) throw std::runtime_error(r.error);

  const ShellParams p(o.lambda0, o.t);
  out << "method=" << to_string(*method) << " lambda0=" << format_number(o.lambda0) << " t=" << format_number(o.t)
      << " alpha=" << format_number(p.alpha()) << " xi=" << format_number(p.xi()) << '\n';
  out << "aF=" << format_number(r.sample->aF) << " err=" << format_number(r.sample->error_estimate)
      << " l_max=" << r.sample->l_max << " flags=" << r.sample->flags.describe() << '\n';
  if (r.entropy) {
    out << "aS=" << format_number(r.entropy->aS) << " err=" << format_number(r.entropy->error_estimate)
        << " h=" << format_number(r.entropy->stencil_h) << " flags=" << r.entropy->flags.describe() << '\n';
  }

  if (!o.out.empty()) {
    std::ofstream csv(o.out);
    if (!csv) throw ConfigError("cannot write " + o.out);
    write_sweep_csv(csv, rows);
  }
  if (!o.common.manifest.empty()) {
    // Repeated evals against the same manifest accumulate their outputs.
    nlohmann::json outputs = rows_json(rows);
    const fs::path path = o.common.manifest;
    if (fs::exists(path)) {
      std::ifstream in(path);
      const nlohmann::json old = nlohmann::json::parse(in, nullptr, false);
      if (!old.is_discarded() && old.value("command", "") == "eval" && old.contains("outputs")) {
        nlohmann::json merged = old["outputs"];
        for (auto& row : outputs) merged.push_back(row);
        outputs = merged;
      }
    }
    write_json(path, manifest_json("eval", cfg, grid_json(grid), outputs, seconds_since(start)));
  }
  return r.flagged() ? kExitFlagged : kExitOk;
}

// --- sweep ------------------------------------------------------------------

struct SweepOptions {
  CommonOptions common;
  std::string grid_file;
  std::string lambda0;
  std::string t;
  std::string methods;
  std::string out;
};

int cmd_sweep(const SweepOptions& o, std::ostream& out) {
  const auto start = Clock::now();
  KeyValues file;
  if (!o.grid_file.empty()) file = load_keyvalue(o.grid_file);
  if (!o.common.config_file.empty()) {
    for (auto& [k, v] : load_keyvalue(o.common.config_file)) file.insert_or_assign(k, v);
  }
  if (!o.lambda0.empty()) file["lambda0"] = o.lambda0;
  if (!o.t.empty()) file["t"] = o.t;
  if (!o.methods.empty()) {
    file.erase("method");
    file["methods"] = o.methods;
  }

  KeyValues grid_keys;
  const RunConfig cfg = build_config(o.common, file, &grid_keys);
  const SweepGrid grid = grid_from_keyvalues(grid_keys);
  grid.validate();
  for (const auto& [key, value] : grid_keys) {
    if (key != "lambda0" && key != "t" && key != "methods" && key != "method") {
      throw ConfigError("unknown key '" + key + "'");
    }
  }

  const std::vector<SweepRow> rows = run_sweep(grid, cfg);
  if (o.out.empty() || o.out == "-") {
    write_sweep_csv(out, rows);
  } else {
    const fs::path path = o.out;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream csv(path);
    if (!csv) throw ConfigError("cannot write " + o.out);
    write_sweep_csv(csv, rows);
  }
  if (!o.common.manifest.empty()) {
    write_json(o.common.manifest, manifest_json("sweep", cfg, grid_json(grid), rows_json(rows), seconds_since(start)));
  }
  for (const SweepRow& r : rows) {
    if (r.flagged()) return kExitFlagged;
  }
  return kExitOk;
}

// --- figure -----------------------------------------------------------------

struct FigureOptions {
  CommonOptions common;
  int id = 0;
  std::string grid_file;
  std::string out = ".";
};

int cmd_figure(const FigureOptions& o, std::ostream& out) {
  const auto start = Clock::now();
  KeyValues file;
  if (!o.grid_file.empty()) file = load_keyvalue(o.grid_file);
  if (!o.common.config_file.empty()) {
    for (auto& [k, v] : load_keyvalue(o.common.config_file)) file.insert_or_assign(k, v);
  }
  KeyValues grid_keys;
  const RunConfig cfg = build_config(o.common, file, &grid_keys);
  FigureGrids grids;
  for (const auto& [key, value] : grid_keys) {
    if (key != "lambda0" && key != "t" && key != "xi") throw ConfigError("unknown key '" + key + "'");
    grids.overrides[key] = parse_value_list(value, key);
  }

  const FigureData fig = make_figure(o.id, cfg, grids);
  const fs::path dir = o.out;
  fs::create_directories(dir);
  const fs::path csv_path = dir / ("fig" + std::to_string(o.id) + ".csv");
  {
    std::ofstream csv(csv_path);
    if (!csv) throw ConfigError("cannot write " + csv_path.string());
    write_figure_csv(csv, fig);
  }
  out << "figure " << o.id << ": " << fig.title << '\n' << "wrote " << csv_path.string() << " (" << fig.rows.size()
      << " rows)\n";

  if (!o.common.manifest.empty()) {
    nlohmann::json grid = {{"figure", o.id}};
    for (const auto& [k, v] : grids.overrides) grid[k] = v;
    nlohmann::json outputs = {{"csv", csv_path.string()}, {"rows", fig.rows.size()}};
    nlohmann::json flagged = nlohmann::json::array();
    for (const FigureRow& r : fig.rows) {
      if (r.flags != "ok") flagged.push_back({{"panel", r.panel}, {"series", r.series}, {"x", r.x}, {"flags", r.flags}});
    }
    outputs["flagged"] = flagged;
    write_json(o.common.manifest, manifest_json("figure", cfg, grid, outputs, seconds_since(start)));
  }
  return fig.flagged() ? kExitFlagged : kExitOk;
}

// --- specfun-eval -----------------------------------------------------------

struct SpecfunOptions {
  std::string name;
  int l = 1;
  double x = 0.0;
  double lambda0 = 1.0;
};

int cmd_specfun(const SpecfunOptions& o, std::ostream& out) {
  double v = 0.0;
  const std::string& n = o.name;
  if (n == "s") v = specfun::riccati_s(o.l, o.x);
  else if (n == "e") v = specfun::riccati_e(o.l, o.x);
  else if (n == "s_prime") v = specfun::riccati_s_prime(o.l, o.x);
  else if (n == "e_prime") v = specfun::riccati_e_prime(o.l, o.x);
  else if (n == "f_H") v = specfun::f_H(ModeIndex(o.l), o.x);
  else if (n == "calJ") v = specfun::calJ(ModeIndex(o.l), o.x);
  else if (n == "calY") v = specfun::calY(ModeIndex(o.l), o.x);
  else if (n == "digamma_re") v = specfun::digamma_re_shifted(o.x);
  else if (n == "phase") v = mode_phase(ModeIndex(o.l), o.x, o.lambda0, precision_policy_from_env()).value;
  else if (n == "denominator") v = denominator(ModeIndex(o.l), o.x, o.lambda0);
  else throw ConfigError("unknown function '" + n + "'");
  out << n << '(' << o.l << ", " << format_number(o.x) << ") = " << format_number(v) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Thermal TM Casimir free energy and entropy of a plasma-shell sphere", "casimir_shell"};
  app.set_version_flag("--version", std::string(CASIMIR_VERSION));
  app.require_subcommand(1);

  EvalOptions eval;
  auto* e = app.add_subcommand("eval", "evaluate aF (and optionally aS) at one point");
  e->add_option("--lambda0", eval.lambda0, "coupling lambda0 > 0")->required();
  e->add_option("--t", eval.t, "temperature t = aT > 0")->required();
  e->add_option("--method", eval.method, "exact|weak1|lowT_closed|lowT_integral|strong_lowT|weak_lowT|highT");
  e->add_option("--out", eval.out, "also write the row as CSV");
  e->add_option("--config", eval.common.config_file, "key=value config file");
  add_common(e, eval.common);

  SweepOptions sweep;
  auto* s = app.add_subcommand("sweep", "evaluate a (lambda0, t, method) grid");
  s->add_option("--grid-file", sweep.grid_file, "key=value grid and config file");
  s->add_option("--lambda0", sweep.lambda0, "list, linspace(a,b,n) or logspace(a,b,n)");
  s->add_option("--t", sweep.t, "list, linspace(a,b,n) or logspace(a,b,n)");
  s->add_option("--method", sweep.methods, "comma-separated methods");
  s->add_option("--out", sweep.out, "CSV output path (default stdout)");
  s->add_option("--config", sweep.common.config_file, "key=value config file");
  add_common(s, sweep.common);

  FigureOptions figure;
  auto* f = app.add_subcommand("figure", "regenerate the data behind a figure");
  f->add_option("id", figure.id, "figure id 1..7")->required()->check(CLI::Range(1, 7));
  f->add_option("--out", figure.out, "output directory");
  f->add_option("--grid-file", figure.grid_file, "key=value overrides for lambda0, t, xi");
  f->add_option("--config", figure.common.config_file, "key=value config file");
  add_common(f, figure.common);

  SpecfunOptions sf;
  auto* sp = app.add_subcommand("specfun-eval", "");
  sp->add_option("name", sf.name)->required();
  sp->add_option("l", sf.l)->required();
  sp->add_option("x", sf.x)->required();
  sp->add_option("--lambda0", sf.lambda0);
  sp->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& pe) {
    std::ostream& stream = pe.get_exit_code() == 0 ? out : err;
    const int code = app.exit(pe, stream, stream);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*e) return cmd_eval(eval, out);
    if (*s) return cmd_sweep(sweep, out);
    if (*f) return cmd_figure(figure, out);
    if (*sp) return cmd_specfun(sf, out);
  } catch (const ConfigError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitFlagged;
  }
  return kExitUsage;
}

}  // namespace casimir::app
