#include "casimir/app/figures.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "casimir/app/sweep.hpp"

namespace casimir::app {
namespace {

constexpr double kPi = std::numbers::pi;

struct Point {
  double y = 0.0;
  double err = 0.0;
  std::string flags = "ok";
};

struct Job {
  FigureRow row;
  std::function<Point()> compute;
};

std::string label(const std::string& name, double v) {
  std::ostringstream os;
  os << name << '=' << v;
  return os.str();
}

Point from_sample(const FreeEnergySample& s) { return {s.aF, s.error_estimate, s.flags.describe()}; }

// numerator / denominator with first-order error propagation
Point ratio(const FreeEnergySample& num, const FreeEnergySample& den) {
  SampleFlags f;
  f.converged = num.flags.converged && den.flags.converged;
  f.degraded = num.flags.degraded || den.flags.degraded;
  const double r = num.aF / den.aF;
  const double err = std::abs(r) * (num.error_estimate / std::abs(num.aF) + den.error_estimate / std::abs(den.aF));
  return {r, err, f.describe()};
}

class Builder {
 public:
  Builder(const RunConfig& cfg, const FigureGrids& grids) : cfg_(cfg), grids_(grids) {}

  std::vector<double> values(const std::string& key, std::vector<double> fallback) const {
    auto it = grids_.overrides.find(key);
    return it == grids_.overrides.end() ? fallback : it->second;
  }

  void add(std::string panel, std::string series, std::string x_label, double x, std::string y_label,
           std::function<Point()> f) {
    jobs_.push_back({{std::move(panel), std::move(series), std::move(x_label), x, std::move(y_label), 0.0, 0.0, ""},
                     std::move(f)});
  }

  const EvalConfig& eval() const { return cfg_.eval; }

  std::vector<FigureRow> run() {
    const long n = static_cast<long>(jobs_.size());
    const int workers = resolve_workers(cfg_.workers);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (long i = 0; i < n; ++i) {
      Job& j = jobs_[i];
      try {
        const Point p = j.compute();
        j.row.y = p.y;
        j.row.err = p.err;
        j.row.flags = p.flags;
      } catch (const std::exception&) {
        j.row.y = std::numeric_limits<double>::quiet_NaN();
        j.row.err = std::numeric_limits<double>::quiet_NaN();
        j.row.flags = "error";
      }
    }
    std::vector<FigureRow> rows;
    rows.reserve(jobs_.size());
    for (Job& j : jobs_) rows.push_back(std::move(j.row));
    return rows;
  }

 private:
  const RunConfig& cfg_;
  const FigureGrids& grids_;
  std::vector<Job> jobs_;
};

void figure1(Builder& b) {
  const auto& quad = b.eval().exact.quad;
  for (double xi : b.values("xi", logspace(0.3, 10.0, 40))) {
    b.add("bracket", "closed", "xi", xi, "bracket", [xi] { return Point{freeenergy::lowT_closed_bracket(xi)}; });
    for (double alpha : {0.1, 0.01}) {
      b.add("bracket", label("integral_alpha", alpha), "xi", xi, "bracket", [=, &quad] {
        const freeenergy::LowTIntegral r = freeenergy::lowT_integral_bracket(alpha, xi, LowTForm::arctan, quad);
        const bool ok = r.quad.converged && !r.quad.degraded_precision;
        return Point{r.bracket, r.quad.error_estimate, ok ? "ok" : "unconverged"};
      });
    }
  }
}

void figure2(Builder& b) {
  const auto& eval = b.eval();
  for (double l0 : b.values("lambda0", {0.5, 1.0, 2.0})) {
    for (double t : b.values("t", logspace(0.02, 1.0, 40))) {
      const ShellParams p(l0, t);
      b.add("exact", label("lambda0", l0), "t", t, "aF", [=, &eval] { return from_sample(freeenergy::exact_aF(p, eval.exact)); });
      b.add("lowT", label("lambda0", l0), "t", t, "aF", [=] { return from_sample(freeenergy::lowT_closed_aF(p)); });
    }
  }
}

void ratio_vs_t(Builder& b, const std::vector<double>& lambdas, const std::vector<double>& ts, Method reference,
                const std::string& y_label) {
  const auto& eval = b.eval();
  for (double l0 : b.values("lambda0", lambdas)) {
    for (double t : b.values("t", ts)) {
      const ShellParams p(l0, t);
      b.add("exact", label("lambda0", l0), "t", t, y_label, [=, &eval] {
        return ratio(freeenergy::exact_aF(p, eval.exact), freeenergy::evaluate(p, reference, eval));
      });
      b.add("lowT", label("lambda0", l0), "t", t, y_label, [=, &eval] {
        return ratio(freeenergy::lowT_closed_aF(p), freeenergy::evaluate(p, reference, eval));
      });
    }
  }
}

void figure5(Builder& b) {
  const auto& eval = b.eval();
  for (double t : b.values("t", {0.025, 0.05, 0.1})) {
    for (double l0 : b.values("lambda0", logspace(1e-3, 2.0, 30))) {
      const ShellParams p(l0, t);
      b.add("exact", label("t", t), "lambda0", l0, "aF/strong_lowT", [=, &eval] {
        return ratio(freeenergy::exact_aF(p, eval.exact), freeenergy::strong_lowT_aF(p));
      });
      b.add("lowT", label("t", t), "lambda0", l0, "aF/strong_lowT",
            [=] { return ratio(freeenergy::lowT_closed_aF(p), freeenergy::strong_lowT_aF(p)); });
    }
  }
}

void figure6(Builder& b) {
  const auto& eval = b.eval();
  for (double l0 : b.values("lambda0", {1e-3, 1e-2, 0.1, 0.5, 1.0})) {
    for (double t : b.values("t", logspace(0.05, 5.0, 30))) {
      const ShellParams p(l0, t);
      b.add("exact", label("lambda0", l0), "t", t, "aF/weak1",
            [=, &eval] { return ratio(freeenergy::exact_aF(p, eval.exact), freeenergy::weak1_aF(p)); });
    }
  }
}

void figure7(Builder& b) {
  for (double t : b.values("t", logspace(0.01, 10.0, 60))) {
    // lambda0 drops out once lambda0/pi is divided away
    const ShellParams p(1.0, t);
    const double scale = 1.0 / kPi;
    b.add("weak", "weak1", "t", t, "aF/(lambda0/pi)", [=] { return Point{freeenergy::weak1_aF(p).aF / scale}; });
    b.add("weak", "weak_lowT", "t", t, "aF/(lambda0/pi)", [=] { return Point{freeenergy::weak_lowT_aF(p).aF / scale}; });
    b.add("weak", "highT", "t", t, "aF/(lambda0/pi)", [=] { return Point{freeenergy::highT_aF(p).aF / scale}; });
  }
}

}  // namespace

bool FigureData::flagged() const {
  for (const FigureRow& r : rows) {
    if (r.flags != "ok") return true;
  }
  return false;
}

FigureData make_figure(int id, const RunConfig& cfg, const FigureGrids& grids) {
  Builder b(cfg, grids);
  FigureData fig;
  fig.id = id;
  switch (id) {
    case 1:
      fig.title = "low-temperature bracket vs xi: closed form and arctangent integral";
      figure1(b);
      break;
    case 2:
      fig.title = "free energy vs t: exact and low-temperature closed form";
      figure2(b);
      break;
    case 3:
      fig.title = "free energy relative to the strong-coupling low-T limit vs t";
      ratio_vs_t(b, {0.5, 1.0, 2.0}, logspace(0.005, 0.5, 30), Method::strong_lowT, "aF/strong_lowT");
      break;
    case 4:
      fig.title = "free energy relative to the weak-coupling low-T limit vs t";
      ratio_vs_t(b, {1e-4, 2e-4, 4e-4}, logspace(0.005, 0.1, 30), Method::weak_lowT, "aF/weak_lowT");
      break;
    case 5:
      fig.title = "free energy relative to the strong-coupling low-T limit vs lambda0";
      figure5(b);
      break;
    case 6:
      fig.title = "exact free energy relative to the order-lambda0 result";
      figure6(b);
      break;
    case 7:
      fig.title = "order-lambda0 free energy with its low- and high-T limits";
      figure7(b);
      break;
    default:
      throw ConfigError("figure id must be 1..7");
  }
  fig.rows = b.run();
  return fig;
}

void write_figure_csv(std::ostream& out, const FigureData& fig) {
  out << "panel,series,x_label,x,y_label,y,err,flags\n";
  for (const FigureRow& r : fig.rows) {
    out << r.panel << ',' << r.series << ',' << r.x_label << ',' << format_number(r.x) << ',' << r.y_label << ','
        << format_number(r.y) << ',' << format_number(r.err) << ',' << r.flags << '\n';
  }
}

}  // namespace casimir::app
