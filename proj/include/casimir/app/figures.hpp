#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "casimir/app/grid.hpp"

namespace casimir::app {

struct FigureRow {
  std::string panel;
  std::string series;
  std::string x_label;
  double x = 0.0;
  std::string y_label;
  double y = 0.0;
  double err = 0.0;
  std::string flags;
};

struct FigureData {
  int id = 0;
  std::string title;
  std::vector<FigureRow> rows;

  bool flagged() const;
};

/// Default grids, overridable by `lambda0`, `t` and `xi` keys.
struct FigureGrids {
  std::map<std::string, std::vector<double>> overrides;
};

FigureData make_figure(int id, const RunConfig& cfg, const FigureGrids& grids = {});
void write_figure_csv(std::ostream& out, const FigureData& fig);

}  // namespace casimir::app
