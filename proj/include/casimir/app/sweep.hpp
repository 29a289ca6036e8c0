#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "casimir/app/grid.hpp"

namespace casimir::app {

inline constexpr int kManifestSchemaVersion = 1;

struct SweepRow {
  std::size_t index = 0;
  double lambda0 = 0.0;
  double t = 0.0;
  Method method = Method::exact;
  std::optional<FreeEnergySample> sample;
  std::optional<EntropySample> entropy;
  std::string error;  // non-empty when evaluation threw

  bool flagged() const;
  std::string flags() const;
};

int resolve_workers(int requested);

/// One row per (lambda0, t, method), ordered lambda0-major then t then method,
/// regardless of which worker finished first.
std::vector<SweepRow> run_sweep(const SweepGrid& grid, const RunConfig& cfg);

std::string format_number(double v);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

nlohmann::json config_json(const RunConfig& cfg);
nlohmann::json manifest_json(const std::string& command, const RunConfig& cfg, const nlohmann::json& grid,
                             const nlohmann::json& outputs, double wall_seconds);
nlohmann::json rows_json(const std::vector<SweepRow>& rows);
nlohmann::json grid_json(const SweepGrid& grid);

}  // namespace casimir::app
