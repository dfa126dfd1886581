#pragma once

#include <optional>
#include <string>
#include <vector>

#include "metricat/fraisse.hpp"
#include "metricat/json_io.hpp"

namespace metricat {

/// Run directory layout:
///   manifest.json                 written last
///   catalog.json                  spaces and isometries with strata
///   stages/K_000.json             one file per stage
///   embeddings/k_000_001.json     stage embeddings
///   spans/step_000.json           span log of each step
///   audit.json
/// Every file is written through a temporary file and a rename.

struct RunSettings {
  DistanceGrid grid;
  SpanPolicy policy = SpanPolicy::IsoSkip;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  ChainBudget budget;
  std::vector<std::string> command;
  Json config = Json::object();
};

Json to_json(const IsometryCatalog& catalog);
IsometryCatalog catalog_from_json(const Json& value);

Json to_json(const AuditReport& report);

/// Writes catalog, stages, embeddings and span logs.
void write_chain(const std::string& dir, const IsometryCatalog& catalog, const ChainResult& chain);
void write_audit(const std::string& dir, const AuditReport& report);
/// `wall_clock_seconds` is the only field that varies between identical runs.
void write_manifest(const std::string& dir, const RunSettings& settings, const ChainResult& chain,
                    const std::optional<AuditReport>& audit, double wall_clock_seconds);

struct LoadedRun {
  Json manifest;
  IsometryCatalog catalog;
  std::vector<ChainStage> stages;
};

/// Throws SchemaError (with the file name in the pointer) on malformed content.
LoadedRun load_run(const std::string& dir);

}  // namespace metricat
