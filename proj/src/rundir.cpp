#include "metricat/rundir.hpp"

#include <cstdio>
#include <filesystem>

#include "metricat/errors.hpp"

namespace metricat {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string numbered(const char* prefix, std::size_t n, const char* suffix = ".json") {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%03zu%s", prefix, n, suffix);
  return buf;
}

std::string stage_file(std::size_t n) { return numbered("K_", n); }
std::string span_file(std::size_t n) { return numbered("step_", n); }
std::string embedding_file(std::size_t n) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "k_%03zu_%03zu.json", n, n + 1);
  return buf;
}

std::vector<std::size_t> indices(const Json& v, const std::string& pointer) {
  if (!v.is_array()) throw SchemaError(pointer, "expected an index array");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_unsigned()) throw SchemaError(pointer + "/" + std::to_string(i), "expected an index");
    out.push_back(v[i].get<std::size_t>());
  }
  return out;
}

std::size_t number(const Json& obj, const char* key, const std::string& pointer) {
  if (!obj.is_object() || !obj.contains(key) || !obj[key].is_number_unsigned()) {
    throw SchemaError(pointer + "/" + key, "expected a nonnegative integer");
  }
  return obj[key].get<std::size_t>();
}

}  // namespace

Json to_json(const IsometryCatalog& catalog) {
  Json out;
  Json spaces = Json::array();
  for (const auto& s : catalog.spaces) spaces.push_back(to_json(*s));
  out["spaces"] = std::move(spaces);
  Json maps = Json::array();
  for (const auto& e : catalog.isometries) {
    Json j;
    j["dom"] = e.dom;
    j["cod"] = e.cod;
    j["map"] = e.map.images();
    j["stratum"] = e.stratum;
    maps.push_back(std::move(j));
  }
  out["isometries"] = std::move(maps);
  return out;
}

IsometryCatalog catalog_from_json(const Json& value) {
  IsometryCatalog catalog;
  if (!value.is_object() || !value.contains("spaces") || !value["spaces"].is_array()) {
    throw SchemaError("/spaces", "expected an array of spaces");
  }
  for (std::size_t i = 0; i < value["spaces"].size(); ++i) {
    catalog.spaces.push_back(share(space_from_json(value["spaces"][i], "/spaces/" + std::to_string(i))));
  }
  if (!value.contains("isometries") || !value["isometries"].is_array()) {
    throw SchemaError("/isometries", "expected an array of isometries");
  }
  for (std::size_t i = 0; i < value["isometries"].size(); ++i) {
    const std::string p = "/isometries/" + std::to_string(i);
    const Json& e = value["isometries"][i];
    std::size_t dom = number(e, "dom", p), cod = number(e, "cod", p);
    if (dom >= catalog.spaces.size() || cod >= catalog.spaces.size()) throw SchemaError(p, "space index out of range");
    MetMap map = [&] {
      try {
        return MetMap(catalog.spaces[dom], catalog.spaces[cod], indices(e.value("map", Json()), p + "/map"));
      } catch (const InvalidMorphism& err) {
        throw SchemaError(p + "/map", err.what());
      }
    }();
    if (!is_isometry(map)) throw SchemaError(p + "/map", "not an isometry");
    catalog.isometries.push_back(CatalogEntry{dom, cod, std::move(map), number(e, "stratum", p)});
  }
  return catalog;
}

Json to_json(const AuditReport& report) {
  Json out;
  out["pass"] = report.pass;
  out["extensions_checked"] = report.extensions_checked;
  out["pending"] = report.pending;
  Json missing = Json::array();
  for (const auto& m : report.missing) {
    Json j;
    j["stage"] = m.stage;
    j["entry"] = m.entry;
    j["u"] = m.u;
    missing.push_back(std::move(j));
  }
  out["missing"] = std::move(missing);
  out["problems"] = report.problems;
  return out;
}

void write_chain(const std::string& dir, const IsometryCatalog& catalog, const ChainResult& chain) {
  const fs::path root(dir);
  write_file_atomic((root / "catalog.json").string(), format_json(to_json(catalog)));
  for (const auto& stage : chain.stages) {
    Json s;
    s["index"] = stage.index;
    s["space"] = to_json(*stage.space);
    write_file_atomic((root / "stages" / stage_file(stage.index)).string(), format_json(s));
    if (!stage.embedding) continue;
    Json e;
    e["from"] = stage.index;
    e["to"] = stage.index + 1;
    e["map"] = stage.embedding->images();
    write_file_atomic((root / "embeddings" / embedding_file(stage.index)).string(), format_json(e));
    Json log;
    log["step"] = stage.index;
    log["stratum"] = stage.stratum;
    log["skipped"] = stage.skipped;
    Json spans = Json::array();
    for (const auto& r : stage.spans) {
      Json j;
      j["entry"] = r.entry;
      j["u"] = r.u;
      j["copy"] = r.copy;
      spans.push_back(std::move(j));
    }
    log["spans"] = std::move(spans);
    write_file_atomic((root / "spans" / span_file(stage.index)).string(), format_json(log));
  }
}

void write_audit(const std::string& dir, const AuditReport& report) {
  write_file_atomic((fs::path(dir) / "audit.json").string(), format_json(to_json(report)));
}

void write_manifest(const std::string& dir, const RunSettings& settings, const ChainResult& chain,
                    const std::optional<AuditReport>& audit, double wall_clock_seconds) {
  Json m;
  m["tool"] = "metricat";
  m["version"] = kVersion;
  m["command"] = settings.command;
  m["config"] = settings.config;
  Json grid = Json::array();
  for (const auto& v : settings.grid.values) grid.push_back(to_json(v));
  m["grid"] = std::move(grid);
  m["max_size"] = settings.grid.max_size;
  m["policy"] = to_string(settings.policy);
  m["steps"] = settings.steps;
  m["seed"] = settings.seed;
  Json budgets;
  budgets["max_stage_points"] = settings.budget.max_stage_points;
  budgets["max_spans"] = settings.budget.max_spans;
  budgets["max_points"] = settings.budget.search.max_points;
  budgets["max_nodes"] = settings.budget.search.max_nodes;
  m["budgets"] = std::move(budgets);
  Json outcome;
  outcome["complete"] = chain.complete;
  outcome["stop_reason"] = chain.stop_reason;
  Json sizes = Json::array();
  for (const auto& s : chain.stages) sizes.push_back(s.space->size());
  outcome["stage_sizes"] = std::move(sizes);
  outcome["audit_pass"] = audit ? Json(audit->pass) : Json(nullptr);
  m["outcome"] = std::move(outcome);
  m["wall_clock_seconds"] = wall_clock_seconds;
  write_file_atomic((fs::path(dir) / "manifest.json").string(), format_json(m));
}

LoadedRun load_run(const std::string& dir) {
  const fs::path root(dir);
  LoadedRun run;
  if (fs::exists(root / "manifest.json")) run.manifest = read_json_file((root / "manifest.json").string());
  try {
    run.catalog = catalog_from_json(read_json_file((root / "catalog.json").string()));
  } catch (const SchemaError& e) {
    throw SchemaError("catalog.json" + e.pointer(), e.what());
  }
  for (std::size_t n = 0;; ++n) {
    fs::path sp = root / "stages" / stage_file(n);
    if (!fs::exists(sp)) break;
    ChainStage stage;
    stage.index = n;
    const Json s = read_json_file(sp.string());
    const std::string name = "stages/" + stage_file(n);
    if (!s.is_object() || !s.contains("space")) throw SchemaError(name, "missing member \"space\"");
    stage.space = share(space_from_json(s["space"], name + "#/space"));
    run.stages.push_back(std::move(stage));
  }
  if (run.stages.empty()) throw SchemaError("stages/" + stage_file(0), "run directory has no stages");
  for (std::size_t n = 0; n + 1 < run.stages.size(); ++n) {
    const std::string ename = "embeddings/" + embedding_file(n);
    fs::path ep = root / ename;
    if (!fs::exists(ep)) throw SchemaError(ename, "missing embedding");
    const Json e = read_json_file(ep.string());
    try {
      run.stages[n].embedding =
          MetMap(run.stages[n].space, run.stages[n + 1].space, indices(e.value("map", Json()), ename + "#/map"));
    } catch (const InvalidMorphism& err) {
      throw SchemaError(ename + "#/map", err.what());
    }
    const std::string lname = "spans/" + span_file(n);
    fs::path lp = root / lname;
    if (!fs::exists(lp)) throw SchemaError(lname, "missing span log");
    const Json log = read_json_file(lp.string());
    run.stages[n].stratum = number(log, "stratum", lname + "#");
    run.stages[n].skipped = number(log, "skipped", lname + "#");
    if (!log.contains("spans") || !log["spans"].is_array()) throw SchemaError(lname + "#/spans", "expected an array");
    for (std::size_t r = 0; r < log["spans"].size(); ++r) {
      const std::string p = lname + "#/spans/" + std::to_string(r);
      const Json& j = log["spans"][r];
      run.stages[n].spans.push_back(SpanRecord{number(j, "entry", p), indices(j.value("u", Json()), p + "/u"),
                                               indices(j.value("copy", Json()), p + "/copy")});
    }
  }
  return run;
}

}  // namespace metricat
