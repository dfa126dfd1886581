#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "metricat/canonical.hpp"
#include "metricat/colimit.hpp"
#include "metricat/constructions.hpp"
#include "metricat/corpus.hpp"
#include "metricat/errors.hpp"
#include "metricat/fraisse.hpp"
#include "metricat/injectivity.hpp"
#include "metricat/json_io.hpp"
#include "metricat/laws.hpp"
#include "metricat/rundir.hpp"
#include "metricat/universal.hpp"

namespace metricat::cli {

namespace {

struct Options {
  std::size_t budget_points = Budget{}.max_points;
  std::uint64_t budget_nodes = Budget{}.max_nodes;
  bool verbose = false;

  std::string in, out, space, family, variant = "pure", targets;
  std::string eps = "0";
  std::string grid;
  std::size_t max_size = 3;
  std::size_t target_size = 2;
  std::size_t steps = 3;
  std::string policy = "iso-skip";
  std::uint64_t seed = 7;
  std::size_t instances = LawConfig{}.instances;
  std::size_t max_stage_points = ChainBudget{}.max_stage_points;
  std::size_t max_spans = ChainBudget{}.max_spans;
  bool verify = false;
  bool strict_final = false;
  std::string rundir;
  std::string file;
};

class Context {
 public:
  Context(const Options& opt, std::ostream& out, std::ostream& err, std::vector<std::string> command)
      : opt_(opt), out_(out), err_(err), command_(std::move(command)) {}

  Budget budget() const {
    Budget b;
    b.max_points = opt_.budget_points;
    b.max_nodes = opt_.budget_nodes;
    if (const char* env = std::getenv("METRICAT_BUDGET_NODES")) {
      try {
        b.max_nodes = std::min<std::uint64_t>(b.max_nodes, std::stoull(env));
      } catch (const std::exception&) {
        throw std::invalid_argument("METRICAT_BUDGET_NODES is not a number");
      }
    }
    return b;
  }

  void log(const std::string& message) const {
    if (opt_.verbose) err_ << "metricat: " << message << '\n';
  }

  // Prints to stdout and, when --out is given, writes the same bytes to that file.
  void emit(const Json& value, bool to_out_file = true) const {
    std::string text = format_json(value);
    out_ << text;
    if (to_out_file && !opt_.out.empty()) write_file_atomic(opt_.out, text);
  }

  void note_non_canonical(const LoadNotes& notes) const {
    for (const auto& p : notes.non_canonical) err_ << "metricat: non-canonical value at " << p << '\n';
  }

  const Options& opt() const { return opt_; }
  std::ostream& err() const { return err_; }
  const std::vector<std::string>& command() const { return command_; }

 private:
  const Options& opt_;
  std::ostream& out_;
  std::ostream& err_;
  std::vector<std::string> command_;
};

ExtRat parse_eps(const std::string& text) {
  try {
    return ExtRat::parse(text);
  } catch (const ParseError& e) {
    throw std::invalid_argument(std::string("--eps: ") + e.what());
  }
}

std::vector<ExtRat> parse_grid(const std::string& text, std::vector<ExtRat> fallback) {
  if (text.empty()) return fallback;
  try {
    return parse_extrat_list(text);
  } catch (const ParseError& e) {
    throw std::invalid_argument(std::string("--grid: ") + e.what());
  }
}

std::string require(const std::string& value, const char* flag) {
  if (value.empty()) throw std::invalid_argument(std::string("missing required option ") + flag);
  return value;
}

// A morphism document is either a morphism object or {"spaces": ..., "<key>": morphism}.
MetMap load_morphism(const Json& doc, const SpaceRefs& refs, const char* key, LoadNotes& notes) {
  if (doc.is_object() && doc.contains(key)) return map_from_json(doc[key], refs, std::string("/") + key, &notes);
  return map_from_json(doc, refs, "", &notes);
}

// Family documents keep their spaces in an array; named refs are optional.
TestFamily load_family(const std::string& path, const Budget& budget, LoadNotes& notes) {
  Json doc = read_json_file(path);
  SpaceRefs refs;
  if (doc.is_object() && doc.contains("refs")) {
    Json holder;
    holder["spaces"] = doc["refs"];
    refs = refs_from_json(holder, &notes);
  }
  return family_from_json(doc, refs, budget, &notes);
}

std::vector<SpacePtr> target_family(const Context& ctx) {
  const Options& opt = ctx.opt();
  if (!opt.targets.empty()) {
    LoadNotes notes;
    return load_family(opt.targets, ctx.budget(), notes).spaces;
  }
  std::vector<ExtRat> fallback{ExtRat::ratio(1, 2), ExtRat(1), ExtRat(2), ExtRat::inf()};
  return enumerate_spaces(DistanceGrid::make(parse_grid(opt.grid, fallback), opt.target_size), ctx.budget());
}

int cmd_space_validate(const Context& ctx) {
  Json doc = read_json_file(require(ctx.opt().file, "FILE"));
  LoadNotes notes;
  RawSpace raw = raw_space_from_json(doc, "", &notes);
  ValidationResult result = validate_space(raw.rows, raw.labels);
  Json out;
  out["valid"] = result.ok();
  Json violations = Json::array();
  for (const auto& v : result.violations) violations.push_back(v.describe());
  out["violations"] = std::move(violations);
  out["non_canonical"] = notes.non_canonical;
  if (result.ok()) out["space"] = to_json(*result.space);
  ctx.emit(out);
  return result.ok() ? kOk : kFailure;
}

int cmd_space_canonical(const Context& ctx) {
  Json doc = read_json_file(require(ctx.opt().file, "FILE"));
  LoadNotes notes;
  Space s = space_from_json(doc, "", &notes);
  ctx.note_non_canonical(notes);
  CanonicalForm form = canonical_form(s, ctx.budget());
  Json out;
  out["space"] = to_json(form.space);
  out["order"] = form.order;
  ctx.emit(out);
  return kOk;
}

int cmd_colimit_pushout(const Context& ctx) {
  Json doc = read_json_file(require(ctx.opt().in, "--in"));
  LoadNotes notes;
  SpaceRefs refs = refs_from_json(doc, &notes);
  MetMap f = map_from_json(doc.at("f"), refs, "/f", &notes);
  MetMap g = map_from_json(doc.at("g"), refs, "/g", &notes);
  ctx.note_non_canonical(notes);
  ExtRat eps = parse_eps(ctx.opt().eps);
  EpsPushoutResult result = eps_pushout(f, g, eps);
  Json out = to_json(result);
  bool pass = true;
  if (ctx.opt().verify) {
    UniversalReport report = verify_universal(result, f, g, target_family(ctx), ctx.budget(), Exec::Parallel);
    out["verification"] = to_json(report);
    pass = report.pass;
  }
  ctx.emit(out);
  return pass ? kOk : kFailure;
}

int cmd_colimit_coequalizer(const Context& ctx) {
  Json doc = read_json_file(require(ctx.opt().in, "--in"));
  LoadNotes notes;
  SpaceRefs refs = refs_from_json(doc, &notes);
  MetMap f = map_from_json(doc.at("f"), refs, "/f", &notes);
  MetMap g = map_from_json(doc.at("g"), refs, "/g", &notes);
  ctx.note_non_canonical(notes);
  Coequalizer result = eps_coequalizer(f, g, parse_eps(ctx.opt().eps));
  Json out = to_json(result);
  bool pass = true;
  if (ctx.opt().verify) {
    UniversalReport report = verify_coequalizer(result, f, g, target_family(ctx), ctx.budget());
    out["verification"] = to_json(report);
    pass = report.pass;
  }
  ctx.emit(out);
  return pass ? kOk : kFailure;
}

int cmd_colimit_colimit(const Context& ctx) {
  Json doc = read_json_file(require(ctx.opt().in, "--in"));
  LoadNotes notes;
  SpaceRefs refs = refs_from_json(doc, &notes);
  FinDiagram diagram = diagram_from_json(doc, refs, "", &notes);
  ctx.note_non_canonical(notes);
  Colimit result = eps_colimit(diagram, parse_eps(ctx.opt().eps), ctx.budget());
  ctx.emit(to_json(result));
  return kOk;
}

int cmd_check(const Context& ctx, const std::string& what) {
  const Options& opt = ctx.opt();
  Json doc = read_json_file(require(opt.in, "--in"));
  LoadNotes notes;
  SpaceRefs refs = refs_from_json(doc, &notes);
  MetMap f = load_morphism(doc, refs, "f", notes);
  ExtRat eps = parse_eps(opt.eps);
  Budget budget = ctx.budget();
  Json out;
  bool pass = false;
  out["check"] = what;
  out["eps"] = to_json(eps);
  if (what == "injective") {
    Json sdoc = read_json_file(require(opt.space, "--space"));
    auto k = share(space_from_json(sdoc, "", &notes));
    ctx.note_non_canonical(notes);
    InjectivityResult r = is_eps_injective(k, f, eps, budget);
    out["result"] = to_json(r, f, k);
    out["defect"] = to_json(injectivity_defect(k, f, budget));
    pass = r.injective;
  } else if (what == "split") {
    ctx.note_non_canonical(notes);
    SplitResult r = is_eps_split(f, eps, budget);
    out["result"] = to_json(r);
    pass = r.split;
  } else if (what == "pure") {
    TestFamily family = load_family(require(opt.family, "--family"), budget, notes);
    ctx.note_non_canonical(notes);
    PurityVariant variant = parse_purity_variant(opt.variant);
    PurityResult r = purity(f, eps, variant, family, budget);
    out["variant"] = to_string(variant);
    out["family_size"] = family.spaces.size();
    out["result"] = to_json(r);
    pass = r.pure;
  } else {
    ctx.note_non_canonical(notes);
    bool mono;
    if (!opt.family.empty()) {
      mono = is_eps_mono(f, eps, load_family(opt.family, budget, notes).spaces, budget);
    } else {
      mono = is_eps_mono(f, eps, 3, budget);
    }
    out["result"] = Json{{"mono", mono}};
    pass = mono;
  }
  out["pass"] = pass;
  ctx.emit(out);
  return pass ? kOk : kFailure;
}

int cmd_laws_run(const Context& ctx) {
  LawConfig config;
  config.seed = ctx.opt().seed;
  config.instances = ctx.opt().instances;
  config.budget = ctx.budget();
  ctx.log("law harness: seed " + std::to_string(config.seed) + ", " + std::to_string(config.instances) +
          " instances");
  LawReport report = law_harness(config);
  ctx.emit(to_json(report));
  return report.pass() ? kOk : kFailure;
}

DistanceGrid grid_from_options(const Options& opt) {
  return DistanceGrid::make(parse_grid(require(opt.grid, "--grid"), {}), opt.max_size);
}

int cmd_fraisse_enumerate(const Context& ctx) {
  DistanceGrid grid = grid_from_options(ctx.opt());
  auto spaces = enumerate_spaces(grid, ctx.budget());
  Json out;
  out["count"] = spaces.size();
  Json list = Json::array();
  for (const auto& s : spaces) list.push_back(to_json(*s));
  out["spaces"] = std::move(list);
  ctx.emit(out);
  return kOk;
}

int cmd_fraisse_build(const Context& ctx) {
  const Options& opt = ctx.opt();
  const auto started = std::chrono::steady_clock::now();
  RunSettings settings{grid_from_options(opt), parse_span_policy(opt.policy), opt.steps, opt.seed, {}, ctx.command(),
                       Json::object()};
  settings.budget.max_stage_points = opt.max_stage_points;
  settings.budget.max_spans = opt.max_spans;
  settings.budget.search = ctx.budget();
  settings.config["grid"] = opt.grid;
  settings.config["max_size"] = opt.max_size;
  settings.config["steps"] = opt.steps;
  settings.config["policy"] = opt.policy;
  settings.config["seed"] = opt.seed;
  const std::string dir = require(opt.out, "--out");

  auto spaces = enumerate_spaces(settings.grid, settings.budget.search);
  IsometryCatalog catalog = catalog_isometries(spaces, settings.budget.search);
  ctx.log("catalog: " + std::to_string(spaces.size()) + " spaces, " + std::to_string(catalog.isometries.size()) +
          " isometries");
  ChainResult chain = build_chain(catalog, opt.steps, settings.policy, settings.budget);
  write_chain(dir, catalog, chain);
  std::optional<AuditReport> audit;
  if (chain.complete) {
    audit = audit_saturation(chain.stages, catalog, FinalStage::Pending, settings.budget.search);
    write_audit(dir, *audit);
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_manifest(dir, settings, chain, audit, seconds);

  Json out;
  out["rundir"] = dir;
  out["complete"] = chain.complete;
  out["stop_reason"] = chain.stop_reason;
  Json sizes = Json::array();
  for (const auto& s : chain.stages) sizes.push_back(s.space->size());
  out["stage_sizes"] = std::move(sizes);
  out["audit"] = audit ? to_json(*audit) : Json(nullptr);
  ctx.emit(out, false);
  if (!chain.complete) {
    ctx.err() << "metricat: budget exceeded, partial chain persisted: " << chain.stop_reason << '\n';
    return kBudget;
  }
  return audit->pass ? kOk : kFailure;
}

int cmd_fraisse_audit(const Context& ctx) {
  const std::string dir = require(ctx.opt().rundir, "RUNDIR");
  LoadedRun run = load_run(dir);
  AuditReport report = audit_saturation(run.stages, run.catalog,
                                        ctx.opt().strict_final ? FinalStage::Strict : FinalStage::Pending,
                                        ctx.budget());
  write_audit(dir, report);
  ctx.emit(to_json(report), false);
  return report.pass ? kOk : kFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Finite generalized metric spaces: eps-colimits, injectivity and the Fraisse chain", "metricat"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML or INI file with option defaults; flags override it");
  app.option_defaults()->always_capture_default();
  app.add_option("--budget-points", opt.budget_points, "Point budget per space");
  app.add_option("--budget-nodes", opt.budget_nodes, "Search node budget (METRICAT_BUDGET_NODES caps it)");
  app.add_flag("-v,--verbose", opt.verbose, "Progress messages on stderr");

  std::function<int(const Context&)> action;
  auto bind = [&](CLI::App* sub, std::function<int(const Context&)> fn) {
    sub->callback([&action, fn] { action = fn; });
  };

  auto* space = app.add_subcommand("space", "Validate or canonicalize a space")->require_subcommand(1);
  auto* validate = space->add_subcommand("validate", "Check the metric axioms and list every violation");
  validate->add_option("FILE", opt.file, "Space JSON")->required();
  bind(validate, cmd_space_validate);
  auto* canonical = space->add_subcommand("canonical", "Canonical representative of the isometry class");
  canonical->add_option("FILE", opt.file, "Space JSON")->required();
  canonical->add_option("--out", opt.out, "Also write the result here");
  bind(canonical, cmd_space_canonical);

  auto* colimit = app.add_subcommand("colimit", "eps-pushouts, coequalizers and colimits")->require_subcommand(1);
  auto add_colimit = [&](const char* name, const char* help, std::function<int(const Context&)> fn, bool verifiable) {
    auto* sub = colimit->add_subcommand(name, help);
    sub->add_option("--in", opt.in, "Input JSON")->required();
    sub->add_option("--eps", opt.eps, "Tolerance (p, p/q or inf)");
    sub->add_option("--out", opt.out, "Also write the result here");
    if (verifiable) {
      sub->add_flag("--verify", opt.verify, "Check the universal property by brute force");
      sub->add_option("--targets", opt.targets, "Test family JSON for --verify");
      sub->add_option("--target-size", opt.target_size, "Without --targets: all grid spaces up to this size");
      sub->add_option("--grid", opt.grid, "Grid for --target-size (default 1/2,1,2,inf)");
    }
    bind(sub, std::move(fn));
  };
  add_colimit("pushout", "eps-pushout of a span {\"f\": A->B, \"g\": A->C}", cmd_colimit_pushout, true);
  add_colimit("coequalizer", "eps-coequalizer of a parallel pair {\"f\", \"g\"}", cmd_colimit_coequalizer, true);
  add_colimit("colimit", "eps-colimit of a diagram {\"objects\", \"arrows\"}", cmd_colimit_colimit, false);

  auto* check = app.add_subcommand("check", "Injectivity, splitness, purity and eps-mono testers")
                    ->require_subcommand(1);
  for (const char* what : {"injective", "split", "pure", "mono"}) {
    auto* sub = check->add_subcommand(what, std::string("eps-") + what + " test of a morphism");
    sub->add_option("--in", opt.in, "Morphism JSON")->required();
    sub->add_option("--eps", opt.eps, "Tolerance (p, p/q or inf)");
    sub->add_option("--out", opt.out, "Also write the result here");
    if (std::string(what) == "injective") sub->add_option("--space", opt.space, "Subject space JSON")->required();
    if (std::string(what) == "pure") {
      sub->add_option("--variant", opt.variant, "pure, weak or bare")
          ->check(CLI::IsMember({"pure", "weak", "bare"}));
      sub->add_option("--family", opt.family, "Test family JSON")->required();
    }
    if (std::string(what) == "mono") sub->add_option("--family", opt.family, "Test spaces (default: subspaces of dom)");
    std::string name = what;
    bind(sub, [name](const Context& ctx) { return cmd_check(ctx, name); });
  }

  auto* laws = app.add_subcommand("laws", "Law harness")->require_subcommand(1);
  auto* laws_run = laws->add_subcommand("run", "Check every law on a seeded corpus");
  laws_run->add_option("--seed", opt.seed, "Corpus seed");
  laws_run->add_option("--budget", opt.instances, "Number of corpus instances");
  laws_run->add_option("--out", opt.out, "Also write the report here");
  bind(laws_run, cmd_laws_run);

  auto* fraisse = app.add_subcommand("fraisse", "Fraisse chain over a distance grid")->require_subcommand(1);
  auto* enumerate = fraisse->add_subcommand("enumerate", "All grid spaces up to isometry");
  enumerate->add_option("--grid", opt.grid, "Comma separated distances, e.g. 1,2 or 1/2,1,inf")->required();
  enumerate->add_option("--max-size", opt.max_size, "Largest space size");
  enumerate->add_option("--out", opt.out, "Also write the list here");
  bind(enumerate, cmd_fraisse_enumerate);
  auto* build = fraisse->add_subcommand("build", "Run the chain and persist every stage");
  build->add_option("--grid", opt.grid, "Comma separated distances")->required();
  build->add_option("--max-size", opt.max_size, "Largest catalog space");
  build->add_option("--steps", opt.steps, "Number of chain steps");
  build->add_option("--policy", opt.policy, "iso-skip, iso, full or full-skip")
      ->check(CLI::IsMember({"iso-skip", "iso", "full", "full-skip"}));
  build->add_option("--seed", opt.seed, "Recorded in the manifest");
  build->add_option("--max-stage-points", opt.max_stage_points, "Point cap per stage");
  build->add_option("--max-spans", opt.max_spans, "Span cap per step");
  build->add_option("--out", opt.out, "Run directory")->required();
  bind(build, cmd_fraisse_build);
  auto* audit = fraisse->add_subcommand("audit", "Re-check a persisted run");
  audit->add_option("RUNDIR", opt.rundir, "Run directory")->required();
  audit->add_flag("--strict-final", opt.strict_final, "Require the last stage to be saturated for its own stratum");
  bind(audit, cmd_fraisse_audit);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "metricat: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  std::vector<std::string> command(argv, argv + argc);
  Context ctx(opt, out, err, command);
  try {
    return action(ctx);
  } catch (const BudgetExceeded& e) {
    err << "metricat: budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const SchemaError& e) {
    err << "metricat: invalid input at " << e.what() << '\n';
    return kUsage;
  } catch (const MismatchedEndpoints& e) {
    err << "metricat: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidMorphism& e) {
    err << "metricat: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "metricat: " << e.what() << '\n';
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "metricat: invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "metricat: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace metricat::cli
