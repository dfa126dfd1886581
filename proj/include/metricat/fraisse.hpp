#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metricat/budget.hpp"
#include "metricat/space.hpp"

namespace metricat {

struct DistanceGrid {
  std::vector<ExtRat> values;  // positive, sorted ascending, distinct; INF allowed
  std::size_t max_size = 0;

  /// Sorts and deduplicates; throws std::invalid_argument on an empty grid or a zero value.
  static DistanceGrid make(std::vector<ExtRat> values, std::size_t max_size);
};

/// Every space with at most grid.max_size points and all distances in the
/// grid, one canonical form per isometry class, ordered by canonical_less
/// (so by size first). The empty space comes first. Every tried distance
/// assignment is one node against budget.max_nodes.
std::vector<SpacePtr> enumerate_spaces(const DistanceGrid& grid, const Budget& budget = {});

struct CatalogEntry {
  std::size_t dom;  // index into IsometryCatalog::spaces
  std::size_t cod;
  MetMap map;
  std::size_t stratum;
};

/// Isometries between catalog spaces, one per orbit under automorphisms of
/// the codomain (the lexicographically least member is kept). An entry
/// lies in stratum max(|X|, |Y|) - 1 (0 for the empty space), so S_n, the
/// entries of stratum <= n, holds the maps between spaces of at most n + 1
/// points. Entries are ordered by (stratum, dom, cod, map).
struct IsometryCatalog {
  std::vector<SpacePtr> spaces;
  std::vector<CatalogEntry> isometries;

  std::size_t max_stratum() const;
};

IsometryCatalog catalog_isometries(const std::vector<SpacePtr>& spaces, const Budget& budget = {});

enum class SpanPolicy {
  IsoSkip,   // isometric u, skipping spans already realized inside K_n (default)
  Iso,       // isometric u
  Full,      // every non-expansive u
  FullSkip,  // every u, skipping realized spans
};

const char* to_string(SpanPolicy policy);
SpanPolicy parse_span_policy(const std::string& text);

struct ChainBudget {
  std::size_t max_stage_points = 256;
  std::size_t max_spans = 512;
  Budget search;
};

struct SpanRequest {
  std::size_t entry;  // index into IsometryCatalog::isometries
  std::vector<std::size_t> u;  // X -> K_n
};

struct SpanCollection {
  std::vector<SpanRequest> spans;
  std::size_t skipped = 0;  // spans dropped because an isometric extension already exists in K_n
};

/// Spans (u, h) with h in S_stratum and u : X -> K_n chosen by the policy,
/// in catalog order and then lexicographic order of u. Throws
/// BudgetExceeded when more than budget.max_spans spans survive.
SpanCollection collect_spans(const SpacePtr& k, const IsometryCatalog& catalog, std::size_t stratum, SpanPolicy policy,
                             const ChainBudget& budget = {});

struct SpanRecord {
  std::size_t entry;
  std::vector<std::size_t> u;     // X -> K_n
  std::vector<std::size_t> copy;  // Y -> K_{n+1}; copy∘h = k∘u
};

struct ChainStepResult {
  SpacePtr next;
  MetMap embedding;  // K_n -> K_{n+1}, the identity on indices 0..|K_n|-1
  std::vector<SpanRecord> log;
};

/// One ordinary pushout of ⟨u⟩ : ⨆X -> K_n along ⨆h : ⨆X -> ⨆Y. Throws
/// BudgetExceeded if K_{n+1} would exceed budget.max_stage_points, and
/// std::logic_error if the embedding fails to be an isometry.
ChainStepResult chain_step(const SpacePtr& k, const IsometryCatalog& catalog, const std::vector<SpanRequest>& spans,
                           const ChainBudget& budget = {});

struct ChainStage {
  std::size_t index = 0;
  SpacePtr space;
  std::optional<MetMap> embedding;  // into the next stage; absent on the last one
  std::vector<SpanRecord> spans;    // spans processed to reach the next stage
  std::size_t stratum = 0;
  std::size_t skipped = 0;
};

struct ChainResult {
  std::vector<ChainStage> stages;
  bool complete = true;
  std::string stop_reason;  // set when a budget stopped the chain early
};

/// K_0 = ∅ and K_{n+1} = chain_step(K_n, spans with h in S_n). A budget
/// overrun ends the chain and is reported in the result rather than thrown,
/// so the stages built so far can still be persisted.
ChainResult build_chain(const IsometryCatalog& catalog, std::size_t steps, SpanPolicy policy,
                        const ChainBudget& budget = {});

enum class FinalStage {
  Pending,  // the last stage has no successor yet; its obligations are listed, not failed
  Strict,   // the last stage must already contain the extensions for its own stratum
};

struct MissingExtension {
  std::size_t stage;
  std::size_t entry;
  std::vector<std::size_t> u;
};

struct AuditReport {
  bool pass = true;
  std::uint64_t extensions_checked = 0;
  std::uint64_t pending = 0;
  std::vector<MissingExtension> missing;
  std::vector<std::string> problems;  // non-isometric embeddings, broken span log entries
};

/// Checks, for every stage n with a successor, every h : X -> Y in S_n and
/// every isometric u : X -> K_n, that some isometry v : Y -> K_{n+1} has
/// v∘h = k∘u. Also checks that each embedding and each composite of
/// embeddings is an isometry and that each span log entry commutes.
AuditReport audit_saturation(const std::vector<ChainStage>& stages, const IsometryCatalog& catalog,
                             FinalStage final_stage = FinalStage::Pending, const Budget& budget = {});

}  // namespace metricat
