#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "metricat/colimit.hpp"
#include "metricat/injectivity.hpp"
#include "metricat/space.hpp"
#include "metricat/universal.hpp"

namespace metricat {

using Json = nlohmann::ordered_json;

/// Pretty printer used for every file we write: objects are indented, arrays
/// of scalars stay on one line. Output ends with a newline.
std::string format_json(const Json& value);

/// Parses text into JSON; malformed text raises SchemaError at "".
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);
/// Writes via a temporary file and rename, so readers never see a partial file.
void write_file_atomic(const std::string& path, const std::string& contents);

/// Accumulates non-canonical spellings seen while loading ("3/6", "2/1").
struct LoadNotes {
  std::vector<std::string> non_canonical;  // JSON pointers
};

Json to_json(const ExtRat& value);
ExtRat extrat_from_json(const Json& value, const std::string& pointer, LoadNotes* notes = nullptr);

/// {"points": n, "labels": [...], "dist": [[...], ...]}; labels are written only when present.
Json to_json(const Space& space);

struct RawSpace {
  std::vector<std::vector<ExtRat>> rows;
  std::vector<std::string> labels;
};
/// Shape checks only; metric axioms are left to validate_space.
RawSpace raw_space_from_json(const Json& value, const std::string& pointer = "", LoadNotes* notes = nullptr);

/// Full validation: shape, symmetry, zero diagonal, separation, triangle
/// inequality. Metric violations are reported as SchemaError at "<pointer>/dist".
Space space_from_json(const Json& value, const std::string& pointer = "", LoadNotes* notes = nullptr);

/// Named spaces usable as string references from morphisms.
using SpaceRefs = std::map<std::string, SpacePtr>;

/// {"dom": <space or ref>, "cod": <space or ref>, "map": [indices]}.
Json to_json(const MetMap& map);
MetMap map_from_json(const Json& value, const SpaceRefs& refs, const std::string& pointer,
                     LoadNotes* notes = nullptr);

/// Reads the optional "spaces" object of a document into refs.
SpaceRefs refs_from_json(const Json& document, LoadNotes* notes = nullptr);

/// {"objects": [...], "arrows": [{"src": i, "dst": j, "map": [...]}]}.
Json to_json(const FinDiagram& diagram);
FinDiagram diagram_from_json(const Json& value, const SpaceRefs& refs, const std::string& pointer = "",
                             LoadNotes* notes = nullptr);

/// {"size_cap": n, "spaces": [...]}; a bare array is also accepted (size_cap = largest space).
Json to_json(const TestFamily& family);
TestFamily family_from_json(const Json& value, const SpaceRefs& refs, const Budget& budget = {},
                            LoadNotes* notes = nullptr);

Json to_json(const EpsPushoutResult& result);
Json to_json(const Coequalizer& result);
Json to_json(const Colimit& result);
Json to_json(const UniversalReport& report);
Json to_json(const InjectivityResult& result, const MetMap& f, const SpacePtr& k);
Json to_json(const SplitResult& result);
Json to_json(const Square& square);
Json to_json(const PurityResult& result);

/// Parses "1/2,1,inf" style lists.
std::vector<ExtRat> parse_extrat_list(const std::string& text);

}  // namespace metricat
