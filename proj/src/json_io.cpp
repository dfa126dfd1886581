#include "metricat/json_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "metricat/errors.hpp"

namespace metricat {

namespace {

bool is_scalar(const Json& v) { return !v.is_array() && !v.is_object(); }

void format_into(const Json& v, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(depth + 1) * 2, ' ');
  if (v.is_object()) {
    if (v.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += inner + Json(it.key()).dump() + ": ";
      format_into(it.value(), depth + 1, out);
    }
    out += "\n" + pad + "}";
  } else if (v.is_array()) {
    if (v.empty()) {
      out += "[]";
      return;
    }
    if (std::all_of(v.begin(), v.end(), is_scalar)) {
      out += "[";
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += ", ";
        first = false;
        out += e.dump();
      }
      out += "]";
      return;
    }
    out += "[\n";
    bool first = true;
    for (const auto& e : v) {
      if (!first) out += ",\n";
      first = false;
      out += inner;
      format_into(e, depth + 1, out);
    }
    out += "\n" + pad + "]";
  } else {
    out += v.dump();
  }
}

std::string child(const std::string& pointer, const std::string& key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~') escaped += "~0";
    else if (c == '/') escaped += "~1";
    else escaped += c;
  }
  return pointer + "/" + escaped;
}

std::string child(const std::string& pointer, std::size_t index) { return pointer + "/" + std::to_string(index); }

const Json& member(const Json& obj, const std::string& key, const std::string& pointer) {
  if (!obj.is_object()) throw SchemaError(pointer, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(child(pointer, key), "missing member");
  return *it;
}

std::size_t index_from_json(const Json& v, const std::string& pointer) {
  if (!v.is_number_unsigned()) throw SchemaError(pointer, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

std::vector<std::size_t> indices_from_json(const Json& v, const std::string& pointer) {
  if (!v.is_array()) throw SchemaError(pointer, "expected an array of point indices");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(index_from_json(v[i], child(pointer, i)));
  return out;
}

SpacePtr space_or_ref(const Json& v, const SpaceRefs& refs, const std::string& pointer, LoadNotes* notes) {
  if (v.is_string()) {
    auto it = refs.find(v.get<std::string>());
    if (it == refs.end()) throw SchemaError(pointer, "unknown space reference \"" + v.get<std::string>() + "\"");
    return it->second;
  }
  return share(space_from_json(v, pointer, notes));
}

Json indices_to_json(std::span<const std::size_t> v) { return Json(std::vector<std::size_t>(v.begin(), v.end())); }

}  // namespace

std::string format_json(const Json& value) {
  std::string out;
  format_into(value, 0, out);
  out += "\n";
  return out;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("", std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str());
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

Json to_json(const ExtRat& value) { return value.to_string(); }

ExtRat extrat_from_json(const Json& value, const std::string& pointer, LoadNotes* notes) {
  if (value.is_number_unsigned()) {
    if (notes) notes->non_canonical.push_back(pointer);
    return ExtRat(static_cast<std::int64_t>(value.get<std::uint64_t>()));
  }
  if (!value.is_string()) throw SchemaError(pointer, "expected a distance string such as \"3/2\" or \"inf\"");
  bool canonical = true;
  ExtRat out;
  try {
    out = ExtRat::parse(value.get<std::string>(), canonical);
  } catch (const ParseError& e) {
    throw SchemaError(pointer, e.what());
  }
  if (!canonical && notes) notes->non_canonical.push_back(pointer);
  return out;
}

Json to_json(const Space& space) {
  Json out;
  out["points"] = space.size();
  if (!space.labels().empty()) out["labels"] = space.labels();
  Json rows = Json::array();
  for (std::size_t i = 0; i < space.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < space.size(); ++j) row.push_back(space.d(i, j).to_string());
    rows.push_back(std::move(row));
  }
  out["dist"] = std::move(rows);
  return out;
}

RawSpace raw_space_from_json(const Json& value, const std::string& pointer, LoadNotes* notes) {
  if (!value.is_object()) throw SchemaError(pointer, "expected a space object");
  std::size_t n = index_from_json(member(value, "points", pointer), child(pointer, "points"));
  RawSpace raw;
  if (auto it = value.find("labels"); it != value.end()) {
    const std::string lp = child(pointer, "labels");
    if (!it->is_array() || it->size() != n) throw SchemaError(lp, "expected " + std::to_string(n) + " labels");
    for (std::size_t i = 0; i < n; ++i) {
      if (!(*it)[i].is_string()) throw SchemaError(child(lp, i), "label must be a string");
      raw.labels.push_back((*it)[i].get<std::string>());
    }
  }
  const std::string dp = child(pointer, "dist");
  const Json& dist = member(value, "dist", pointer);
  if (!dist.is_array() || dist.size() != n) throw SchemaError(dp, "expected " + std::to_string(n) + " rows");
  for (std::size_t i = 0; i < n; ++i) {
    const std::string rp = child(dp, i);
    if (!dist[i].is_array() || dist[i].size() != n) {
      throw SchemaError(rp, "expected " + std::to_string(n) + " entries");
    }
    std::vector<ExtRat> row;
    for (std::size_t j = 0; j < n; ++j) row.push_back(extrat_from_json(dist[i][j], child(rp, j), notes));
    raw.rows.push_back(std::move(row));
  }
  return raw;
}

Space space_from_json(const Json& value, const std::string& pointer, LoadNotes* notes) {
  RawSpace raw = raw_space_from_json(value, pointer, notes);
  ValidationResult checked = validate_space(raw.rows, std::move(raw.labels));
  if (!checked.ok()) {
    std::string what = "not a generalized metric:";
    for (const auto& v : checked.violations) what += " " + v.describe() + ";";
    what.pop_back();
    throw SchemaError(child(pointer, "dist"), what);
  }
  return std::move(*checked.space);
}

Json to_json(const MetMap& map) {
  Json out;
  out["dom"] = to_json(map.dom());
  out["cod"] = to_json(map.cod());
  out["map"] = indices_to_json(map.images());
  return out;
}

MetMap map_from_json(const Json& value, const SpaceRefs& refs, const std::string& pointer, LoadNotes* notes) {
  if (!value.is_object()) throw SchemaError(pointer, "expected a morphism object");
  SpacePtr dom = space_or_ref(member(value, "dom", pointer), refs, child(pointer, "dom"), notes);
  SpacePtr cod = space_or_ref(member(value, "cod", pointer), refs, child(pointer, "cod"), notes);
  auto images = indices_from_json(member(value, "map", pointer), child(pointer, "map"));
  try {
    return MetMap(dom, cod, std::move(images));
  } catch (const InvalidMorphism& e) {
    throw SchemaError(child(pointer, "map"), e.what());
  }
}

SpaceRefs refs_from_json(const Json& document, LoadNotes* notes) {
  SpaceRefs refs;
  if (!document.is_object()) return refs;
  auto it = document.find("spaces");
  if (it == document.end()) return refs;
  if (!it->is_object()) throw SchemaError("/spaces", "expected an object of named spaces");
  for (auto s = it->begin(); s != it->end(); ++s) {
    refs[s.key()] = share(space_from_json(s.value(), child("/spaces", s.key()), notes));
  }
  return refs;
}

Json to_json(const FinDiagram& diagram) {
  Json out;
  Json objects = Json::array();
  for (const auto& o : diagram.objects) objects.push_back(to_json(*o));
  out["objects"] = std::move(objects);
  Json arrows = Json::array();
  for (const auto& a : diagram.arrows) {
    Json e;
    e["src"] = a.src;
    e["dst"] = a.dst;
    e["map"] = indices_to_json(a.map.images());
    arrows.push_back(std::move(e));
  }
  out["arrows"] = std::move(arrows);
  return out;
}

FinDiagram diagram_from_json(const Json& value, const SpaceRefs& refs, const std::string& pointer,
                             LoadNotes* notes) {
  FinDiagram diagram;
  const std::string op = child(pointer, "objects");
  const Json& objects = member(value, "objects", pointer);
  if (!objects.is_array()) throw SchemaError(op, "expected an array of spaces");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    diagram.objects.push_back(space_or_ref(objects[i], refs, child(op, i), notes));
  }
  const std::string ap = child(pointer, "arrows");
  const Json& arrows = value.contains("arrows") ? value["arrows"] : Json::array();
  if (!arrows.is_array()) throw SchemaError(ap, "expected an array of arrows");
  for (std::size_t e = 0; e < arrows.size(); ++e) {
    const std::string ep = child(ap, e);
    std::size_t src = index_from_json(member(arrows[e], "src", ep), child(ep, "src"));
    std::size_t dst = index_from_json(member(arrows[e], "dst", ep), child(ep, "dst"));
    if (src >= diagram.objects.size()) throw SchemaError(child(ep, "src"), "object index out of range");
    if (dst >= diagram.objects.size()) throw SchemaError(child(ep, "dst"), "object index out of range");
    auto images = indices_from_json(member(arrows[e], "map", ep), child(ep, "map"));
    try {
      diagram.arrows.push_back(Arrow{src, dst, MetMap(diagram.objects[src], diagram.objects[dst], std::move(images))});
    } catch (const InvalidMorphism& err) {
      throw SchemaError(child(ep, "map"), err.what());
    }
  }
  return diagram;
}

Json to_json(const TestFamily& family) {
  Json out;
  out["size_cap"] = family.size_cap;
  Json spaces = Json::array();
  for (const auto& s : family.spaces) spaces.push_back(to_json(*s));
  out["spaces"] = std::move(spaces);
  return out;
}

TestFamily family_from_json(const Json& value, const SpaceRefs& refs, const Budget& budget, LoadNotes* notes) {
  std::vector<SpacePtr> spaces;
  std::optional<std::size_t> cap;
  const Json* list = &value;
  std::string lp;
  if (value.is_object()) {
    if (value.contains("size_cap")) cap = index_from_json(value["size_cap"], "/size_cap");
    list = &member(value, "spaces", "");
    lp = "/spaces";
  }
  if (!list->is_array()) throw SchemaError(lp, "expected an array of spaces");
  std::size_t largest = 0;
  for (std::size_t i = 0; i < list->size(); ++i) {
    spaces.push_back(space_or_ref((*list)[i], refs, child(lp, i), notes));
    largest = std::max(largest, spaces.back()->size());
  }
  return TestFamily::make(spaces, cap.value_or(largest), budget);
}

Json to_json(const EpsPushoutResult& result) {
  Json out;
  out["eps"] = to_json(result.eps);
  out["apex"] = to_json(*result.apex);
  out["leg_f"] = indices_to_json(result.leg_f.images());
  out["leg_g"] = indices_to_json(result.leg_g.images());
  return out;
}

Json to_json(const Coequalizer& result) {
  Json out;
  out["eps"] = to_json(result.eps);
  out["apex"] = to_json(*result.apex);
  out["leg"] = indices_to_json(result.leg.images());
  return out;
}

Json to_json(const Colimit& result) {
  Json out;
  out["eps"] = to_json(result.eps);
  out["apex"] = to_json(*result.apex);
  Json legs = Json::array();
  for (const auto& l : result.legs) legs.push_back(indices_to_json(l.images()));
  out["legs"] = std::move(legs);
  return out;
}

Json to_json(const UniversalReport& report) {
  Json out;
  out["pass"] = report.pass;
  out["cospans_checked"] = report.cospans_checked;
  if (report.counterexample) {
    const auto& c = *report.counterexample;
    Json cex;
    cex["kind"] = to_string(c.kind);
    if (c.target_index) cex["target_index"] = *c.target_index;
    if (c.target) cex["target"] = to_json(*c.target);
    if (!c.f_prime.empty()) cex["f_prime"] = c.f_prime;
    if (!c.g_prime.empty()) cex["g_prime"] = c.g_prime;
    Json meds = Json::array();
    for (const auto& m : c.mediators) meds.push_back(m);
    cex["mediators"] = std::move(meds);
    out["counterexample"] = std::move(cex);
  } else {
    out["counterexample"] = nullptr;
  }
  return out;
}

Json to_json(const InjectivityResult& result, const MetMap& f, const SpacePtr& k) {
  Json out;
  out["injective"] = result.injective;
  out["subject"] = to_json(*k);
  out["morphism"] = to_json(f);
  out["witness"] = result.witness ? Json(*result.witness) : Json(nullptr);
  return out;
}

Json to_json(const SplitResult& result) {
  Json out;
  out["split"] = result.split;
  out["retraction"] = result.retraction ? Json(*result.retraction) : Json(nullptr);
  return out;
}

Json to_json(const Square& square) {
  Json out;
  out["a"] = to_json(*square.a);
  out["b"] = to_json(*square.b);
  out["g"] = square.g;
  out["u"] = square.u;
  out["v"] = square.v;
  return out;
}

Json to_json(const PurityResult& result) {
  Json out;
  out["pure"] = result.pure;
  out["squares_checked"] = result.squares_checked;
  out["counterexample"] = result.counterexample ? to_json(*result.counterexample) : Json(nullptr);
  return out;
}

std::vector<ExtRat> parse_extrat_list(const std::string& text) {
  std::vector<ExtRat> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }), item.end());
    if (item.empty()) continue;
    out.push_back(ExtRat::parse(item));
  }
  return out;
}

}  // namespace metricat
