#include "bell/catalog.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "bell/errors.hpp"

namespace bell {

using ordered_json = nlohmann::ordered_json;

FacetCatalog build_catalog(const BellScenario& s, const DDOptions& opts) {
  FacetCatalog c;
  c.scenario = s;
  c.dimension = static_cast<int>(s.dimension());
  c.vertex_count = s.vertex_count();

  const std::vector<Behavior> vertices = enumerate_vertices(s);
  VPolytope vp;
  vp.dimension = c.dimension;
  vp.vertices.reserve(vertices.size());
  for (const auto& b : vertices) vp.vertices.push_back(b.coords);

  const HPolytope hp = dd_convert(vp, opts);
  if (!hp.equalities.empty())
    throw SpecError("build_catalog: local polytope unexpectedly not full-dimensional");
  c.facets.reserve(hp.halfspaces.size());
  for (const auto& h : hp.halfspaces) c.facets.push_back({s, h});

  c.classes = classify(c.facets, true);
  c.classes_fixed_parties = classify(c.facets, false);
  return c;
}

namespace {

ordered_json facet_entry(const FacetCatalog& c, int facet_idx) {
  const BellInequality& f = c.facets[facet_idx];
  ordered_json j;
  j["prob_coeffs"] = ordered_json::array();
  for (const auto& coeff : f.prob_form.coeffs)
    j["prob_coeffs"].push_back(static_cast<long>(coeff.get_si()));
  j["bound"] = static_cast<long>(f.prob_form.bound.get_si());

  const CorrelatorForm cf = to_correlator_form(f);
  ordered_json terms = ordered_json::array();
  if (cf.constant != 0) {
    ordered_json t;
    t["parties"] = ordered_json::array();
    t["settings"] = ordered_json::array();
    t["coeff"] = rat_to_string(cf.constant);
    terms.push_back(t);
  }
  for (const auto& [term, coeff] : cf.terms) {
    ordered_json t;
    t["parties"] = ordered_json::array();
    t["settings"] = ordered_json::array();
    for (const auto& [p, x] : term.members) {
      t["parties"].push_back(p);
      t["settings"].push_back(x);
    }
    t["coeff"] = rat_to_string(coeff);
    terms.push_back(t);
  }
  j["correlator_terms"] = std::move(terms);
  j["correlator_bound"] = rat_to_string(cf.bound);

  auto locate = [&](const std::vector<FacetClass>& classes, const char* id_key,
                    const char* size_key) {
    for (std::size_t cid = 0; cid < classes.size(); ++cid)
      for (int m : classes[cid].member_indices)
        if (m == facet_idx) {
          j[id_key] = cid;
          j[size_key] = classes[cid].orbit_size;
          return;
        }
    throw SpecError("catalog: facet missing from its own classification");
  };
  j["positivity"] = is_positivity(f);
  locate(c.classes, "class_id", "class_size");
  locate(c.classes_fixed_parties, "class_id_fixed_parties",
         "class_size_fixed_parties");
  return j;
}

ordered_json class_entry(const FacetClass& fc) {
  ordered_json j;
  j["representative_coeffs"] = ordered_json::array();
  for (const auto& coeff : fc.representative.prob_form.coeffs)
    j["representative_coeffs"].push_back(static_cast<long>(coeff.get_si()));
  j["representative_bound"] =
      static_cast<long>(fc.representative.prob_form.bound.get_si());
  j["orbit_size"] = fc.orbit_size;
  j["members"] = fc.member_indices;
  j["positivity"] = fc.positivity;
  return j;
}

}  // namespace

std::string catalog_to_json(const FacetCatalog& c) {
  ordered_json j;
  j["version"] = 1;
  j["scenario"] = c.scenario.settings_per_party;
  j["dimension"] = c.dimension;
  j["vertex_count"] = c.vertex_count;
  j["facets"] = ordered_json::array();
  for (std::size_t i = 0; i < c.facets.size(); ++i)
    j["facets"].push_back(facet_entry(c, static_cast<int>(i)));
  j["classes"] = ordered_json::array();
  for (const auto& fc : c.classes) j["classes"].push_back(class_entry(fc));
  j["classes_fixed_parties"] = ordered_json::array();
  for (const auto& fc : c.classes_fixed_parties)
    j["classes_fixed_parties"].push_back(class_entry(fc));
  return j.dump(2) + "\n";
}

FacetCatalog catalog_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw SpecError(std::string("catalog: invalid JSON: ") + e.what());
  }
  if (!j.contains("version") || j["version"].get<int>() != 1)
    throw SpecError("catalog: missing or unsupported version field");

  FacetCatalog c;
  c.scenario = BellScenario(j["scenario"].get<std::vector<int>>());
  c.dimension = j["dimension"].get<int>();
  c.vertex_count = j["vertex_count"].get<long>();
  for (const auto& fj : j["facets"]) {
    Halfspace h;
    for (const auto& v : fj["prob_coeffs"]) h.coeffs.emplace_back(v.get<long>());
    h.bound = Int(fj["bound"].get<long>());
    c.facets.push_back({c.scenario, std::move(h)});
  }
  c.classes = classify(c.facets, true);
  c.classes_fixed_parties = classify(c.facets, false);
  return c;
}

std::string catalog_summary(const FacetCatalog& c) {
  long positivity = 0;
  for (const auto& f : c.facets)
    if (is_positivity(f)) ++positivity;
  // tally the nontrivial orbits as countxsize, e.g. "1x16"
  std::map<long, int> sizes;
  for (const auto& fc : c.classes)
    if (!fc.positivity) ++sizes[fc.orbit_size];
  std::ostringstream out;
  out << "dim=" << c.dimension << " vertices=" << c.vertex_count
      << " facets=" << c.facets.size() << " positivity=" << positivity
      << " classes=";
  bool first = true;
  for (const auto& [size, count] : sizes) {
    if (!first) out << ",";
    out << count << "x" << size;
    first = false;
  }
  if (sizes.empty()) out << "none";
  return out.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw SpecError("cannot open for writing: " + tmp);
    out << content;
    if (!out.flush()) throw SpecError("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw SpecError("rename failed: " + path);
}

}  // namespace bell
