#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>

#include "published_facets.hpp"
#include "bell/catalog.hpp"
#include "bell/errors.hpp"

using namespace bell;

namespace {

std::set<Halfspace> facet_set(const std::vector<BellInequality>& facets) {
  std::set<Halfspace> out;
  for (const auto& f : facets) out.insert(f.prob_form);
  return out;
}

}  // namespace

TEST_CASE("catalog counts and summary for the minimal scenarios") {
  const FacetCatalog chsh = build_catalog(BellScenario::parse("2,2"));
  CHECK(catalog_summary(chsh) ==
        "dim=8 vertices=16 facets=24 positivity=16 classes=1x8");

  const FacetCatalog c3 = build_catalog(BellScenario::parse("2,2,1"));
  CHECK(catalog_summary(c3) ==
        "dim=17 vertices=32 facets=48 positivity=32 classes=1x16");
  CHECK(c3.classes.size() == 2);
  CHECK(c3.classes_fixed_parties.size() == 2);
}

TEST_CASE("every enumerated facet is valid, tight, and facet-defining") {
  const BellScenario s = BellScenario::parse("2,2,1");
  const FacetCatalog cat = build_catalog(s);
  VPolytope vp;
  vp.dimension = static_cast<int>(s.dimension());
  for (const auto& b : enumerate_vertices(s)) vp.vertices.push_back(b.coords);
  for (const auto& f : cat.facets) {
    const FacetCheck check = verify_facet(f.prob_form, vp);
    CHECK(check.valid);
    CHECK(check.is_facet);
    CHECK(check.saturating_vertex_count >= 17);
  }
}

TEST_CASE("every vertex saturates at least dimension-many facets") {
  const BellScenario s = BellScenario::parse("2,2,1");
  const FacetCatalog cat = build_catalog(s);
  for (const auto& v : enumerate_vertices(s)) {
    int tight = 0;
    for (const auto& f : cat.facets) {
      const Rat value = evaluate(f, v);
      CHECK(value <= f.prob_form.bound);
      if (value == f.prob_form.bound) ++tight;
    }
    CHECK(tight >= 17);
  }
}

TEST_CASE("catalog equals the published inequality list") {
  const FacetCatalog cat = build_catalog(BellScenario::parse("2,2,1"));
  CHECK(facet_set(cat.facets) == facet_set(testdata::published_facets_221()));
}

TEST_CASE("relabelings permute the catalog") {
  const BellScenario s = BellScenario::parse("2,2,1");
  const FacetCatalog cat = build_catalog(s);
  const auto reference = facet_set(cat.facets);
  for (const auto& g : symmetry_generators(s)) {
    std::set<Halfspace> moved;
    for (const auto& f : cat.facets) moved.insert(apply(g, f).prob_form);
    CHECK(moved == reference);
  }
}

TEST_CASE("JSON round trip is stable and validated") {
  const FacetCatalog cat = build_catalog(BellScenario::parse("2,2,1"));
  const std::string text = catalog_to_json(cat);
  CHECK(text == catalog_to_json(build_catalog(BellScenario::parse("2,2,1"))));

  const FacetCatalog loaded = catalog_from_json(text);
  CHECK(loaded.scenario == cat.scenario);
  CHECK(loaded.dimension == cat.dimension);
  CHECK(loaded.vertex_count == cat.vertex_count);
  CHECK(facet_set(loaded.facets) == facet_set(cat.facets));
  CHECK(catalog_to_json(loaded) == text);

  CHECK_THROWS_AS(catalog_from_json("{\"version\": 2}"), SpecError);
  CHECK_THROWS_AS(catalog_from_json("not json"), SpecError);
}

TEST_CASE("atomic writes land complete") {
  const std::string path = "test_catalog_out.json";
  write_file_atomic(path, "hello\n");
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  std::remove(path.c_str());
  CHECK(content == "hello\n");
}

TEST_CASE("both classification granularities cover all facets") {
  const FacetCatalog cat = build_catalog(BellScenario::parse("2,2,1"));
  for (const auto* classes : {&cat.classes, &cat.classes_fixed_parties}) {
    std::set<int> seen;
    for (const auto& fc : *classes)
      for (int m : fc.member_indices) CHECK(seen.insert(m).second);
    CHECK(seen.size() == cat.facets.size());
    for (const auto& fc : *classes) {
      CHECK(fc.orbit_size >= static_cast<long>(fc.member_indices.size()));
      // representative is a catalog member mapped to lexicographic minimum
      CHECK(facet_set(cat.facets).count(fc.representative.prob_form) == 1);
    }
  }
}
