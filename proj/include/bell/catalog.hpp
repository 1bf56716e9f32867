#pragma once

#include <string>
#include <vector>

#include "bell/facets.hpp"
#include "bell/polytope.hpp"
#include "bell/scenario.hpp"

namespace bell {

// enumerated facets of a scenario's local polytope plus their relabeling
// orbits, at both granularities (full group, and with party roles fixed)
struct FacetCatalog {
  BellScenario scenario;
  int dimension = 0;
  long vertex_count = 0;
  std::vector<BellInequality> facets;
  std::vector<FacetClass> classes;
  std::vector<FacetClass> classes_fixed_parties;
};

FacetCatalog build_catalog(const BellScenario& s, const DDOptions& opts = {});

// version-1 JSON document; byte-stable for identical inputs
std::string catalog_to_json(const FacetCatalog& c);
FacetCatalog catalog_from_json(const std::string& text);

// "dim=17 vertices=32 facets=48 positivity=32 classes=1x16"
std::string catalog_summary(const FacetCatalog& c);

// temp file + rename so readers never observe a partial write
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace bell
