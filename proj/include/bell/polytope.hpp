#pragma once

#include <cstddef>
#include <vector>

#include "bell/rational.hpp"

namespace bell {

// coefficients . x <= bound, integer and coprime after canonicalization
struct Halfspace {
  IntVec coeffs;
  Int bound;

  bool operator==(const Halfspace&) const = default;
  bool operator<(const Halfspace& other) const;
  std::string to_string() const;
};

// clears denominators and divides by the gcd of all entries and the bound;
// throws SpecError on a zero coefficient vector
Halfspace canonicalize(const RatVec& coeffs, const Rat& bound);
Halfspace canonicalize(const Halfspace& h);

struct VPolytope {
  std::vector<RatVec> vertices;
  int dimension = 0;  // ambient dimension
};

struct LinearEquality {
  IntVec coeffs;
  Int rhs;
};

// H-representation. For full-dimensional input `halfspaces` live in the
// original coordinates and `equalities` is empty. For lower-dimensional input
// the conversion runs inside the affine hull: `halfspaces` are in hull
// coordinates (chart x = base_point + basis . t) and `equalities` cut out the
// hull in the original coordinates.
struct HPolytope {
  std::vector<Halfspace> halfspaces;
  std::vector<LinearEquality> equalities;
  int affine_dimension = 0;
  RatVec base_point;             // empty when full-dimensional
  std::vector<RatVec> basis;     // hull basis vectors, empty when full-dim
};

struct DDOptions {
  std::size_t max_rays = 1'000'000;
};

// exact double description conversion; facets only, canonicalized and sorted
HPolytope dd_convert(const VPolytope& vp, const DDOptions& opts = {});

struct FacetCheck {
  bool valid = false;
  bool is_facet = false;
  int saturating_vertex_count = 0;
};

FacetCheck verify_facet(const Halfspace& h, const VPolytope& vp);

}  // namespace bell
