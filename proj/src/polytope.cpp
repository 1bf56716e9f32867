#include "bell/polytope.hpp"

#include <algorithm>
#include <cstdint>

#include "bell/errors.hpp"

namespace bell {

bool Halfspace::operator<(const Halfspace& other) const {
  if (coeffs != other.coeffs) {
    return std::lexicographical_compare(coeffs.begin(), coeffs.end(),
                                        other.coeffs.begin(), other.coeffs.end());
  }
  return bound < other.bound;
}

std::string Halfspace::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (i) out += ",";
    out += coeffs[i].get_str();
  }
  out += "] <= " + bound.get_str();
  return out;
}

Halfspace canonicalize(const RatVec& coeffs, const Rat& bound) {
  bool nonzero = false;
  for (const Rat& c : coeffs)
    if (c != 0) nonzero = true;
  if (!nonzero) throw SpecError("zero coefficient vector");
  Int lcm = 1;
  for (const Rat& c : coeffs) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
  mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), bound.get_den().get_mpz_t());
  Halfspace h;
  h.coeffs.reserve(coeffs.size());
  Int gcd = 0;
  for (const Rat& c : coeffs) {
    Rat scaled = c * lcm;
    h.coeffs.push_back(scaled.get_num());
    mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), h.coeffs.back().get_mpz_t());
  }
  Rat scaled_bound = bound * lcm;
  h.bound = scaled_bound.get_num();
  mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), h.bound.get_mpz_t());
  if (gcd > 1) {
    for (Int& c : h.coeffs) c /= gcd;
    h.bound /= gcd;
  }
  return h;
}

Halfspace canonicalize(const Halfspace& h) {
  RatVec coeffs(h.coeffs.begin(), h.coeffs.end());
  return canonicalize(coeffs, Rat(h.bound));
}

namespace {

Int dot(const IntVec& a, const IntVec& b) {
  Int sum = 0;
  Int tmp;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mpz_mul(tmp.get_mpz_t(), a[i].get_mpz_t(), b[i].get_mpz_t());
    sum += tmp;
  }
  return sum;
}

void divide_by_content(IntVec& v) {
  Int g = 0;
  for (const Int& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g > 1)
    for (Int& x : v) x /= g;
}

// small bitset over generator indices
struct ZeroSet {
  std::vector<uint64_t> words;

  explicit ZeroSet(std::size_t bits) : words((bits + 63) / 64, 0) {}
  void set(std::size_t i) { words[i / 64] |= uint64_t(1) << (i % 64); }
  static ZeroSet intersect(const ZeroSet& a, const ZeroSet& b) {
    ZeroSet out = a;
    for (std::size_t i = 0; i < out.words.size(); ++i) out.words[i] &= b.words[i];
    return out;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (uint64_t w : words) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }
  bool contains(const ZeroSet& other) const {  // other subseteq this
    for (std::size_t i = 0; i < words.size(); ++i)
      if ((other.words[i] & ~words[i]) != 0) return false;
    return true;
  }
};

struct Ray {
  IntVec v;
  ZeroSet zero;
};

// invert a square rational matrix by Gauss-Jordan; throws on singular input
std::vector<RatVec> invert(std::vector<RatVec> m) {
  const std::size_t n = m.size();
  std::vector<RatVec> inv(n, RatVec(n, 0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t sel = col;
    while (sel < n && m[sel][col] == 0) ++sel;
    if (sel == n) throw SpecError("singular matrix in dd initialization");
    std::swap(m[sel], m[col]);
    std::swap(inv[sel], inv[col]);
    const Rat pivot = m[col][col];
    for (std::size_t c = 0; c < n; ++c) {
      m[col][c] /= pivot;
      inv[col][c] /= pivot;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      const Rat f = m[r][col];
      for (std::size_t c = 0; c < n; ++c) {
        m[r][c] -= f * m[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

// dual rays (facets) of the homogenization cone of a full-dimensional point set
std::vector<Halfspace> dd_core(std::vector<RatVec> points, const DDOptions& opts) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  const std::size_t dim = points.empty() ? 0 : points[0].size();
  const std::size_t hdim = dim + 1;
  const std::size_t m = points.size();

  // homogenize and clear denominators per generator
  std::vector<IntVec> gens(m);
  for (std::size_t i = 0; i < m; ++i) {
    RatVec h(hdim);
    h[0] = 1;
    for (std::size_t k = 0; k < dim; ++k) h[k + 1] = points[i][k];
    Int lcm = 1;
    for (const Rat& q : h) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den().get_mpz_t());
    gens[i].resize(hdim);
    for (std::size_t k = 0; k < hdim; ++k) gens[i][k] = Rat(h[k] * lcm).get_num();
  }

  // greedy lexicographic scan for an initial basis of rank hdim
  std::vector<std::size_t> basis_idx;
  std::vector<bool> in_basis(m, false);
  {
    std::vector<RatVec> rows;
    for (std::size_t i = 0; i < m && basis_idx.size() < hdim; ++i) {
      rows.emplace_back(gens[i].begin(), gens[i].end());
      if (rational_rank(rows) == static_cast<int>(rows.size())) {
        basis_idx.push_back(i);
        in_basis[i] = true;
      } else {
        rows.pop_back();
      }
    }
  }
  if (basis_idx.size() != hdim)
    throw SpecError("dd_core requires a full-dimensional point set");

  // initial dual rays: columns of the basis inverse (y_j . g_i = delta_ij)
  std::vector<Ray> rays;
  {
    std::vector<RatVec> basis_mat(hdim, RatVec(hdim));
    for (std::size_t r = 0; r < hdim; ++r)
      for (std::size_t c = 0; c < hdim; ++c) basis_mat[r][c] = Rat(gens[basis_idx[r]][c]);
    std::vector<RatVec> inv = invert(std::move(basis_mat));
    for (std::size_t j = 0; j < hdim; ++j) {
      RatVec col(hdim);
      for (std::size_t r = 0; r < hdim; ++r) col[r] = inv[r][j];
      Int lcm = 1;
      for (const Rat& q : col) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den().get_mpz_t());
      Ray ray{IntVec(hdim), ZeroSet(m)};
      for (std::size_t r = 0; r < hdim; ++r) ray.v[r] = Rat(col[r] * lcm).get_num();
      divide_by_content(ray.v);
      for (std::size_t i = 0; i < hdim; ++i)
        if (i != j) ray.zero.set(basis_idx[i]);
      rays.push_back(std::move(ray));
    }
  }

  // incremental insertion of the remaining generators
  for (std::size_t gi = 0; gi < m; ++gi) {
    if (in_basis[gi]) continue;
    const IntVec& g = gens[gi];
    std::vector<Int> side(rays.size());
    std::vector<std::size_t> pos, neg;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      side[r] = dot(rays[r].v, g);
      if (side[r] > 0)
        pos.push_back(r);
      else if (side[r] < 0)
        neg.push_back(r);
      else
        rays[r].zero.set(gi);
    }
    if (neg.empty()) continue;

    std::vector<Ray> created;
    for (std::size_t p : pos) {
      for (std::size_t q : neg) {
        ZeroSet common = ZeroSet::intersect(rays[p].zero, rays[q].zero);
        if (common.count() + 2 < hdim) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size(); ++r) {
          if (r == p || r == q) continue;
          if (rays[r].zero.contains(common)) {
            adjacent = false;
            break;
          }
        }
        if (!adjacent) continue;
        Ray nr{IntVec(hdim), common};
        for (std::size_t k = 0; k < hdim; ++k)
          nr.v[k] = side[p] * rays[q].v[k] - side[q] * rays[p].v[k];
        divide_by_content(nr.v);
        nr.zero.set(gi);
        created.push_back(std::move(nr));
      }
    }

    std::vector<Ray> kept;
    kept.reserve(rays.size() - neg.size() + created.size());
    for (std::size_t r = 0; r < rays.size(); ++r)
      if (side[r] >= 0) kept.push_back(std::move(rays[r]));
    for (Ray& nr : created) kept.push_back(std::move(nr));
    rays = std::move(kept);
    if (rays.size() > opts.max_rays)
      throw CapacityError("dd intermediate ray count " + std::to_string(rays.size()) +
                          " exceeds cap " + std::to_string(opts.max_rays));
  }

  // ray (y0, w): y0 + w.x >= 0  <=>  (-w).x <= y0
  std::vector<Halfspace> facets;
  facets.reserve(rays.size());
  for (const Ray& ray : rays) {
    Halfspace h;
    h.bound = ray.v[0];
    h.coeffs.resize(dim);
    for (std::size_t k = 0; k < dim; ++k) h.coeffs[k] = -ray.v[k + 1];
    facets.push_back(canonicalize(h));
  }
  std::sort(facets.begin(), facets.end());
  facets.erase(std::unique(facets.begin(), facets.end()), facets.end());
  return facets;
}

// solve basis . t = target for t, basis given column-wise with full column rank
RatVec solve_in_basis(const std::vector<RatVec>& basis, const RatVec& target) {
  const std::size_t rows = target.size();
  const std::size_t cols = basis.size();
  std::vector<RatVec> aug(rows, RatVec(cols + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) aug[r][c] = basis[c][r];
    aug[r][cols] = target[r];
  }
  std::size_t pivot_row = 0;
  std::vector<std::size_t> pivot_of_col(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    std::size_t sel = pivot_row;
    while (sel < rows && aug[sel][c] == 0) ++sel;
    if (sel == rows) throw SpecError("basis not full column rank");
    std::swap(aug[sel], aug[pivot_row]);
    const Rat pivot = aug[pivot_row][c];
    for (std::size_t k = c; k <= cols; ++k) aug[pivot_row][k] /= pivot;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == pivot_row || aug[r][c] == 0) continue;
      const Rat f = aug[r][c];
      for (std::size_t k = c; k <= cols; ++k) aug[r][k] -= f * aug[pivot_row][k];
    }
    pivot_of_col[c] = pivot_row;
    ++pivot_row;
  }
  RatVec t(cols);
  for (std::size_t c = 0; c < cols; ++c) t[c] = aug[pivot_of_col[c]][cols];
  return t;
}

// nullspace of the difference matrix, one equality per basis vector of it
std::vector<LinearEquality> hull_equalities(const std::vector<RatVec>& vertices) {
  const std::size_t dim = vertices[0].size();
  std::vector<RatVec> rows;
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    RatVec d(dim);
    for (std::size_t k = 0; k < dim; ++k) d[k] = vertices[i][k] - vertices[0][k];
    rows.push_back(std::move(d));
  }
  // row reduce, track pivot columns
  std::vector<std::size_t> pivot_cols;
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < dim && pivot_row < rows.size(); ++c) {
    std::size_t sel = pivot_row;
    while (sel < rows.size() && rows[sel][c] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[sel], rows[pivot_row]);
    const Rat pivot = rows[pivot_row][c];
    for (std::size_t k = 0; k < dim; ++k) rows[pivot_row][k] /= pivot;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == pivot_row || rows[r][c] == 0) continue;
      const Rat f = rows[r][c];
      for (std::size_t k = 0; k < dim; ++k) rows[r][k] -= f * rows[pivot_row][k];
    }
    pivot_cols.push_back(c);
    ++pivot_row;
  }
  std::vector<LinearEquality> eqs;
  std::vector<bool> is_pivot(dim, false);
  for (std::size_t c : pivot_cols) is_pivot[c] = true;
  for (std::size_t free_col = 0; free_col < dim; ++free_col) {
    if (is_pivot[free_col]) continue;
    RatVec a(dim, 0);
    a[free_col] = 1;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) a[pivot_cols[i]] = -rows[i][free_col];
    Rat rhs = 0;
    for (std::size_t k = 0; k < dim; ++k) rhs += a[k] * vertices[0][k];
    Halfspace h = canonicalize(a, rhs);
    eqs.push_back(LinearEquality{h.coeffs, h.bound});
  }
  return eqs;
}

}  // namespace

HPolytope dd_convert(const VPolytope& vp, const DDOptions& opts) {
  if (vp.vertices.empty()) throw SpecError("dd_convert: empty vertex list");
  for (const RatVec& v : vp.vertices)
    if (static_cast<int>(v.size()) != vp.dimension)
      throw SpecError("dd_convert: inconsistent vertex dimension");

  HPolytope out;
  out.affine_dimension = affine_dim(vp.vertices);
  if (out.affine_dimension == vp.dimension) {
    out.halfspaces = dd_core(vp.vertices, opts);
    return out;
  }

  // lower-dimensional: convert inside the affine hull
  out.equalities = hull_equalities(vp.vertices);
  out.base_point = vp.vertices[0];
  // greedy independent difference vectors as the hull basis
  std::vector<RatVec> diffs;
  for (std::size_t i = 1; i < vp.vertices.size(); ++i) {
    RatVec d(vp.dimension);
    for (int k = 0; k < vp.dimension; ++k) d[k] = vp.vertices[i][k] - vp.vertices[0][k];
    diffs.push_back(std::move(d));
    if (rational_rank(diffs) < static_cast<int>(diffs.size())) diffs.pop_back();
    if (static_cast<int>(diffs.size()) == out.affine_dimension) break;
  }
  out.basis = diffs;
  if (out.affine_dimension == 0) return out;  // a point: equalities only

  std::vector<RatVec> hull_points;
  hull_points.reserve(vp.vertices.size());
  for (const RatVec& v : vp.vertices) {
    RatVec d(vp.dimension);
    for (int k = 0; k < vp.dimension; ++k) d[k] = v[k] - vp.vertices[0][k];
    hull_points.push_back(solve_in_basis(out.basis, d));
  }
  out.halfspaces = dd_core(std::move(hull_points), opts);
  return out;
}

FacetCheck verify_facet(const Halfspace& h, const VPolytope& vp) {
  if (static_cast<int>(h.coeffs.size()) != vp.dimension)
    throw SpecError("verify_facet: dimension mismatch");
  FacetCheck check;
  check.valid = true;
  std::vector<RatVec> saturating;
  for (const RatVec& v : vp.vertices) {
    Rat value = 0;
    for (int k = 0; k < vp.dimension; ++k) value += Rat(h.coeffs[k]) * v[k];
    if (value > Rat(h.bound)) check.valid = false;
    if (value == Rat(h.bound)) saturating.push_back(v);
  }
  check.saturating_vertex_count = static_cast<int>(saturating.size());
  if (check.valid && !saturating.empty())
    check.is_facet = affine_dim(saturating) == affine_dim(vp.vertices) - 1;
  return check;
}

}  // namespace bell
