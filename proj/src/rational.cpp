#include "bell/rational.hpp"

#include <cstddef>

namespace bell {

int rational_rank(std::vector<RatVec> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows[0].size();
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < cols && pivot_row < rows.size(); ++col) {
    std::size_t sel = pivot_row;
    while (sel < rows.size() && rows[sel][col] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[sel], rows[pivot_row]);
    const Rat pivot = rows[pivot_row][col];
    for (std::size_t r = pivot_row + 1; r < rows.size(); ++r) {
      if (rows[r][col] == 0) continue;
      const Rat factor = rows[r][col] / pivot;
      for (std::size_t c = col; c < cols; ++c) rows[r][c] -= factor * rows[pivot_row][c];
    }
    ++pivot_row;
  }
  return static_cast<int>(pivot_row);
}

int affine_dim(const std::vector<RatVec>& points) {
  if (points.empty()) return -1;
  std::vector<RatVec> diffs;
  diffs.reserve(points.size() - 1);
  for (std::size_t i = 1; i < points.size(); ++i) {
    RatVec d(points[i].size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = points[i][k] - points[0][k];
    diffs.push_back(std::move(d));
  }
  return rational_rank(std::move(diffs));
}

std::string rat_to_string(const Rat& q) {
  return q.get_str();
}

Rat rat_from_string(const std::string& s) {
  Rat q(s);
  q.canonicalize();
  return q;
}

}  // namespace bell
