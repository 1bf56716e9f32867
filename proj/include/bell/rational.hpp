#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace bell {

using Rat = mpq_class;
using Int = mpz_class;
using RatVec = std::vector<Rat>;
using IntVec = std::vector<Int>;

// rank over Q; takes a copy because elimination destroys the rows
int rational_rank(std::vector<RatVec> rows);

// affine dimension of a point set: rank of differences from the first point
int affine_dim(const std::vector<RatVec>& points);

std::string rat_to_string(const Rat& q);
Rat rat_from_string(const std::string& s);

}  // namespace bell
