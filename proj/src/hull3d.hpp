#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace hj::detail {

struct HullPoint {
    std::int64_t x, y, z;
};

struct HullFace {
    int a, b, c;  // indices into the point array, outward-oriented
};

/// Convex hull of 3D points with exact orientation predicates (products fit
/// in 128-bit integers for coordinates below ~2^40). Randomized incremental
/// insertion with conflict lists. Points on a face plane are not treated as
/// visible, so the returned triangulation carries only extreme points.
/// Requires at least four affinely independent points.
std::vector<HullFace> convex_hull_3d(const std::vector<HullPoint>& pts);

}  // namespace hj::detail
