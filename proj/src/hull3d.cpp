#include "hull3d.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace hj::detail {

namespace {

using i128 = __int128;

i128 orient(const HullPoint& a, const HullPoint& b, const HullPoint& c,
            const HullPoint& d) {
    const i128 bx = b.x - a.x, by = b.y - a.y, bz = b.z - a.z;
    const i128 cx = c.x - a.x, cy = c.y - a.y, cz = c.z - a.z;
    const i128 dx = d.x - a.x, dy = d.y - a.y, dz = d.z - a.z;
    return bx * (cy * dz - cz * dy) - by * (cx * dz - cz * dx) +
           bz * (cx * dy - cy * dx);
}

struct Face {
    int a, b, c;
    bool dead = false;
    std::vector<int> conflicts;  // point indices strictly above this face
};

std::uint64_t edge_key(int u, int v) {
    return (std::uint64_t(std::uint32_t(u)) << 32) | std::uint32_t(v);
}

}  // namespace

std::vector<HullFace> convex_hull_3d(const std::vector<HullPoint>& pts) {
    const int n = static_cast<int>(pts.size());
    if (n < 4) throw std::runtime_error("convex_hull_3d: need >= 4 points");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    std::shuffle(order.begin(), order.end(), rng);

    // Initial tetrahedron: move four affinely independent points up front.
    {
        int k = 1;
        for (int i = k; i < n; ++i) {
            const auto& p = pts[order[i]];
            const auto& q = pts[order[0]];
            if (p.x != q.x || p.y != q.y || p.z != q.z) {
                std::swap(order[k], order[i]);
                ++k;
                break;
            }
        }
        if (k < 2) throw std::runtime_error("convex_hull_3d: all points equal");
        auto collinear = [&](const HullPoint& a, const HullPoint& b,
                             const HullPoint& c) {
            const i128 ux = b.x - a.x, uy = b.y - a.y, uz = b.z - a.z;
            const i128 vx = c.x - a.x, vy = c.y - a.y, vz = c.z - a.z;
            return uy * vz - uz * vy == 0 && uz * vx - ux * vz == 0 &&
                   ux * vy - uy * vx == 0;
        };
        for (int i = k; i < n; ++i) {
            if (!collinear(pts[order[0]], pts[order[1]], pts[order[i]])) {
                std::swap(order[k], order[i]);
                ++k;
                break;
            }
        }
        if (k < 3) throw std::runtime_error("convex_hull_3d: points collinear");
        for (int i = k; i < n; ++i) {
            if (orient(pts[order[0]], pts[order[1]], pts[order[2]],
                       pts[order[i]]) != 0) {
                std::swap(order[k], order[i]);
                ++k;
                break;
            }
        }
        if (k < 4) throw std::runtime_error("convex_hull_3d: points coplanar");
    }

    std::vector<Face> faces;
    std::unordered_map<std::uint64_t, int> edge_to_face;  // directed edges
    edge_to_face.reserve(size_t(n) * 8);

    auto add_face = [&](int a, int b, int c) {
        faces.push_back(Face{a, b, c});
        const int id = static_cast<int>(faces.size()) - 1;
        edge_to_face[edge_key(a, b)] = id;
        edge_to_face[edge_key(b, c)] = id;
        edge_to_face[edge_key(c, a)] = id;
        return id;
    };

    {
        const int p0 = order[0], p1 = order[1], p2 = order[2], p3 = order[3];
        if (orient(pts[p0], pts[p1], pts[p2], pts[p3]) < 0) {
            add_face(p0, p1, p2);
            add_face(p0, p2, p3);
            add_face(p0, p3, p1);
            add_face(p1, p3, p2);
        } else {
            add_face(p0, p2, p1);
            add_face(p0, p3, p2);
            add_face(p0, p1, p3);
            add_face(p1, p2, p3);
        }
    }

    std::vector<std::vector<int>> point_conflicts(n);
    {
        // Seed conflict lists.
        for (int i = 4; i < n; ++i) {
            const int p = order[i];
            for (int f = 0; f < 4; ++f) {
                if (orient(pts[faces[f].a], pts[faces[f].b], pts[faces[f].c],
                           pts[p]) > 0) {
                    faces[f].conflicts.push_back(p);
                    point_conflicts[p].push_back(f);
                }
            }
        }
    }

    std::vector<int> point_pos(n, -1);  // insertion rank in `order`
    for (int i = 0; i < n; ++i) point_pos[order[i]] = i;

    std::vector<char> visible_mark;
    for (int step = 4; step < n; ++step) {
        const int p = order[step];

        // Visible faces: live entries of p's conflict list.
        std::vector<int> visible;
        for (int f : point_conflicts[p]) {
            if (!faces[f].dead) visible.push_back(f);
        }
        std::sort(visible.begin(), visible.end());
        visible.erase(std::unique(visible.begin(), visible.end()),
                      visible.end());
        if (visible.empty()) continue;  // inside or on the current hull

        visible_mark.assign(faces.size(), 0);
        for (int f : visible) visible_mark[f] = 1;

        // Horizon: directed edges of visible faces whose twin face survives.
        struct HorizonEdge {
            int u, v;
            int inside_face;   // the visible face owning (u, v)
            int outside_face;  // the surviving face owning (v, u)
        };
        std::vector<HorizonEdge> horizon;
        for (int f : visible) {
            const int vs[3] = {faces[f].a, faces[f].b, faces[f].c};
            for (int e = 0; e < 3; ++e) {
                const int u = vs[e], v = vs[(e + 1) % 3];
                const auto it = edge_to_face.find(edge_key(v, u));
                if (it == edge_to_face.end()) continue;
                const int g = it->second;
                if (!faces[g].dead && !visible_mark[g]) {
                    horizon.push_back({u, v, f, g});
                }
            }
        }

        for (int f : visible) {
            faces[f].dead = true;
            edge_to_face.erase(edge_key(faces[f].a, faces[f].b));
            edge_to_face.erase(edge_key(faces[f].b, faces[f].c));
            edge_to_face.erase(edge_key(faces[f].c, faces[f].a));
        }

        for (const auto& he : horizon) {
            const int nf = add_face(he.u, he.v, p);
            // Conflict candidates come from the two incident former faces.
            auto& out = faces[nf].conflicts;
            for (int src : {he.inside_face, he.outside_face}) {
                for (int q : faces[src].conflicts) {
                    if (point_pos[q] <= step) continue;
                    if (!out.empty() && out.back() == q) continue;
                    if (std::find(out.begin(), out.end(), q) != out.end())
                        continue;
                    if (orient(pts[he.u], pts[he.v], pts[p], pts[q]) > 0) {
                        out.push_back(q);
                        point_conflicts[q].push_back(nf);
                    }
                }
            }
        }

        for (int f : visible) {
            faces[f].conflicts.clear();
            faces[f].conflicts.shrink_to_fit();
        }
    }

    std::vector<HullFace> out;
    for (const auto& f : faces) {
        if (!f.dead) out.push_back({f.a, f.b, f.c});
    }
    return out;
}

}  // namespace hj::detail
