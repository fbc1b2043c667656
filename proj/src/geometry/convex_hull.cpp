#include "mmgen/geometry/convex_hull.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <unordered_map>

namespace mmgen {

namespace {

using Vec3 = Eigen::Vector3d;
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct HullFace {
    std::array<std::size_t, 3> v{};
    // neighbor[i] shares the edge v[i] -> v[(i+1)%3]
    std::array<std::size_t, 3> neighbor{kNone, kNone, kNone};
    Vec3 normal = Vec3::Zero();
    double offset = 0.0;
    std::vector<std::size_t> outside;
    bool alive = true;
    std::size_t visit_mark = 0;
};

class QuickHull {
public:
    QuickHull(std::span<const Vec3> points) : pts_(points) {}

    ConvexHull run() {
        ConvexHull result;
        if (pts_.size() < 4) return result;
        compute_tolerance();
        faces_.reserve(8 * pts_.size() + 16);
        std::array<std::size_t, 4> simplex{};
        if (!initial_simplex(simplex)) return result;
        build_simplex(simplex);
        expand();
        result.full_dimensional = true;
        std::vector<char> on_hull(pts_.size(), 0);
        for (const auto& f : faces_) {
            if (!f.alive) continue;
            result.faces.push_back(f.v);
            for (auto i : f.v) on_hull[i] = 1;
        }
        for (std::size_t i = 0; i < pts_.size(); ++i) {
            if (on_hull[i]) result.vertices.push_back(i);
        }
        return result;
    }

private:
    void compute_tolerance() {
        Vec3 max_abs = Vec3::Zero();
        for (const auto& p : pts_) max_abs = max_abs.cwiseMax(p.cwiseAbs());
        eps_ = 3.0 * std::numeric_limits<double>::epsilon() * (max_abs.x() + max_abs.y() + max_abs.z()) * 16.0;
    }

    bool initial_simplex(std::array<std::size_t, 4>& s) const {
        // Extreme points along each axis; the farthest pair seeds the simplex.
        std::array<std::size_t, 6> ext{};
        ext.fill(0);
        for (std::size_t i = 1; i < pts_.size(); ++i) {
            for (int a = 0; a < 3; ++a) {
                if (pts_[i][a] < pts_[ext[2 * a]][a]) ext[2 * a] = i;
                if (pts_[i][a] > pts_[ext[2 * a + 1]][a]) ext[2 * a + 1] = i;
            }
        }
        double best = -1.0;
        for (std::size_t i = 0; i < 6; ++i) {
            for (std::size_t j = i + 1; j < 6; ++j) {
                const double d = (pts_[ext[i]] - pts_[ext[j]]).squaredNorm();
                if (d > best) {
                    best = d;
                    s[0] = ext[i];
                    s[1] = ext[j];
                }
            }
        }
        if (best <= eps_ * eps_) return false;
        const Vec3 a = pts_[s[0]];
        const Vec3 dir = (pts_[s[1]] - a).normalized();
        best = -1.0;
        for (std::size_t i = 0; i < pts_.size(); ++i) {
            const Vec3 d = pts_[i] - a;
            const double dist = (d - d.dot(dir) * dir).squaredNorm();
            if (dist > best) {
                best = dist;
                s[2] = i;
            }
        }
        if (best <= eps_ * eps_) return false;
        const Vec3 n = (pts_[s[1]] - a).cross(pts_[s[2]] - a).normalized();
        best = -1.0;
        for (std::size_t i = 0; i < pts_.size(); ++i) {
            const double dist = std::abs(n.dot(pts_[i] - a));
            if (dist > best) {
                best = dist;
                s[3] = i;
            }
        }
        return best > eps_;
    }

    std::size_t add_face(std::size_t a, std::size_t b, std::size_t c) {
        HullFace f;
        f.v = {a, b, c};
        const Vec3 n = (pts_[b] - pts_[a]).cross(pts_[c] - pts_[a]);
        const double len = n.norm();
        f.normal = len > 0.0 ? Vec3(n / len) : Vec3::Zero();
        f.offset = f.normal.dot(pts_[a]);
        faces_.push_back(std::move(f));
        return faces_.size() - 1;
    }

    [[nodiscard]] double distance(const HullFace& f, std::size_t p) const {
        return f.normal.dot(pts_[p]) - f.offset;
    }

    static std::uint64_t edge_key(std::size_t a, std::size_t b) {
        return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
    }

    void build_simplex(const std::array<std::size_t, 4>& s) {
        const Vec3 centroid = (pts_[s[0]] + pts_[s[1]] + pts_[s[2]] + pts_[s[3]]) / 4.0;
        const std::array<std::array<std::size_t, 3>, 4> tri = {{
            {s[0], s[1], s[2]}, {s[0], s[3], s[1]}, {s[0], s[2], s[3]}, {s[1], s[3], s[2]},
        }};
        for (auto t : tri) {
            const Vec3 n = (pts_[t[1]] - pts_[t[0]]).cross(pts_[t[2]] - pts_[t[0]]);
            if (n.dot(pts_[t[0]] - centroid) < 0.0) std::swap(t[1], t[2]);
            add_face(t[0], t[1], t[2]);
        }
        // Link neighbours through directed edges.
        std::unordered_map<std::uint64_t, std::size_t> edges;
        for (std::size_t f = 0; f < 4; ++f) {
            for (int i = 0; i < 3; ++i) edges[edge_key(faces_[f].v[i], faces_[f].v[(i + 1) % 3])] = f;
        }
        for (std::size_t f = 0; f < 4; ++f) {
            for (int i = 0; i < 3; ++i) {
                faces_[f].neighbor[i] = edges.at(edge_key(faces_[f].v[(i + 1) % 3], faces_[f].v[i]));
            }
        }
        std::vector<char> in_simplex(pts_.size(), 0);
        for (auto i : s) in_simplex[i] = 1;
        std::vector<std::size_t> all;
        all.reserve(pts_.size());
        for (std::size_t i = 0; i < pts_.size(); ++i) {
            if (!in_simplex[i]) all.push_back(i);
        }
        assign(all, {0, 1, 2, 3});
        for (std::size_t f = 0; f < 4; ++f) {
            if (!faces_[f].outside.empty()) queue_.push_back(f);
        }
    }

    // Each point goes to the face it is farthest above; interior points are dropped.
    void assign(const std::vector<std::size_t>& points, const std::vector<std::size_t>& candidates) {
        for (auto p : points) {
            double best = eps_;
            std::size_t best_face = kNone;
            for (auto f : candidates) {
                const double d = distance(faces_[f], p);
                if (d > best) {
                    best = d;
                    best_face = f;
                }
            }
            if (best_face != kNone) faces_[best_face].outside.push_back(p);
        }
    }

    void expand() {
        std::size_t mark = 0;
        std::vector<std::size_t> visible;
        std::vector<std::size_t> stack;
        struct HorizonEdge {
            std::size_t a, b, outer;
        };
        std::vector<HorizonEdge> horizon;
        std::vector<std::size_t> orphans;
        std::vector<std::size_t> created;
        while (!queue_.empty()) {
            const std::size_t fi = queue_.front();
            queue_.pop_front();
            if (!faces_[fi].alive || faces_[fi].outside.empty()) continue;

            // Eye point: farthest outside point of this face (lowest index on ties).
            std::size_t eye = kNone;
            double far = -1.0;
            for (auto p : faces_[fi].outside) {
                const double d = distance(faces_[fi], p);
                if (d > far) {
                    far = d;
                    eye = p;
                }
            }

            ++mark;
            visible.clear();
            stack.assign(1, fi);
            faces_[fi].visit_mark = mark;
            while (!stack.empty()) {
                const std::size_t f = stack.back();
                stack.pop_back();
                visible.push_back(f);
                for (auto nb : faces_[f].neighbor) {
                    if (faces_[nb].visit_mark == mark) continue;
                    if (distance(faces_[nb], eye) > eps_) {
                        faces_[nb].visit_mark = mark;
                        stack.push_back(nb);
                    }
                }
            }
            horizon.clear();
            for (auto f : visible) {
                for (int i = 0; i < 3; ++i) {
                    const std::size_t nb = faces_[f].neighbor[i];
                    if (faces_[nb].visit_mark != mark) {
                        horizon.push_back({faces_[f].v[i], faces_[f].v[(i + 1) % 3], nb});
                    }
                }
            }

            // The horizon must be a simple loop; otherwise tolerance issues
            // made the visible region non-manifold and the eye is skipped.
            bool simple = true;
            for (std::size_t h = 0; h < horizon.size() && simple; ++h) {
                for (std::size_t k = h + 1; k < horizon.size(); ++k) {
                    if (horizon[k].a == horizon[h].a) {
                        simple = false;
                        break;
                    }
                }
            }
            if (!simple || horizon.size() < 3) {
                auto& out = faces_[fi].outside;
                out.erase(std::find(out.begin(), out.end(), eye));
                if (!out.empty()) queue_.push_front(fi);
                continue;
            }

            orphans.clear();
            for (auto f : visible) {
                faces_[f].alive = false;
                for (auto p : faces_[f].outside) {
                    if (p != eye) orphans.push_back(p);
                }
                faces_[f].outside.clear();
                faces_[f].outside.shrink_to_fit();
            }

            created.assign(horizon.size(), kNone);
            for (std::size_t h = 0; h < horizon.size(); ++h) {
                const auto& e = horizon[h];
                const std::size_t nf = add_face(e.a, e.b, eye);
                created[h] = nf;
                faces_[nf].neighbor[0] = e.outer;
                auto& outer = faces_[e.outer];
                for (int i = 0; i < 3; ++i) {
                    if (outer.v[i] == e.b && outer.v[(i + 1) % 3] == e.a) outer.neighbor[i] = nf;
                }
            }
            for (std::size_t h = 0; h < horizon.size(); ++h) {
                const auto& e = horizon[h];
                auto& f = faces_[created[h]];
                // edge b -> eye is shared with the face starting at b (edge eye -> b)
                for (std::size_t k = 0; k < horizon.size(); ++k) {
                    if (horizon[k].a == e.b) {
                        f.neighbor[1] = created[k];
                        break;
                    }
                }
                // edge eye -> a is shared with the face ending at a
                f.neighbor[2] = kNone;
            }
            for (std::size_t h = 0; h < horizon.size(); ++h) {
                const std::size_t next = faces_[created[h]].neighbor[1];
                faces_[next].neighbor[2] = created[h];
            }
            std::sort(orphans.begin(), orphans.end());
            assign(orphans, created);
            for (auto nf : created) {
                if (!faces_[nf].outside.empty()) queue_.push_back(nf);
            }
        }
    }

    std::span<const Vec3> pts_;
    double eps_ = 0.0;
    std::vector<HullFace> faces_;
    std::deque<std::size_t> queue_;
};

}  // namespace

ConvexHull convex_hull(std::span<const Eigen::Vector3d> points) { return QuickHull(points).run(); }

}  // namespace mmgen
