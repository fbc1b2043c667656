#include "mmgen/geometry/mesh.hpp"

#include <unordered_map>

#include <Eigen/Geometry>

#include "mmgen/core/errors.hpp"

namespace mmgen {

const Material& TriangleMesh::material_of(std::size_t face) const {
    if (face_material.empty()) return materials.at(0);
    return materials.at(face_material.at(face));
}

void TriangleMesh::validate() const {
    const auto n = vertices.size();
    for (std::size_t f = 0; f < faces.size(); ++f) {
        for (auto idx : faces[f]) {
            if (idx >= n) {
                throw ConfigError("face " + std::to_string(f) + " references vertex " + std::to_string(idx) +
                                  " of " + std::to_string(n));
            }
        }
    }
    if (!faces.empty() && materials.empty()) throw ConfigError("mesh has faces but no material");
    if (!face_material.empty()) {
        if (face_material.size() != faces.size()) throw ConfigError("face_material size mismatch");
        for (auto m : face_material) {
            if (m >= materials.size()) throw ConfigError("face material slot out of range");
        }
    }
}

double TriangleMesh::total_area() const {
    double sum = 0.0;
    for (const auto& f : faces) sum += triangle_area(vertices[f[0]], vertices[f[1]], vertices[f[2]]);
    return sum;
}

void TriangleMesh::append(const TriangleMesh& other) {
    if (other.faces.empty()) return;
    std::vector<std::uint32_t> remap(other.materials.size());
    for (std::size_t i = 0; i < other.materials.size(); ++i) {
        std::uint32_t slot = static_cast<std::uint32_t>(materials.size());
        for (std::size_t j = 0; j < materials.size(); ++j) {
            if (materials[j].name == other.materials[i].name) {
                slot = static_cast<std::uint32_t>(j);
                break;
            }
        }
        if (slot == materials.size()) materials.push_back(other.materials[i]);
        remap[i] = slot;
    }
    if (face_material.empty() && !faces.empty()) face_material.assign(faces.size(), 0);
    const auto base = static_cast<std::uint32_t>(vertices.size());
    vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
    for (std::size_t f = 0; f < other.faces.size(); ++f) {
        const auto& src = other.faces[f];
        faces.push_back({src[0] + base, src[1] + base, src[2] + base});
        const std::uint32_t slot = other.face_material.empty() ? 0 : other.face_material[f];
        face_material.push_back(remap.at(slot));
    }
    dropped_degenerate += other.dropped_degenerate;
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) { return 0.5 * (b - a).cross(c - a).norm(); }

double incircle_radius(const Vec3& a, const Vec3& b, const Vec3& c) {
    const double perimeter = (b - a).norm() + (c - b).norm() + (a - c).norm();
    if (perimeter <= 0.0) return 0.0;
    return 2.0 * triangle_area(a, b, c) / perimeter;
}

void drop_degenerate_faces(TriangleMesh& mesh) {
    std::size_t keep = 0;
    const bool has_slots = !mesh.face_material.empty();
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const auto& face = mesh.faces[f];
        const double area = triangle_area(mesh.vertices[face[0]], mesh.vertices[face[1]], mesh.vertices[face[2]]);
        if (!(area >= kDegenerateAreaM2)) {
            ++mesh.dropped_degenerate;
            continue;
        }
        mesh.faces[keep] = face;
        if (has_slots) mesh.face_material[keep] = mesh.face_material[f];
        ++keep;
    }
    mesh.faces.resize(keep);
    if (has_slots) mesh.face_material.resize(keep);
}

std::vector<ReflectionPoint> facet_attributes(const TriangleMesh& topology, std::span<const Vec3> vertices) {
    std::vector<ReflectionPoint> out;
    out.reserve(topology.faces.size());
    for (std::size_t f = 0; f < topology.faces.size(); ++f) {
        const auto& face = topology.faces[f];
        const Vec3& a = vertices[face[0]];
        const Vec3& b = vertices[face[1]];
        const Vec3& c = vertices[face[2]];
        const Vec3 cross = (b - a).cross(c - a);
        const double norm = cross.norm();
        ReflectionPoint p;
        p.centroid = (a + b + c) / 3.0;
        p.area_m2 = 0.5 * norm;
        p.unit_normal = norm > 0.0 ? Vec3(cross / norm) : Vec3::UnitZ();
        p.material = topology.material_of(f);
        p.source_face_id = static_cast<std::uint32_t>(f);
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<ReflectionPoint> facet_attributes(const TriangleMesh& mesh) {
    return facet_attributes(mesh, mesh.vertices);
}

std::vector<double> insphere_radii(const TriangleMesh& topology, std::span<const Vec3> vertices) {
    std::vector<double> out;
    out.reserve(topology.faces.size());
    for (const auto& f : topology.faces) out.push_back(incircle_radius(vertices[f[0]], vertices[f[1]], vertices[f[2]]));
    return out;
}

std::vector<double> insphere_radii(const TriangleMesh& mesh) { return insphere_radii(mesh, mesh.vertices); }

}  // namespace mmgen
