#include "mmgen/geometry/scene.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <Eigen/Geometry>
#include <json.hpp>

#include "mmgen/core/constants.hpp"
#include "mmgen/core/errors.hpp"
#include "mmgen/geometry/mesh_io.hpp"

namespace mmgen {

namespace {

Eigen::Matrix3d rotation_from_deg(const Vec3& deg) {
    return (Eigen::AngleAxisd(deg_to_rad(deg.z()), Vec3::UnitZ()) *
            Eigen::AngleAxisd(deg_to_rad(deg.y()), Vec3::UnitY()) *
            Eigen::AngleAxisd(deg_to_rad(deg.x()), Vec3::UnitX()))
        .toRotationMatrix();
}

// Grid of nu x nv cells on origin + [0,1]U + [0,1]V, normal along U x V.
void add_panel(TriangleMesh& mesh, const Vec3& origin, const Vec3& u, const Vec3& v, int nu, int nv) {
    const auto base = static_cast<std::uint32_t>(mesh.vertices.size());
    for (int j = 0; j <= nv; ++j) {
        for (int i = 0; i <= nu; ++i) {
            mesh.vertices.push_back(origin + u * (static_cast<double>(i) / nu) + v * (static_cast<double>(j) / nv));
        }
    }
    const auto stride = static_cast<std::uint32_t>(nu + 1);
    for (int j = 0; j < nv; ++j) {
        for (int i = 0; i < nu; ++i) {
            const std::uint32_t a = base + static_cast<std::uint32_t>(j) * stride + static_cast<std::uint32_t>(i);
            const std::uint32_t b = a + 1;
            const std::uint32_t c = a + stride + 1;
            const std::uint32_t d = a + stride;
            mesh.faces.push_back({a, b, c});
            mesh.faces.push_back({a, c, d});
        }
    }
}

TriangleMesh primitive_mesh(const SceneObject& obj) {
    TriangleMesh mesh;
    const int nu = obj.subdivisions[0];
    const int nv = obj.subdivisions[1];
    switch (obj.kind) {
        case PrimitiveKind::rectangle: {
            const double w = obj.size.x();
            const double h = obj.size.y();
            add_panel(mesh, {-w / 2, 0.0, -h / 2}, {w, 0.0, 0.0}, {0.0, 0.0, h}, nu, nv);
            break;
        }
        case PrimitiveKind::box: {
            const Vec3 half = obj.size / 2.0;
            for (int axis = 0; axis < 3; ++axis) {
                const int a1 = (axis + 1) % 3;
                const int a2 = (axis + 2) % 3;
                for (int sign : {1, -1}) {
                    Vec3 u = Vec3::Zero();
                    Vec3 v = Vec3::Zero();
                    u[a1] = obj.size[a1];
                    v[a2] = obj.size[a2];
                    if (sign < 0) std::swap(u, v);  // U x V must point along sign * e_axis
                    Vec3 origin = -half;
                    origin[axis] = sign * half[axis];
                    add_panel(mesh, origin, u, v, nu, nv);
                }
            }
            break;
        }
        case PrimitiveKind::dihedral: {
            const double w = obj.size.x();
            const double h = obj.size.y();
            const double half = deg_to_rad(obj.angle_deg) / 2.0;
            const Vec3 dir_a(-std::sin(half), -std::cos(half), 0.0);
            const Vec3 dir_b(std::sin(half), -std::cos(half), 0.0);
            const Vec3 up(0.0, 0.0, h);
            add_panel(mesh, {0.0, 0.0, -h / 2}, up, w * dir_a, nv, nu);
            add_panel(mesh, {0.0, 0.0, -h / 2}, w * dir_b, up, nu, nv);
            break;
        }
        case PrimitiveKind::mesh: break;
    }
    return mesh;
}

Vec3 read_vec3(const nlohmann::json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 3) throw ConfigError(what + " must be an array of 3 numbers");
    Vec3 v;
    for (int i = 0; i < 3; ++i) {
        if (!j[i].is_number()) throw ConfigError(what + " must be an array of 3 numbers");
        v[i] = j[i].get<double>();
    }
    if (!v.allFinite()) throw ConfigError(what + " must be finite");
    return v;
}

PrimitiveKind parse_kind(const std::string& s) {
    if (s == "rectangle") return PrimitiveKind::rectangle;
    if (s == "box") return PrimitiveKind::box;
    if (s == "dihedral") return PrimitiveKind::dihedral;
    throw ConfigError("unknown primitive '" + s + "'");
}

const char* kind_name(PrimitiveKind k) {
    switch (k) {
        case PrimitiveKind::rectangle: return "rectangle";
        case PrimitiveKind::box: return "box";
        case PrimitiveKind::dihedral: return "dihedral";
        case PrimitiveKind::mesh: return "mesh";
    }
    return "?";
}

}  // namespace

Vec3 Pose::apply(const Vec3& local) const { return rotation_from_deg(rotation_deg) * local + translation; }

SceneSpec parse_scene_spec(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object() || !j.contains("objects") || !j["objects"].is_array()) {
        throw ConfigError("scene spec needs an 'objects' array");
    }
    SceneSpec spec;
    std::set<std::string> names;
    for (const auto& o : j["objects"]) {
        SceneObject obj;
        try {
            obj.name = o.at("name").get<std::string>();
            obj.material = o.at("material").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("scene object: ") + e.what());
        }
        if (!names.insert(obj.name).second) throw ConfigError("duplicate scene object name '" + obj.name + "'");
        const std::string where = "scene object '" + obj.name + "'";
        if (o.contains("mesh")) {
            obj.kind = PrimitiveKind::mesh;
            obj.mesh_path = o["mesh"].get<std::string>();
            if (obj.mesh_path.is_relative()) obj.mesh_path = base_dir / obj.mesh_path;
        } else if (o.contains("primitive")) {
            obj.kind = parse_kind(o["primitive"].get<std::string>());
            if (!o.contains("size") || !o["size"].is_array()) throw ConfigError(where + ": missing size");
            const auto& size = o["size"];
            const std::size_t need = obj.kind == PrimitiveKind::box ? 3 : 2;
            if (size.size() != need) throw ConfigError(where + ": size needs " + std::to_string(need) + " values");
            obj.size = Vec3::Zero();
            for (std::size_t i = 0; i < need; ++i) {
                if (!size[i].is_number() || !(size[i].get<double>() > 0.0)) {
                    throw ConfigError(where + ": size entries must be positive numbers");
                }
                obj.size[static_cast<int>(i)] = size[i].get<double>();
            }
            obj.angle_deg = o.value("angle_deg", 90.0);
            if (!(obj.angle_deg > 0.0 && obj.angle_deg < 180.0)) throw ConfigError(where + ": angle_deg out of (0,180)");
            if (o.contains("subdivisions")) {
                const auto& s = o["subdivisions"];
                if (s.is_number_integer()) {
                    obj.subdivisions = {s.get<int>(), s.get<int>()};
                } else if (s.is_array() && s.size() == 2) {
                    obj.subdivisions = {s[0].get<int>(), s[1].get<int>()};
                } else {
                    throw ConfigError(where + ": subdivisions must be an integer or [nu, nv]");
                }
                if (obj.subdivisions[0] < 1 || obj.subdivisions[1] < 1) {
                    throw ConfigError(where + ": subdivisions must be >= 1");
                }
            }
        } else {
            throw ConfigError(where + ": needs 'primitive' or 'mesh'");
        }
        if (o.contains("pose")) {
            const auto& p = o["pose"];
            if (!p.is_object()) throw ConfigError(where + ": malformed pose");
            if (p.contains("translation")) obj.pose.translation = read_vec3(p["translation"], where + " translation");
            if (p.contains("rotation_deg")) obj.pose.rotation_deg = read_vec3(p["rotation_deg"], where + " rotation_deg");
        }
        spec.objects.push_back(std::move(obj));
    }
    return spec;
}

SceneSpec load_scene_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scene spec " + path.string());
    try {
        return parse_scene_spec(nlohmann::json::parse(in), path.parent_path());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

nlohmann::json scene_spec_to_json(const SceneSpec& spec) {
    nlohmann::json out;
    out["objects"] = nlohmann::json::array();
    for (const auto& obj : spec.objects) {
        nlohmann::json o;
        o["name"] = obj.name;
        o["material"] = obj.material;
        if (obj.kind == PrimitiveKind::mesh) {
            o["mesh"] = obj.mesh_path.string();
        } else {
            o["primitive"] = kind_name(obj.kind);
            if (obj.kind == PrimitiveKind::box) {
                o["size"] = {obj.size.x(), obj.size.y(), obj.size.z()};
            } else {
                o["size"] = {obj.size.x(), obj.size.y()};
            }
            if (obj.kind == PrimitiveKind::dihedral) o["angle_deg"] = obj.angle_deg;
            o["subdivisions"] = {obj.subdivisions[0], obj.subdivisions[1]};
        }
        o["pose"]["translation"] = {obj.pose.translation.x(), obj.pose.translation.y(), obj.pose.translation.z()};
        o["pose"]["rotation_deg"] = {obj.pose.rotation_deg.x(), obj.pose.rotation_deg.y(), obj.pose.rotation_deg.z()};
        out["objects"].push_back(o);
    }
    return out;
}

TriangleMesh build_primitive_scene(const SceneSpec& spec, const MaterialTable& table) {
    TriangleMesh scene;
    for (const auto& obj : spec.objects) {
        TriangleMesh part;
        if (obj.kind == PrimitiveKind::mesh) {
            part = load_mesh(obj.mesh_path, table, obj.material);
        } else {
            part = primitive_mesh(obj);
            part.materials = {table.at(obj.material)};
            drop_degenerate_faces(part);
        }
        if (!obj.pose.translation.allFinite() || !obj.pose.rotation_deg.allFinite()) {
            throw ConfigError("scene object '" + obj.name + "': malformed pose");
        }
        for (auto& v : part.vertices) v = obj.pose.apply(v);
        scene.append(part);
    }
    return scene;
}

TriangleMesh make_ellipsoid(const Vec3& center, const Vec3& radii, int rings, int segments, const Material& material) {
    TriangleMesh mesh;
    mesh.materials = {material};
    const auto r = static_cast<std::uint32_t>(rings);
    const auto s = static_cast<std::uint32_t>(segments);
    mesh.vertices.push_back(center + Vec3(0, 0, radii.z()));
    for (std::uint32_t i = 1; i <= r; ++i) {
        const double theta = kPi * i / (r + 1);
        for (std::uint32_t j = 0; j < s; ++j) {
            const double phi = kTwoPi * j / s;
            mesh.vertices.push_back(center + Vec3(radii.x() * std::sin(theta) * std::cos(phi),
                                                  radii.y() * std::sin(theta) * std::sin(phi),
                                                  radii.z() * std::cos(theta)));
        }
    }
    mesh.vertices.push_back(center - Vec3(0, 0, radii.z()));
    const std::uint32_t south = 1 + r * s;
    auto ring = [s](std::uint32_t i, std::uint32_t j) { return 1 + (i - 1) * s + (j % s); };
    for (std::uint32_t j = 0; j < s; ++j) mesh.faces.push_back({0, ring(1, j), ring(1, j + 1)});
    for (std::uint32_t i = 1; i < r; ++i) {
        for (std::uint32_t j = 0; j < s; ++j) {
            mesh.faces.push_back({ring(i, j), ring(i + 1, j), ring(i + 1, j + 1)});
            mesh.faces.push_back({ring(i, j), ring(i + 1, j + 1), ring(i, j + 1)});
        }
    }
    for (std::uint32_t j = 0; j < s; ++j) mesh.faces.push_back({south, ring(r, j + 1), ring(r, j)});
    return mesh;
}

TriangleMesh make_mannequin(const Vec3& feet, double phase_rad, double swing_deg, int rings, int segments) {
    const Material skin = human_material();
    TriangleMesh body;
    body.append(make_ellipsoid(feet + Vec3(0, 0, 1.25), {0.17, 0.11, 0.30}, rings, segments, skin));
    body.append(make_ellipsoid(feet + Vec3(0, 0, 1.68), {0.09, 0.10, 0.11}, rings, segments, skin));
    // Limbs hang from a pivot and swing about the x axis (in the walking plane).
    const double swing = deg_to_rad(swing_deg) * std::sin(phase_rad);
    auto limb = [&](const Vec3& pivot, const Vec3& radii, double angle) {
        TriangleMesh part = make_ellipsoid(Vec3::Zero(), radii, rings, segments, skin);
        const Eigen::Matrix3d rot = Eigen::AngleAxisd(angle, Vec3::UnitX()).toRotationMatrix();
        for (auto& v : part.vertices) v = feet + pivot + rot * (v - Vec3(0, 0, radii.z()));
        body.append(part);
    };
    limb({-0.09, 0.0, 0.92}, {0.07, 0.07, 0.44}, swing);
    limb({0.09, 0.0, 0.92}, {0.07, 0.07, 0.44}, -swing);
    limb({-0.22, 0.0, 1.50}, {0.045, 0.045, 0.33}, -0.8 * swing);
    limb({0.22, 0.0, 1.50}, {0.045, 0.045, 0.33}, 0.8 * swing);
    return body;
}

MeshSequence make_walk_sequence(const WalkParams& params) {
    MeshSequence seq;
    seq.frame_rate_hz = params.frame_rate_hz;
    for (std::size_t f = 0; f < params.frames; ++f) {
        const double t = static_cast<double>(f) / params.frame_rate_hz;
        TriangleMesh m = make_mannequin(params.start + params.velocity * t, kTwoPi * params.stride_hz * t,
                                        params.swing_deg, params.rings, params.segments);
        if (f == 0) {
            seq.topology = m;
            seq.topology.vertices.clear();
        }
        seq.frames.push_back(std::move(m.vertices));
    }
    seq.validate();
    return seq;
}

}  // namespace mmgen
