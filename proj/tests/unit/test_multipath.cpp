#include <doctest.h>

#include <optional>

#include "mmgen/core/constants.hpp"
#include "mmgen/dsp/signatures.hpp"
#include "mmgen/geometry/scene.hpp"
#include "mmgen/multipath/hrpp.hpp"
#include "mmgen/reflectance/reflectance.hpp"
#include "test_support.hpp"

using namespace mmgen;

namespace {

struct Surfaces {
    std::vector<ReflectionPoint> points;
    std::vector<double> radii;
};

Surfaces surfaces_of(const TriangleMesh& mesh, std::uint32_t first_id = 0) {
    Surfaces s;
    s.points = facet_attributes(mesh);
    for (auto& p : s.points) p.source_face_id += first_id;
    s.radii = insphere_radii(mesh);
    return s;
}

TriangleMesh dihedral(const Vec3& hinge, double size, int subdivisions, double angle_deg = 90.0) {
    SceneSpec spec;
    SceneObject o;
    o.name = "corner";
    o.kind = PrimitiveKind::dihedral;
    o.size = {size, size, 0.0};
    o.angle_deg = angle_deg;
    o.subdivisions = {subdivisions, subdivisions};
    o.material = "concrete";
    o.pose.translation = hinge;
    spec.objects.push_back(o);
    return build_primitive_scene(spec, MaterialTable::defaults());
}

TriangleMesh rectangle(const std::string& name, const Vec3& at, const Vec3& rot, double w, double h, int sub) {
    SceneSpec spec;
    SceneObject o;
    o.name = name;
    o.size = {w, h, 0.0};
    o.pose.translation = at;
    o.pose.rotation_deg = rot;
    o.subdivisions = {sub, sub};
    o.material = "concrete";
    spec.objects.push_back(o);
    return build_primitive_scene(spec, MaterialTable::defaults());
}

struct BruteHit {
    std::uint32_t second;
    double k;
};

/// Exhaustive nearest-hit search over every candidate pair.
std::vector<std::optional<BruteHit>> brute_force(const std::vector<ReflectionPoint>& pts,
                                                 const std::vector<double>& radii, double cone_deg) {
    const double cos_cone = std::cos(deg_to_rad(cone_deg));
    std::vector<std::optional<BruteHit>> out(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec3 di = pts[i].centroid.normalized();
        const Vec3& n1 = pts[i].unit_normal;
        if (di.dot(n1) >= 0.0) continue;
        const Vec3 ds = (di - 2.0 * di.dot(n1) * n1).normalized();
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (j == i || ds.dot(pts[j].unit_normal) >= 0.0) continue;
            const Vec3 delta = pts[j].centroid - pts[i].centroid;
            if (delta.dot(ds) < delta.norm() * cos_cone) continue;
            const auto k = ray_hits_insphere(pts[i].centroid, ds, pts[j].centroid, radii[j]);
            if (!k) continue;
            if (!out[i] || *k < out[i]->k) out[i] = BruteHit{static_cast<std::uint32_t>(j), *k};
        }
    }
    return out;
}

}  // namespace

TEST_CASE("ray through a sphere centre") {
    const auto k = ray_hits_insphere({0, 0, 0}, {1, 0, 0}, {3, 0, 0}, 1.0);
    REQUIRE(k.has_value());
    CHECK(*k == doctest::Approx(2.0));
    CHECK_FALSE(ray_hits_insphere({0, 0, 0}, {1, 0, 0}, {3, 2, 0}, 1.0).has_value());
    CHECK_FALSE(ray_hits_insphere({0, 0, 0}, {1, 0, 0}, {-3, 0, 0}, 1.0).has_value());  // behind
    // origin inside the sphere: the exit root is the only positive one
    const auto inside = ray_hits_insphere({0, 0, 0}, {1, 0, 0}, {0.5, 0, 0}, 1.0);
    REQUIRE(inside.has_value());
    CHECK(*inside == doctest::Approx(1.5));
}

TEST_CASE("ray-sphere roots match the quadratic formula") {
    test::SplitMix64 rng(17);
    int hits = 0;
    for (int i = 0; i < 5000; ++i) {
        const Vec3 o1(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
        const Vec3 d = rng.unit_vector();
        const Vec3 o2(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
        const double l = rng.uniform(0.05, 2.0);
        const long double b = static_cast<long double>(d.dot(o1 - o2));
        const long double c = static_cast<long double>((o1 - o2).squaredNorm()) - static_cast<long double>(l) * l;
        const long double disc = b * b - c;
        std::optional<double> want;
        if (disc >= 0) {
            const long double r = std::sqrt(disc);
            if (-b - r > 0) {
                want = static_cast<double>(-b - r);
            } else if (-b + r > 0) {
                want = static_cast<double>(-b + r);
            }
        }
        const auto got = ray_hits_insphere(o1, d, o2, l);
        REQUIRE(got.has_value() == want.has_value());
        if (got) {
            ++hits;
            CHECK(std::abs(*got - *want) <= 1e-12 * std::max(1.0, *want));
        }
    }
    CHECK(hits > 100);
}

TEST_CASE("empty scene gives an empty table") {
    const HrppTable t = build_hrpp({}, {}, RadarConfig::defaults());
    CHECK(t.empty());
    CHECK(t.static_surface_count() == 0);
    CHECK(synthesize_multipath(t, RadarConfig::defaults()).size() == 12);
}

TEST_CASE("dihedral corner produces cross-plate pairs") {
    const RadarConfig c = RadarConfig::defaults();
    const Surfaces s = surfaces_of(dihedral({0, 3, 0}, 1.0, 6));
    const HrppTable t = build_hrpp(s.points, s.radii, c);
    REQUIRE_FALSE(t.empty());
    const std::size_t per_plate = s.points.size() / 2;
    bool a_to_b = false, b_to_a = false;
    for (const auto& e : t.entries()) {
        const bool first_a = e.first < per_plate, second_a = e.second < per_plate;
        CHECK(first_a != second_a);
        a_to_b |= first_a;
        b_to_a |= !first_a;
    }
    CHECK(a_to_b);
    CHECK(b_to_a);
}

TEST_CASE("parallel plates facing the radar give no pairs") {
    TriangleMesh m = rectangle("near", {-0.6, 2.0, 0}, Vec3::Zero(), 1.0, 1.0, 4);
    m.append(rectangle("far", {0.6, 3.0, 0}, Vec3::Zero(), 1.0, 1.0, 4));
    const Surfaces s = surfaces_of(m);
    CHECK(build_hrpp(s.points, s.radii, RadarConfig::defaults()).empty());
}

TEST_CASE("path lengths match the mirror construction on a 90 degree corner") {
    const RadarConfig c = RadarConfig::defaults();
    const Surfaces s = surfaces_of(dihedral({0, 3, 0}, 1.0, 80));
    const HrppTable t = build_hrpp(s.points, s.radii, c);
    REQUIRE(t.size() > 100);
    const std::size_t per_plate = s.points.size() / 2;
    double worst = 0.0;
    for (const auto& e : t.entries()) {
        const Vec3 o1 = e.first_point;
        const Vec3 di = o1.normalized();
        const Vec3& n1 = s.points[e.first].unit_normal;
        const Vec3 ds = di - 2.0 * di.dot(n1) * n1;
        // plane of the other plate
        const Vec3& n2 = s.points[e.first < per_plate ? per_plate : 0].unit_normal;
        const Vec3 p2 = s.points[e.second].centroid;
        const double t_plane = (p2 - o1).dot(n2) / ds.dot(n2);
        const Vec3 b = o1 + t_plane * ds;
        const double oracle = o1.norm() + t_plane + b.norm();
        worst = std::max(worst, std::abs(e.total_path_length_m - oracle));
        CHECK(e.total_path_length_m >= o1.norm() + e.bounce_point.norm());
    }
    CHECK(worst <= 0.01);
}

TEST_CASE("grid search agrees with an exhaustive search") {
    const RadarConfig c = RadarConfig::defaults();
    test::SplitMix64 rng(23);
    for (int scene = 0; scene < 4; ++scene) {
        TriangleMesh m;
        for (int w = 0; w < 4; ++w) {
            const Vec3 at(rng.uniform(-2, 2), rng.uniform(2, 5), rng.uniform(-1, 1));
            const Vec3 rot(rng.uniform(-60, 60), rng.uniform(-30, 30), rng.uniform(-180, 180));
            m.append(rectangle("w" + std::to_string(w), at, rot, rng.uniform(0.5, 2), rng.uniform(0.5, 2), 5));
        }
        m.append(dihedral({rng.uniform(-1, 1), rng.uniform(3, 5), 0}, 1.0, 5, rng.uniform(60, 120)));
        const Surfaces s = surfaces_of(m);
        for (double cone : {15.0, 40.0}) {
            HrppOptions opt;
            opt.cone_deg = cone;
            const HrppTable t = build_hrpp(s.points, s.radii, c, opt);
            const auto brute = brute_force(s.points, s.radii, cone);
            std::size_t expected = 0;
            for (const auto& h : brute) expected += h.has_value();
            CHECK(t.size() == expected);
            for (const auto& e : t.entries()) {
                REQUIRE(brute[e.first].has_value());
                CHECK(e.second == brute[e.first]->second);
                CHECK((e.bounce_point - e.first_point).norm() == doctest::Approx(brute[e.first]->k).epsilon(1e-12));
                // bounce point lies inside the target's insphere
                CHECK((e.bounce_point - s.points[e.second].centroid).norm() <= s.radii[e.second] + 1e-9);
            }
            CHECK(std::is_sorted(t.entries().begin(), t.entries().end(),
                                 [](const HrppEntry& a, const HrppEntry& b) { return a.first < b.first; }));
        }
    }
}

TEST_CASE("combined factors are products of per-surface factors") {
    const RadarConfig c = RadarConfig::defaults();
    TriangleMesh m = dihedral({0.3, 3.5, 0.2}, 1.2, 8, 100.0);
    m.append(rectangle("wall", {-1.5, 3.0, 0}, {0, 0, 80}, 2.0, 1.5, 6));
    const Surfaces s = surfaces_of(m);
    const HrppTable t = build_hrpp(s.points, s.radii, c);
    REQUIRE(t.size() > 10);
    const double lambda = c.wavelength_m();
    const double eta = c.specular_spread_rad;
    auto gain = [&](const Vec3& d) {
        return antenna_gain(azimuth_of(d), c.gain_sigma_azimuth_rad) *
               antenna_gain(elevation_of(d), c.gain_sigma_elevation_rad);
    };
    for (const auto& e : t.entries()) {
        const auto& p1 = s.points[e.first];
        const auto& p2 = s.points[e.second];
        const Vec3 di = e.first_point.normalized();
        const Vec3 ds = (e.bounce_point - e.first_point).normalized();
        const Vec3 back = -e.bounce_point.normalized();
        const double g1 = gain(e.first_point), g2 = gain(e.bounce_point);
        const double ao1 = orientation_coeff(di, ds, p1.unit_normal, eta);
        const double ao2 = orientation_coeff(ds, back, p2.unit_normal, eta);
        const double am1 = material_coeff(fresnel_coeffs(p1.material, lambda, grazing_angle(di, p1.unit_normal)));
        const double am2 = material_coeff(fresnel_coeffs(p2.material, lambda, grazing_angle(ds, p2.unit_normal)));
        CHECK(e.combined_gain == doctest::Approx(g1 * g2).epsilon(1e-9));
        CHECK(e.combined_area == doctest::Approx(p1.area_m2 * p2.area_m2).epsilon(1e-12));
        CHECK(e.combined_orientation == doctest::Approx(ao1 * ao2).epsilon(1e-9));
        CHECK(e.combined_material == doctest::Approx(am1 * am2).epsilon(1e-9));
        // weaker than the single bounce from s1 with the same s1 factors
        const double single = c.tx_gain * c.rx_gain * g1 * lambda * std::sqrt(c.tx_power) * p1.area_m2 * ao1 * am1 /
                              (std::pow(4 * kPi, 1.5) * e.first_point.squaredNorm());
        CHECK(multipath_amplitude(e, c) < single);
        HrppEntry doubled = e;
        doubled.combined_material *= 4.0;  // both surfaces' A_m doubled
        CHECK(multipath_amplitude(doubled, c) == doctest::Approx(4.0 * multipath_amplitude(e, c)).epsilon(1e-14));
    }
}

TEST_CASE("update with no moved surfaces leaves the table unchanged") {
    const Surfaces s = surfaces_of(dihedral({0, 3, 0}, 1.0, 6));
    const HrppTable t = build_hrpp(s.points, s.radii, RadarConfig::defaults());
    const HrppTable u = update_hrpp(t, {}, {});
    CHECK(u.entries() == t.entries());
    CHECK(u.displaced_static_entries().empty());
    CHECK(u.dynamic_entries().empty());
}

TEST_CASE("a body next to a wall adds wall-body pairs") {
    const RadarConfig c = RadarConfig::defaults();
    const Surfaces wall = surfaces_of(rectangle("wall", {-1.0, 3.0, 0}, {0, 0, 80}, 4.0, 2.0, 16));
    const HrppTable empty_room = build_hrpp(wall.points, wall.radii, c);
    const TriangleMesh body = make_mannequin({-0.3, 2.5, -1.1}, 0.0, 0.0, 10, 12);
    const Surfaces human = surfaces_of(body, static_cast<std::uint32_t>(wall.points.size()));
    const HrppTable with_body = update_hrpp(empty_room, human.points, human.radii);
    const auto dyn = with_body.dynamic_entries();
    bool wall_body = false;
    for (const auto& e : dyn) {
        CHECK((e.first >= wall.points.size() || e.second >= wall.points.size()));
        wall_body |= (e.first < wall.points.size()) != (e.second < wall.points.size());
    }
    CHECK(wall_body);
}

TEST_CASE("update equals a rebuild from scratch") {
    const RadarConfig c = RadarConfig::defaults();
    test::SplitMix64 rng(31);
    for (int scene = 0; scene < 6; ++scene) {
        TriangleMesh room;
        for (int w = 0; w < 3; ++w) {
            const Vec3 at(rng.uniform(-2, 2), rng.uniform(2, 5), rng.uniform(-1, 1));
            const Vec3 rot(rng.uniform(-30, 30), rng.uniform(-30, 30), rng.uniform(-180, 180));
            room.append(rectangle("w" + std::to_string(w), at, rot, rng.uniform(1, 3), rng.uniform(1, 2), 8));
        }
        const Surfaces statics = surfaces_of(room);
        const TriangleMesh body = make_mannequin({rng.uniform(-1, 1), rng.uniform(2, 4), -1.1},
                                                 rng.uniform(0, 6.28), 25.0, 8, 10);
        const Surfaces moved = surfaces_of(body, static_cast<std::uint32_t>(statics.points.size()));
        const HrppTable base = build_hrpp(statics.points, statics.radii, c);
        const HrppTable updated = update_hrpp(base, moved.points, moved.radii);
        Surfaces all = statics;
        all.points.insert(all.points.end(), moved.points.begin(), moved.points.end());
        all.radii.insert(all.radii.end(), moved.radii.begin(), moved.radii.end());
        const HrppTable rebuilt = build_hrpp(all.points, all.radii, c);
        CHECK(updated.entries() == rebuilt.entries());
        // a second update replaces the first set of moved surfaces
        const HrppTable again = update_hrpp(updated, moved.points, moved.radii);
        CHECK(again.entries() == rebuilt.entries());
    }
}

TEST_CASE("multipath synthesis") {
    const RadarConfig c = RadarConfig::defaults();
    const std::vector<std::size_t> all_v = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    const auto zero = synthesize_multipath(std::span<const HrppEntry>{}, c, all_v);
    for (const auto& row : zero) {
        for (auto s : row) CHECK(s == std::complex<float>(0.0f, 0.0f));
    }
    // a single path of 6.828 m shows up at half that range
    HrppEntry e;
    e.first_point = {-0.5, 2.5, 0};
    e.bounce_point = {0.5, 2.5, 0};
    e.total_path_length_m = 6.828;
    e.combined_gain = 1.0;
    e.combined_area = 1e-4;
    e.combined_orientation = 1.0;
    e.combined_material = 0.5;
    const std::vector<HrppEntry> one = {e};
    FrameCube cube(3, 12, 256);
    for (std::size_t k = 0; k < 3; ++k) {
        std::vector<std::size_t> v;
        for (std::size_t r = 0; r < 4; ++r) v.push_back(k * 4 + r);
        const auto rows = synthesize_multipath(one, c, v);
        for (std::size_t i = 0; i < 4; ++i) std::copy(rows[i].begin(), rows[i].end(), cube.row(k, v[i]).begin());
    }
    RadarConfig three = c;
    three.chirps_per_frame = 3;
    const Heatmap h = range_heatmap(range_fft(cube), three);
    const long bin = static_cast<long>(h.argmax() / h.cols);
    CHECK(std::abs(bin - 83) <= 1);
    CHECK(multipath_amplitude(e, c) > 0.0);
}

TEST_CASE("HRPP JSON dump") {
    const Surfaces s = surfaces_of(dihedral({0, 3, 0}, 1.0, 3));
    const HrppTable t = build_hrpp(s.points, s.radii, RadarConfig::defaults());
    const nlohmann::json j = hrpp_to_json(t);
    REQUIRE(j.contains("entries"));
    CHECK(j["entries"].size() == t.size());
    CHECK(j["entries"][0].contains("total_path_length_m"));
}
