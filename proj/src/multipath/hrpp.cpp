#include "mmgen/multipath/hrpp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmgen/core/constants.hpp"
#include "mmgen/core/errors.hpp"
#include "mmgen/core/parallel.hpp"
#include "mmgen/reflectance/reflectance.hpp"
#include "mmgen/synthesizer/tone.hpp"

namespace mmgen {

namespace detail {

struct Surface {
    Vec3 centroid;
    Vec3 normal;
    double area = 0.0;
    double radius = 0.0;
    Material material;
};

// Uniform grid of sphere bounding boxes with Amanatides-Woo traversal.
class SphereGrid {
public:
    SphereGrid() = default;

    explicit SphereGrid(const std::vector<Surface>& surfaces) {
        if (surfaces.empty()) return;
        lo_ = Vec3::Constant(std::numeric_limits<double>::infinity());
        Vec3 hi = -lo_;
        double mean_radius = 0.0;
        for (const auto& s : surfaces) {
            lo_ = lo_.cwiseMin(s.centroid - Vec3::Constant(s.radius));
            hi = hi.cwiseMax(s.centroid + Vec3::Constant(s.radius));
            mean_radius += s.radius;
        }
        mean_radius /= static_cast<double>(surfaces.size());
        const Vec3 extent = (hi - lo_).cwiseMax(1e-9);
        const double volume = extent.prod();
        cell_ = std::max(std::cbrt(volume / static_cast<double>(surfaces.size())), mean_radius);
        cell_ = std::max(cell_, extent.maxCoeff() / 256.0);
        for (int a = 0; a < 3; ++a) dims_[a] = std::max(1, static_cast<int>(std::ceil(extent[a] / cell_)));

        const std::size_t cells = static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
        std::vector<std::uint32_t> counts(cells + 1, 0);
        // Slightly inflated boxes keep rays grazing a cell corner from missing a sphere.
        auto for_cells = [&](const Surface& s, auto&& fn) {
            const double r = s.radius * (1.0 + 1e-6) + 1e-9;
            const auto lo = cell_of(s.centroid - Vec3::Constant(r));
            const auto hi = cell_of(s.centroid + Vec3::Constant(r));
            for (int z = lo[2]; z <= hi[2]; ++z)
                for (int y = lo[1]; y <= hi[1]; ++y)
                    for (int x = lo[0]; x <= hi[0]; ++x) fn(flat(x, y, z));
        };
        for (const auto& s : surfaces) for_cells(s, [&](std::size_t c) { ++counts[c + 1]; });
        for (std::size_t c = 0; c < cells; ++c) counts[c + 1] += counts[c];
        start_ = counts;
        items_.resize(counts[cells]);
        for (std::uint32_t i = 0; i < surfaces.size(); ++i) {
            for_cells(surfaces[i], [&](std::size_t c) { items_[counts[c]++] = i; });
        }
    }

    // Calls visit(local_index) for the spheres of every cell the ray crosses,
    // stopping once a cell starts beyond bound() (the current best k).
    template <typename Visit, typename Bound>
    void trace(const Vec3& o, const Vec3& d, Visit&& visit, Bound&& bound) const {
        if (items_.empty()) return;
        const Vec3 hi = lo_ + cell_ * Vec3(dims_[0], dims_[1], dims_[2]);
        double t0 = 0.0;
        double t1 = std::numeric_limits<double>::infinity();
        for (int a = 0; a < 3; ++a) {
            if (d[a] == 0.0) {
                if (o[a] < lo_[a] || o[a] > hi[a]) return;
                continue;
            }
            double ta = (lo_[a] - o[a]) / d[a];
            double tb = (hi[a] - o[a]) / d[a];
            if (ta > tb) std::swap(ta, tb);
            t0 = std::max(t0, ta);
            t1 = std::min(t1, tb);
        }
        if (t0 > t1 || t0 > bound()) return;

        const Vec3 entry = o + t0 * d;
        std::array<int, 3> cell = cell_of(entry);
        std::array<int, 3> step{};
        Vec3 t_max;
        Vec3 t_delta;
        for (int a = 0; a < 3; ++a) {
            if (d[a] > 0.0) {
                step[a] = 1;
                t_max[a] = (lo_[a] + (cell[a] + 1) * cell_ - o[a]) / d[a];
                t_delta[a] = cell_ / d[a];
            } else if (d[a] < 0.0) {
                step[a] = -1;
                t_max[a] = (lo_[a] + cell[a] * cell_ - o[a]) / d[a];
                t_delta[a] = -cell_ / d[a];
            } else {
                step[a] = 0;
                t_max[a] = std::numeric_limits<double>::infinity();
                t_delta[a] = std::numeric_limits<double>::infinity();
            }
        }
        for (;;) {
            const std::size_t c = flat(cell[0], cell[1], cell[2]);
            for (std::uint32_t k = start_[c]; k < start_[c + 1]; ++k) visit(items_[k]);
            int axis = 0;
            if (t_max[1] < t_max[axis]) axis = 1;
            if (t_max[2] < t_max[axis]) axis = 2;
            if (t_max[axis] > bound() || t_max[axis] > t1) return;
            cell[axis] += step[axis];
            if (cell[axis] < 0 || cell[axis] >= dims_[axis]) return;
            t_max[axis] += t_delta[axis];
        }
    }

private:
    std::array<int, 3> cell_of(const Vec3& p) const {
        std::array<int, 3> c{};
        for (int a = 0; a < 3; ++a) {
            c[a] = std::clamp(static_cast<int>(std::floor((p[a] - lo_[a]) / cell_)), 0, dims_[a] - 1);
        }
        return c;
    }
    std::size_t flat(int x, int y, int z) const {
        return (static_cast<std::size_t>(z) * dims_[1] + y) * dims_[0] + x;
    }

    Vec3 lo_ = Vec3::Zero();
    double cell_ = 1.0;
    std::array<int, 3> dims_{1, 1, 1};
    std::vector<std::uint32_t> start_;
    std::vector<std::uint32_t> items_;
};

struct Launch {
    bool valid = false;
    Vec3 incident = Vec3::Zero();
    Vec3 specular = Vec3::Zero();
};

struct Hit {
    double k = std::numeric_limits<double>::infinity();
    std::uint32_t id = std::numeric_limits<std::uint32_t>::max();

    [[nodiscard]] bool found() const { return id != std::numeric_limits<std::uint32_t>::max(); }
    [[nodiscard]] bool worse_than(double k2, std::uint32_t id2) const { return k2 < k || (k2 == k && id2 < id); }
};

struct HrppContext {
    RadarConfig config;
    HrppOptions options;
    double cos_cone = 1.0;
    std::vector<Surface> surfaces;
    std::vector<Launch> launches;
    SphereGrid grid;
    std::vector<Hit> best;
    std::vector<HrppEntry> entries;
    std::vector<std::int64_t> entry_of;  // per static s1, index into entries or -1
};

}  // namespace detail

namespace {

using detail::Hit;
using detail::HrppContext;
using detail::Launch;
using detail::SphereGrid;
using detail::Surface;

std::vector<Surface> make_surfaces(std::span<const ReflectionPoint> points, std::span<const double> radii) {
    if (points.size() != radii.size()) throw ConfigError("hrpp: one insphere radius per point required");
    std::vector<Surface> out;
    out.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        out.push_back({points[i].centroid, points[i].unit_normal, points[i].area_m2, radii[i], points[i].material});
    }
    return out;
}

Launch make_launch(const Surface& s, const Vec3& radar) {
    Launch l;
    const Vec3 offset = s.centroid - radar;
    const double d = offset.norm();
    if (!(d > 0.0)) return l;
    l.incident = offset / d;
    const double cosine = l.incident.dot(s.normal);
    if (!(cosine < 0.0)) return l;  // back-facing
    l.specular = l.incident - 2.0 * cosine * s.normal;
    l.valid = true;
    return l;
}

// Tests surface j (id `id`) as the second bounce of s1.
void consider(const Surface& s1, const Launch& launch, const Surface& s2, std::uint32_t id, std::uint32_t self_id,
              double cos_cone, Hit& best) {
    if (id == self_id) return;
    if (!(launch.specular.dot(s2.normal) < 0.0)) return;
    const Vec3 delta = s2.centroid - s1.centroid;
    const double dist = delta.norm();
    if (delta.dot(launch.specular) < dist * cos_cone) return;
    const auto k = ray_hits_insphere(s1.centroid, launch.specular, s2.centroid, s2.radius);
    if (k && best.worse_than(*k, id)) best = {*k, id};
}

void search(const Surface& s1, const Launch& launch, std::uint32_t self_id, const SphereGrid& grid,
            const std::vector<Surface>& candidates, std::uint32_t id_offset, double cos_cone, Hit& best) {
    grid.trace(
        s1.centroid, launch.specular,
        [&](std::uint32_t local) {
            consider(s1, launch, candidates[local], id_offset + local, self_id, cos_cone, best);
        },
        [&] { return best.k; });
}

HrppEntry make_entry(const HrppContext& ctx, std::uint32_t first, const Surface& s1, const Launch& launch,
                     std::uint32_t second, const Surface& s2, double k) {
    const RadarConfig& cfg = ctx.config;
    const Vec3& radar = ctx.options.radar_position;
    const double lambda = cfg.wavelength_m();
    const double eta = cfg.specular_spread_rad;
    const double psi = ctx.options.psi_rad;

    HrppEntry e;
    e.first = first;
    e.second = second;
    e.first_point = s1.centroid;
    e.bounce_point = s1.centroid + k * launch.specular;
    const Vec3 to_o1 = e.first_point - radar;
    const Vec3 to_q = e.bounce_point - radar;
    e.total_path_length_m = to_o1.norm() + k + to_q.norm();

    auto gains = [&](const Vec3& dir) {
        return antenna_gain(azimuth_of(dir), cfg.gain_sigma_azimuth_rad) *
               antenna_gain(elevation_of(dir), cfg.gain_sigma_elevation_rad);
    };
    e.combined_gain = gains(to_o1) * gains(to_q);
    e.combined_area = s1.area * s2.area;
    const Vec3 exit = -to_q.normalized();
    e.combined_orientation = orientation_coeff(launch.incident, launch.specular, s1.normal, eta) *
                             orientation_coeff(launch.specular, exit, s2.normal, eta);
    const double beta1 = grazing_angle(launch.incident, s1.normal);
    const double beta2 = grazing_angle(launch.specular, s2.normal);
    e.combined_material = material_coeff(fresnel_coeffs(s1.material, lambda, beta1), psi) *
                          material_coeff(fresnel_coeffs(s2.material, lambda, beta2), psi);
    return e;
}

}  // namespace

std::optional<double> ray_hits_insphere(const Vec3& o1, const Vec3& d, const Vec3& o2, double l) {
    const Vec3 m = o1 - o2;
    const double b = d.dot(m);
    const double c = m.squaredNorm() - l * l;
    const double disc = b * b - c;
    if (disc < 0.0) return std::nullopt;
    const double s = std::sqrt(disc);
    const double q = b > 0.0 ? -b - s : -b + s;
    if (q == 0.0) return std::nullopt;
    double r1 = q;
    double r2 = c / q;
    if (r1 > r2) std::swap(r1, r2);
    if (r1 > 0.0) return r1;
    if (r2 > 0.0) return r2;
    return std::nullopt;
}

std::size_t HrppTable::static_surface_count() const { return context_ ? context_->surfaces.size() : 0; }

std::vector<HrppEntry> HrppTable::dynamic_entries() const {
    const std::size_t s = static_surface_count();
    std::vector<HrppEntry> out;
    for (const auto& e : entries_) {
        if (e.first >= s || e.second >= s) out.push_back(e);
    }
    return out;
}

HrppTable build_hrpp(std::span<const ReflectionPoint> points, std::span<const double> radii, const RadarConfig& config,
                     const HrppOptions& options) {
    if (!(options.cone_deg > 0.0 && options.cone_deg <= 180.0)) throw ConfigError("hrpp: cone angle out of (0, 180]");
    auto ctx = std::make_shared<HrppContext>();
    ctx->config = config;
    ctx->options = options;
    ctx->cos_cone = std::cos(deg_to_rad(options.cone_deg));
    ctx->surfaces = make_surfaces(points, radii);
    ctx->grid = SphereGrid(ctx->surfaces);
    const std::size_t n = ctx->surfaces.size();
    ctx->launches.resize(n);
    ctx->best.assign(n, Hit{});
    parallel_for(n, options.workers, [&](std::size_t i) {
        const Surface& s1 = ctx->surfaces[i];
        ctx->launches[i] = make_launch(s1, options.radar_position);
        if (!ctx->launches[i].valid) return;
        search(s1, ctx->launches[i], static_cast<std::uint32_t>(i), ctx->grid, ctx->surfaces, 0, ctx->cos_cone,
               ctx->best[i]);
    });
    ctx->entry_of.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const Hit& h = ctx->best[i];
        if (!h.found()) continue;
        ctx->entry_of[i] = static_cast<std::int64_t>(ctx->entries.size());
        ctx->entries.push_back(make_entry(*ctx, static_cast<std::uint32_t>(i), ctx->surfaces[i], ctx->launches[i],
                                          h.id, ctx->surfaces[h.id], h.k));
    }
    HrppTable table;
    table.entries_ = ctx->entries;
    table.context_ = std::move(ctx);
    return table;
}

HrppTable update_hrpp(const HrppTable& table, std::span<const ReflectionPoint> moved_points,
                      std::span<const double> moved_radii) {
    if (!table.context_) throw ConfigError("update_hrpp: table was not built by build_hrpp");
    const HrppContext& ctx = *table.context_;
    HrppTable out;
    out.context_ = table.context_;
    if (moved_points.empty()) {
        out.entries_ = ctx.entries;
        return out;
    }
    const std::vector<Surface> moved = make_surfaces(moved_points, moved_radii);
    const SphereGrid moved_grid(moved);
    const auto s_count = static_cast<std::uint32_t>(ctx.surfaces.size());
    const Vec3& radar = ctx.options.radar_position;

    // Static first bounces: only a moved surface nearer than the cached hit can change them.
    std::vector<Hit> static_best(ctx.best);
    for (std::uint32_t i = 0; i < s_count; ++i) {
        if (!ctx.launches[i].valid) continue;
        search(ctx.surfaces[i], ctx.launches[i], i, moved_grid, moved, s_count, ctx.cos_cone, static_best[i]);
    }
    std::vector<Launch> moved_launch(moved.size());
    std::vector<Hit> moved_best(moved.size());
    for (std::size_t j = 0; j < moved.size(); ++j) {
        moved_launch[j] = make_launch(moved[j], radar);
        if (!moved_launch[j].valid) continue;
        const auto self = static_cast<std::uint32_t>(s_count + j);
        search(moved[j], moved_launch[j], self, ctx.grid, ctx.surfaces, 0, ctx.cos_cone, moved_best[j]);
        search(moved[j], moved_launch[j], self, moved_grid, moved, s_count, ctx.cos_cone, moved_best[j]);
    }

    auto surface = [&](std::uint32_t id) -> const Surface& {
        return id < s_count ? ctx.surfaces[id] : moved[id - s_count];
    };
    for (std::uint32_t i = 0; i < s_count; ++i) {
        const Hit& h = static_best[i];
        if (!h.found()) continue;
        if (h.id < s_count) {
            out.entries_.push_back(ctx.entries[static_cast<std::size_t>(ctx.entry_of[i])]);
            continue;
        }
        if (ctx.entry_of[i] >= 0) out.displaced_.push_back(ctx.entries[static_cast<std::size_t>(ctx.entry_of[i])]);
        out.entries_.push_back(make_entry(ctx, i, ctx.surfaces[i], ctx.launches[i], h.id, surface(h.id), h.k));
    }
    for (std::size_t j = 0; j < moved.size(); ++j) {
        const Hit& h = moved_best[j];
        if (!h.found()) continue;
        out.entries_.push_back(
            make_entry(ctx, static_cast<std::uint32_t>(s_count + j), moved[j], moved_launch[j], h.id, surface(h.id), h.k));
    }
    return out;
}

double multipath_amplitude(const HrppEntry& entry, const RadarConfig& config) {
    const double d = entry.total_path_length_m;
    if (!(d >= kMinRangeM)) throw NumericError("multipath: path length below near-field limit");
    return config.tx_gain * config.rx_gain * entry.combined_gain * config.wavelength_m() * std::sqrt(config.tx_power) *
           entry.combined_area * entry.combined_orientation * entry.combined_material /
           (std::pow(4.0 * kPi, 1.5) * d * d);
}

std::vector<std::vector<std::complex<float>>> synthesize_multipath(std::span<const HrppEntry> entries,
                                                                   const RadarConfig& config,
                                                                   std::span<const std::size_t> virtuals) {
    std::vector<std::vector<std::complex<float>>> out;
    ToneAccumulator acc(config.samples_per_chirp);
    for (std::size_t v : virtuals) {
        const Vec3 tx = config.tx_position_m(config.tx_of_virtual(v));
        const Vec3 rx = config.rx_position_m(config.rx_of_virtual(v));
        acc.reset();
        for (const auto& e : entries) {
            // recorded monostatic length plus per-antenna offsets at both ends
            const long double path = static_cast<long double>(e.total_path_length_m) +
                                     ((e.first_point - tx).norm() - e.first_point.norm()) +
                                     ((rx - e.bounce_point).norm() - e.bounce_point.norm());
            acc.add(multipath_amplitude(e, config), path / static_cast<long double>(kSpeedOfLight), config);
        }
        out.emplace_back(config.samples_per_chirp);
        acc.write(out.back());
    }
    return out;
}

std::vector<std::vector<std::complex<float>>> synthesize_multipath(const HrppTable& table, const RadarConfig& config) {
    std::vector<std::size_t> all(config.num_virtual());
    for (std::size_t v = 0; v < all.size(); ++v) all[v] = v;
    return synthesize_multipath(table.entries(), config, all);
}

nlohmann::json hrpp_to_json(const HrppTable& table) {
    nlohmann::json out;
    out["static_surfaces"] = table.static_surface_count();
    out["entries"] = nlohmann::json::array();
    for (const auto& e : table.entries()) {
        out["entries"].push_back({
            {"first", e.first},
            {"second", e.second},
            {"first_point", {e.first_point.x(), e.first_point.y(), e.first_point.z()}},
            {"bounce_point", {e.bounce_point.x(), e.bounce_point.y(), e.bounce_point.z()}},
            {"total_path_length_m", e.total_path_length_m},
            {"combined_gain", e.combined_gain},
            {"combined_area", e.combined_area},
            {"combined_orientation", e.combined_orientation},
            {"combined_material", e.combined_material},
        });
    }
    return out;
}

}  // namespace mmgen
