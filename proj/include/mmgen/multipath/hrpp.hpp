#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "mmgen/core/radar_config.hpp"
#include "mmgen/geometry/mesh.hpp"

namespace mmgen {

/// One Tx -> surface #1 -> surface #2 -> Rx path.
struct HrppEntry {
    std::uint32_t first = 0;   // surface id of the first bounce
    std::uint32_t second = 0;  // surface id of the second bounce
    Vec3 first_point = Vec3::Zero();   // o1, centroid of surface #1
    Vec3 bounce_point = Vec3::Zero();  // q, where the specular ray enters surface #2's insphere
    double total_path_length_m = 0.0;  // |radar - o1| + |o1 - q| + |q - radar|
    double combined_gain = 1.0;        // G_a G_e at o1 times G_a G_e at q
    double combined_area = 0.0;        // area1 * area2
    double combined_orientation = 0.0;
    double combined_material = 0.0;

    bool operator==(const HrppEntry&) const = default;
};

struct HrppOptions {
    /// Half-angle of the candidate cone around the specular ray.
    double cone_deg = 15.0;
    double psi_rad = 0.0;
    Vec3 radar_position = Vec3::Zero();
    std::size_t workers = 1;
};

/// Smallest k > 0 with |o1 + k d - o2| = l, if any.
std::optional<double> ray_hits_insphere(const Vec3& o1, const Vec3& d, const Vec3& o2, double l);

namespace detail {
struct HrppContext;
}

/**
 * Table of two-bounce paths. Surfaces passed to build_hrpp are static and
 * keep ids 0..S-1; moved surfaces given to update_hrpp get ids S, S+1, ...
 *
 * Each front-facing surface s1 launches the specular reflection of the
 * radar's ray; the entry records the nearest surface s2 (within the cone,
 * hit on its front side) whose insphere the ray enters. Ties go to the
 * lower id. Entries are ordered by first id.
 */
class HrppTable {
public:
    HrppTable() = default;

    [[nodiscard]] const std::vector<HrppEntry>& entries() const { return entries_; }
    [[nodiscard]] std::size_t size() const { return entries_.size(); }
    [[nodiscard]] bool empty() const { return entries_.empty(); }
    [[nodiscard]] std::size_t static_surface_count() const;
    /// Entries of the static-only table that the moved surfaces replaced.
    [[nodiscard]] const std::vector<HrppEntry>& displaced_static_entries() const { return displaced_; }
    /// Entries involving a moved surface.
    [[nodiscard]] std::vector<HrppEntry> dynamic_entries() const;

private:
    friend HrppTable build_hrpp(std::span<const ReflectionPoint>, std::span<const double>, const RadarConfig&,
                                const HrppOptions&);
    friend HrppTable update_hrpp(const HrppTable&, std::span<const ReflectionPoint>, std::span<const double>);

    std::shared_ptr<const detail::HrppContext> context_;
    std::vector<HrppEntry> entries_;
    std::vector<HrppEntry> displaced_;
};

/// `radii` are the insphere (incircle) radii, one per point.
HrppTable build_hrpp(std::span<const ReflectionPoint> points, std::span<const double> radii, const RadarConfig& config,
                     const HrppOptions& options = {});

/// Replaces the moved surfaces of `table`; equal to build_hrpp over the
/// static surfaces followed by `moved_points`.
HrppTable update_hrpp(const HrppTable& table, std::span<const ReflectionPoint> moved_points,
                      std::span<const double> moved_radii);

/// G_Tx G_Rx G^pair lambda sqrt(P) A_a A_o A_m / ((4 pi)^1.5 D_pair^2).
double multipath_amplitude(const HrppEntry& entry, const RadarConfig& config);

/// Sum over entries, in order, of each path's IF tone for every listed
/// virtual channel. The delay uses the element positions of the pair.
std::vector<std::vector<std::complex<float>>> synthesize_multipath(std::span<const HrppEntry> entries,
                                                                   const RadarConfig& config,
                                                                   std::span<const std::size_t> virtuals);
std::vector<std::vector<std::complex<float>>> synthesize_multipath(const HrppTable& table, const RadarConfig& config);

nlohmann::json hrpp_to_json(const HrppTable& table);

}  // namespace mmgen
