#pragma once

#include <complex>

#include "mmgen/core/constants.hpp"
#include "mmgen/core/material.hpp"
#include "mmgen/core/radar_config.hpp"

namespace mmgen {

/// Geometry of one reflection. Directions are unit vectors; d_i points from
/// the transmitter to the surface, d_e from the surface to the receiver.
struct PathGeometry {
    Vec3 incident_dir = Vec3::UnitY();
    Vec3 exit_dir = -Vec3::UnitY();
    Vec3 surface_normal = -Vec3::UnitY();
    double one_way_distance_m = 1.0;
    double azimuth_rad = 0.0;
    double elevation_rad = 0.0;
    double grazing_angle_rad = kPi / 2.0;
};

/// Monostatic geometry of a facet at `point` seen from `radar`.
PathGeometry monostatic_geometry(const Vec3& point, const Vec3& normal, const Vec3& radar = Vec3::Zero());

/// Azimuth atan2(x, y) and elevation atan2(z, hypot(x, y)) of a direction.
double azimuth_of(const Vec3& dir);
double elevation_of(const Vec3& dir);

/// Angle between a ray and a surface plane, in [0, pi/2].
double grazing_angle(const Vec3& dir, const Vec3& normal);

/// Round-trip delay 2D/c.
inline double round_trip_delay(double one_way_distance_m) { return 2.0 * one_way_distance_m / kSpeedOfLight; }

/// IF phase in cycles: f0*tau - (B*tau^2 / (2 Tc)) * t + (B*tau / Tc) * t.
long double phase_cycles(long double tau_s, long double t_s, const RadarConfig& config);

/// Split form of the phase: value at t = 0 reduced mod 1, and cycles per second.
struct PhaseRamp {
    double offset_cycles = 0.0;  // frac(f0 * tau), in [0, 1)
    double rate_hz = 0.0;        // B*tau/Tc - B*tau^2/(2 Tc)
};
PhaseRamp phase_ramp(long double tau_s, const RadarConfig& config);

/// exp(-alpha^2 / (2 eta^2)), alpha the angle between d_e and the mirror
/// direction of d_i about the normal.
double orientation_coeff(const PathGeometry& g, double eta);
double orientation_coeff(const Vec3& incident_dir, const Vec3& exit_dir, const Vec3& normal, double eta);

struct FresnelPair {
    std::complex<double> vertical;
    std::complex<double> horizontal;
};

/// Fresnel coefficients at grazing angle beta (measured from the surface).
/// Throws NumericError if a denominator vanishes.
FresnelPair fresnel_coeffs(const Material& material, double wavelength_m, double beta_rad);

/// |Gamma_v cos(psi) + Gamma_h sin(psi)|.
double material_coeff(std::complex<double> gamma_v, std::complex<double> gamma_h, double psi_rad = 0.0);
double material_coeff(const FresnelPair& pair, double psi_rad = 0.0);

/// Gaussian beam pattern exp(-phi^2 / (2 sigma^2)).
double antenna_gain(double phi_rad, double sigma_rad);

inline constexpr double kMinRangeM = 1e-3;

/// G_Tx G_Rx lambda sqrt(P) A_a A_o A_m / ((4 pi)^1.5 D^2). Throws
/// NumericError for D below kMinRangeM.
double amplitude_human(const PathGeometry& g, double area_m2, double a_o, double a_m, const RadarConfig& config);

/// amplitude_human * G_a(azimuth) * G_e(elevation).
double amplitude_env(const PathGeometry& g, double area_m2, double a_o, double a_m, const RadarConfig& config);

}  // namespace mmgen
