#include "mmgen/reflectance/reflectance.hpp"

#include <algorithm>
#include <cmath>

#include "mmgen/core/constants.hpp"
#include "mmgen/core/errors.hpp"

namespace mmgen {

namespace {

// (4 pi)^1.5
const double kFourPiPow = std::pow(4.0 * kPi, 1.5);

}  // namespace

double azimuth_of(const Vec3& dir) { return std::atan2(dir.x(), dir.y()); }

double elevation_of(const Vec3& dir) { return std::atan2(dir.z(), std::hypot(dir.x(), dir.y())); }

double grazing_angle(const Vec3& dir, const Vec3& normal) {
    const double s = std::clamp(std::abs(dir.normalized().dot(normal.normalized())), 0.0, 1.0);
    return std::asin(s);
}

PathGeometry monostatic_geometry(const Vec3& point, const Vec3& normal, const Vec3& radar) {
    const Vec3 offset = point - radar;
    const double d = offset.norm();
    if (!(d > 0.0)) throw NumericError("monostatic_geometry: point coincides with the radar");
    PathGeometry g;
    g.incident_dir = offset / d;
    g.exit_dir = -g.incident_dir;
    g.surface_normal = normal.normalized();
    g.one_way_distance_m = d;
    g.azimuth_rad = azimuth_of(offset);
    g.elevation_rad = elevation_of(offset);
    g.grazing_angle_rad = grazing_angle(g.incident_dir, g.surface_normal);
    return g;
}

long double phase_cycles(long double tau_s, long double t_s, const RadarConfig& config) {
    const long double f0 = config.start_frequency_hz;
    const long double b = config.bandwidth_hz;
    const long double tc = config.ramp_time_s;
    return f0 * tau_s - (b * tau_s * tau_s / (2.0L * tc)) * t_s + (b * tau_s / tc) * t_s;
}

PhaseRamp phase_ramp(long double tau_s, const RadarConfig& config) {
    const long double f0 = config.start_frequency_hz;
    const long double b = config.bandwidth_hz;
    const long double tc = config.ramp_time_s;
    const long double offset = f0 * tau_s;
    PhaseRamp ramp;
    ramp.offset_cycles = static_cast<double>(offset - std::floor(offset));
    ramp.rate_hz = static_cast<double>(b * tau_s / tc - b * tau_s * tau_s / (2.0L * tc));
    return ramp;
}

double orientation_coeff(const Vec3& incident_dir, const Vec3& exit_dir, const Vec3& normal, double eta) {
    if (!(eta > 0.0)) throw ConfigError("orientation_coeff: eta must be positive");
    const Vec3 di = incident_dir.normalized();
    const Vec3 n = normal.normalized();
    const Vec3 ds = di - 2.0 * di.dot(n) * n;
    const double alpha = std::acos(std::clamp(exit_dir.normalized().dot(ds), -1.0, 1.0));
    return std::exp(-alpha * alpha / (2.0 * eta * eta));
}

double orientation_coeff(const PathGeometry& g, double eta) {
    return orientation_coeff(g.incident_dir, g.exit_dir, g.surface_normal, eta);
}

FresnelPair fresnel_coeffs(const Material& material, double wavelength_m, double beta_rad) {
    const std::complex<double> eps = complex_permittivity(material, wavelength_m);
    const double s = std::sin(beta_rad);
    // eps - cos^2 evaluated as (eps - 1) + sin^2
    const std::complex<double> root = std::sqrt((eps - 1.0) + s * s);
    const std::complex<double> den_v = eps * s + root;
    const std::complex<double> den_h = s + root;
    if (std::abs(den_v) < 1e-30 || std::abs(den_h) < 1e-30) {
        throw NumericError("fresnel_coeffs: vanishing denominator");
    }
    return {(eps * s - root) / den_v, (s - root) / den_h};
}

double material_coeff(std::complex<double> gamma_v, std::complex<double> gamma_h, double psi_rad) {
    return std::abs(gamma_v * std::cos(psi_rad) + gamma_h * std::sin(psi_rad));
}

double material_coeff(const FresnelPair& pair, double psi_rad) {
    return material_coeff(pair.vertical, pair.horizontal, psi_rad);
}

double antenna_gain(double phi_rad, double sigma_rad) {
    if (!(sigma_rad > 0.0)) throw ConfigError("antenna_gain: sigma must be positive");
    return std::exp(-phi_rad * phi_rad / (2.0 * sigma_rad * sigma_rad));
}

double amplitude_human(const PathGeometry& g, double area_m2, double a_o, double a_m, const RadarConfig& config) {
    const double d = g.one_way_distance_m;
    if (!(d >= kMinRangeM)) throw NumericError("amplitude: distance below near-field limit");
    return config.tx_gain * config.rx_gain * config.wavelength_m() * std::sqrt(config.tx_power) * area_m2 * a_o * a_m /
           (kFourPiPow * d * d);
}

double amplitude_env(const PathGeometry& g, double area_m2, double a_o, double a_m, const RadarConfig& config) {
    return amplitude_human(g, area_m2, a_o, a_m, config) * antenna_gain(g.azimuth_rad, config.gain_sigma_azimuth_rad) *
           antenna_gain(g.elevation_rad, config.gain_sigma_elevation_rad);
}

}  // namespace mmgen
