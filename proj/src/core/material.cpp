#include "mmgen/core/material.hpp"

#include <cmath>

#include "mmgen/core/errors.hpp"

namespace mmgen {

void Material::validate() const {
    if (!std::isfinite(relative_permittivity) || relative_permittivity < 1.0) {
        throw ConfigError("material '" + name + "': relative_permittivity must be >= 1");
    }
    if (!std::isfinite(conductivity_s_per_m) || conductivity_s_per_m < 0.0) {
        throw ConfigError("material '" + name + "': conductivity must be >= 0");
    }
}

std::complex<double> complex_permittivity(const Material& material, double wavelength_m) {
    if (!(wavelength_m > 0.0)) {
        throw ConfigError("complex_permittivity: wavelength must be positive");
    }
    return {material.relative_permittivity, -60.0 * wavelength_m * material.conductivity_s_per_m};
}

Material human_material() { return {"human", 10.0, 1e-10}; }

MaterialTable::MaterialTable(std::vector<Material> materials) {
    for (auto& m : materials) add(std::move(m));
}

MaterialTable MaterialTable::defaults() {
    // eps' and sigma near 60 GHz. Wood, concrete and glass follow the
    // ITU-R P.2040 frequency fits; the rest are typical literature values.
    return MaterialTable({
        {"plywood", 1.99, 0.38},
        {"polyurethane", 1.10, 0.001},
        {"paperboard", 2.70, 0.20},
        {"ceramic", 6.00, 0.10},
        {"glass", 6.27, 0.57},
        {"concrete", 5.24, 1.14},
        {"leather", 2.80, 0.10},
        human_material(),
    });
}

void MaterialTable::add(Material material) {
    material.validate();
    if (material.name.empty()) throw ConfigError("material name must not be empty");
    if (materials_.count(material.name) != 0) {
        throw ConfigError("duplicate material '" + material.name + "'");
    }
    auto name = material.name;
    materials_.emplace(std::move(name), std::move(material));
}

void MaterialTable::set(Material material) {
    material.validate();
    if (material.name.empty()) throw ConfigError("material name must not be empty");
    auto name = material.name;
    materials_.insert_or_assign(std::move(name), std::move(material));
}

bool MaterialTable::contains(const std::string& name) const { return materials_.count(name) != 0; }

const Material& MaterialTable::at(const std::string& name) const {
    auto it = materials_.find(name);
    if (it == materials_.end()) throw ConfigError("unknown material '" + name + "'");
    return it->second;
}

std::vector<std::string> MaterialTable::names() const {
    std::vector<std::string> out;
    out.reserve(materials_.size());
    for (const auto& [name, _] : materials_) out.push_back(name);
    return out;
}

}  // namespace mmgen
