#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace mmgen {

struct Material {
    std::string name;
    double relative_permittivity = 1.0;  // eps'
    double conductivity_s_per_m = 0.0;   // sigma

    /// Throws ConfigError unless eps' >= 1 and sigma >= 0.
    void validate() const;
};

/// eps' - j*60*lambda*sigma.
std::complex<double> complex_permittivity(const Material& material, double wavelength_m);

/// Default body material: eps' = 10, sigma = 1e-10 S/m.
Material human_material();

/// Name -> material lookup. Names are unique.
class MaterialTable {
public:
    MaterialTable() = default;
    explicit MaterialTable(std::vector<Material> materials);

    /// The seven indoor materials plus "human". Values are non-normative
    /// 60 GHz figures from public permittivity references.
    static MaterialTable defaults();

    /// Throws ConfigError if the name already exists.
    void add(Material material);
    /// Adds or replaces.
    void set(Material material);
    [[nodiscard]] bool contains(const std::string& name) const;
    /// Throws ConfigError for unknown names.
    [[nodiscard]] const Material& at(const std::string& name) const;
    [[nodiscard]] std::vector<std::string> names() const;
    [[nodiscard]] std::size_t size() const { return materials_.size(); }

private:
    std::map<std::string, Material> materials_;
};

}  // namespace mmgen
