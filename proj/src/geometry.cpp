#include "spa/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spa {

const char* CrossSection::invariant_violation(double a, double b, double w, double t) {
    if (!(a > 0.0)) return "a > 0";
    if (!(b > 0.0)) return "b > 0";
    if (!(w > 0.0)) return "w > 0";
    if (!(t > 0.0)) return "t > 0";
    if (!(w > 2.0 * t)) return "w > 2t";
    if (!(a + b > 2.0 * t)) return "a + b > 2t";
    if (!(a > t)) return "a > t";
    if (!(b > t)) return "b > t";
    return nullptr;
}

CrossSection::CrossSection(double a_, double b_, double w_, double t_)
    : a(a_), b(b_), w(w_), t(t_) {
    if (const char* violated = invariant_violation(a, b, w, t))
        throw std::invalid_argument(std::string("cross-section invariant violated: ") + violated);
}

CrossSection CrossSection::from_mm(double a_mm, double b_mm, double w_mm, double t_mm) {
    return CrossSection(a_mm * 1e-3, b_mm * 1e-3, w_mm * 1e-3, t_mm * 1e-3);
}

Material::Material(double elastic_modulus_, double n_, double density_, double zeta_,
                   double zeta_perturb_)
    : elastic_modulus(elastic_modulus_), n(n_), density(density_), zeta(zeta_),
      zeta_perturb(zeta_perturb_) {
    if (!(elastic_modulus > 0.0))
        throw std::invalid_argument("material invariant violated: E > 0");
    if (!(n >= 1.0))
        throw std::invalid_argument("material invariant violated: n >= 1");
    if (!(density > 0.0))
        throw std::invalid_argument("material invariant violated: density > 0");
    if (!(zeta > 0.0 && zeta < 1.0))
        throw std::invalid_argument("material invariant violated: 0 < zeta < 1");
    if (!(zeta_perturb >= 0.0))
        throw std::invalid_argument("material invariant violated: zeta_perturb >= 0");
}

ActuatorDesign::ActuatorDesign(CrossSection cs, Material mat, double length_,
                               std::optional<double> mass_override_)
    : cross_section(cs), material(mat), length(length_), mass_override(mass_override_) {
    if (!(length > 0.0))
        throw std::invalid_argument("design invariant violated: length > 0");
    if (mass_override && !(*mass_override > 0.0))
        throw std::invalid_argument("design invariant violated: mass > 0");
}

double chamber_area(const CrossSection& cs) {
    return (cs.w - 2.0 * cs.t) * (cs.a + cs.b - 2.0 * cs.t);
}

double wall_area(const CrossSection& cs) {
    return cs.w * (cs.a + cs.b) - chamber_area(cs);
}

double wall_pressure(const CrossSection& cs, double pressure) {
    if (!(pressure >= 0.0))
        throw std::invalid_argument("wall_pressure: pressure must be non-negative");
    const double denom =
        cs.b * cs.w + cs.w * cs.t + 2.0 * cs.a * cs.t - 2.0 * cs.t * cs.t;
    if (!(denom > 0.0))
        throw GeometryError("wall_pressure: degenerate section, non-positive denominator");
    return (cs.a - cs.t) * (cs.w - 2.0 * cs.t) / denom * pressure;
}

double moment_of_inertia(const CrossSection& cs, double n) {
    if (!(n >= 1.0))
        throw std::invalid_argument("moment_of_inertia: n must be >= 1");
    const double h = cs.height();
    return std::pow(0.5, 1.0 + n) / (2.0 + n) * cs.w * std::pow(h, 2.0 + n);
}

double mass(const ActuatorDesign& design) {
    if (design.mass_override) return *design.mass_override;
    return design.material.density * wall_area(design.cross_section) * design.length;
}

}  // namespace spa
