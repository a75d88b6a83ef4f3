#pragma once

#include <optional>

#include "spa/errors.hpp"

namespace spa {

// Cross-section of the actuator. Distances are measured from the neutral
// surface: a toward the top wall, b toward the bottom wall; w is the overall
// width and t the uniform wall thickness. SI units (meters) throughout; the
// mm boundary lives in the CLI layer.
struct CrossSection {
    double a;
    double b;
    double w;
    double t;

    CrossSection(double a, double b, double w, double t);

    static CrossSection from_mm(double a_mm, double b_mm, double w_mm, double t_mm);

    // nullptr when all invariants hold, otherwise the violated invariant.
    static const char* invariant_violation(double a, double b, double w, double t);
    static bool valid(double a, double b, double w, double t) {
        return invariant_violation(a, b, w, t) == nullptr;
    }

    double height() const { return a + b; }

    // Same section flipped about the neutral surface.
    CrossSection mirrored() const { return CrossSection(b, a, w, t); }
};

struct Material {
    double elastic_modulus;   // Pa
    double n;                 // large-deflection exponent, >= 1
    double density;           // kg/m^3
    double zeta;              // damping ratio, in (0, 1)
    double zeta_perturb;      // half-width of the damping band

    Material(double elastic_modulus, double n, double density, double zeta,
             double zeta_perturb);
};

struct ActuatorDesign {
    CrossSection cross_section;
    Material material;
    double length;                      // initial length L_i, m
    std::optional<double> mass_override;  // pins a measured mass, kg

    ActuatorDesign(CrossSection cs, Material mat, double length,
                   std::optional<double> mass_override = std::nullopt);
};

// Inner rectangle (w - 2t) x (a + b - 2t).
double chamber_area(const CrossSection& cs);

// Full rectangle minus the chamber.
double wall_area(const CrossSection& cs);

// Reaction pressure developed in the wall when chamber pressure P is applied.
double wall_pressure(const CrossSection& cs, double pressure);

// Generalized second moment of area for the large-deflection bending law.
// n = 1 recovers the rectangular-section w*(a+b)^3/12.
double moment_of_inertia(const CrossSection& cs, double n);

// Wall material extruded along the actuator length; chamber interior is air.
// A mass_override on the design wins over the model.
double mass(const ActuatorDesign& design);

}  // namespace spa
