#include "spa/kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace spa {

namespace {
inline double sq(double x) { return x * x; }
}  // namespace

TorqueBreakdown torque(const ActuatorDesign& design, double pressure) {
    if (!(pressure >= 0.0))
        throw std::invalid_argument("torque: pressure must be non-negative");
    const CrossSection& cs = design.cross_section;

    // First moments about the neutral surface, positive toward the b side.
    const double chamber_moment =
        (cs.w - 2.0 * cs.t) * (sq(cs.b - cs.t) - sq(cs.a - cs.t)) / 2.0;
    const double wall_moment = cs.w * (sq(cs.b) - sq(cs.a)) / 2.0 - chamber_moment;

    // The wall reaction scales with the chamber area on the deep side, which
    // is the mirrored form of the wall-pressure ratio.
    const double reaction = wall_pressure(cs.mirrored(), pressure);

    const double t_p = pressure * chamber_moment;
    const double t_pw = -reaction * wall_moment;
    return TorqueBreakdown{t_p, t_pw, t_p + t_pw};
}

BendingResult bending_angle(const ActuatorDesign& design, double pressure) {
    const TorqueBreakdown tq = torque(design, pressure);
    if (tq.total < 0.0)
        throw GeometryError(
            "bending_angle: total torque is negative, the design bends opposite "
            "to its orientation (mirror the cross-section)");

    const CrossSection& cs = design.cross_section;
    const Material& mat = design.material;
    const double area_c = chamber_area(cs);
    const double area_w = wall_area(cs);
    const double inertia = moment_of_inertia(cs, mat.n);

    const double elongation =
        pressure * area_c * design.length / (area_w * mat.elastic_modulus);
    const double angle = mat.n / (mat.n + 1.0) *
                         std::pow(tq.total / (mat.elastic_modulus * inertia), 1.0 / mat.n) *
                         (design.length + elongation);
    return BendingResult{angle, elongation, design.length + elongation};
}

double normalized_objective(const ActuatorDesign& design, double pressure,
                            double torque_norm, double angle_norm) {
    if (!(torque_norm > 0.0) || !(angle_norm > 0.0))
        throw std::invalid_argument("normalized_objective: normalizers must be positive");
    const TorqueBreakdown tq = torque(design, pressure);
    const BendingResult bend = bending_angle(design, pressure);
    return tq.total / torque_norm + bend.angle / angle_norm;
}

double measured_torque(double measured_force, double length) {
    if (!(length > 0.0))
        throw std::invalid_argument("measured_torque: length must be positive");
    return measured_force * length;
}

}  // namespace spa
