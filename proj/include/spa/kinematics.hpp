#pragma once

#include "spa/geometry.hpp"

namespace spa {

// Signed torque decomposition. Positive torque bends the actuator toward the
// side with the deeper chamber (the b side when b > a); a negative total
// means the section is oriented against that convention.
struct TorqueBreakdown {
    double t_p;    // chamber-pressure contribution, N*m
    double t_pw;   // wall-reaction contribution, N*m
    double total;  // t_p + t_pw
};

struct BendingResult {
    double angle;             // rad
    double elongation;        // delta L, m
    double elongated_length;  // L_i + delta L, m
};

// Pressure-to-torque model. The chamber pressure acts uniformly over the
// inner rectangle; the wall develops the mirrored reaction pressure acting
// uniformly over the wall region, opposing the chamber moment.
TorqueBreakdown torque(const ActuatorDesign& design, double pressure);

// Pressure-to-bending model,
//   theta(P) = n/(n+1) * (T(P)/(E I_n))^(1/n) * L_i * (1 + P A_c / (A_w E)).
// Throws GeometryError when the total torque is negative (the design bends
// opposite to its orientation; mirror the section instead).
BendingResult bending_angle(const ActuatorDesign& design, double pressure);

// T(P)/torque_norm + theta(P)/angle_norm; the optimization objective.
double normalized_objective(const ActuatorDesign& design, double pressure,
                            double torque_norm, double angle_norm);

// Bench formula for converting a tip force reading into torque.
double measured_torque(double measured_force, double length);

}  // namespace spa
