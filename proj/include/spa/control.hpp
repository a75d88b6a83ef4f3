#pragma once

#include <vector>

#include <Eigen/Dense>

#include "spa/geometry.hpp"

namespace spa {

// Syringe-pump input chain. The DC gain from commanded motor speed (rev/s)
// to angular acceleration input is lead * A_s * c / (2 pi C_s M).
struct PumpModel {
    double syringe_area;      // m^2
    double capacity;          // m^3/Pa, compliance of the actuator volume
    double motor_gain_const;  // experimentally calibrated scale
    double lead;              // m/rev
    double motor_speed_limit; // rev/s

    PumpModel(double syringe_area, double capacity, double motor_gain_const,
              double lead, double motor_speed_limit);

    double plant_gain(double mass) const;
};

// Third-order plant in controllable canonical form, x = [theta, theta', theta''].
// The pump gain stays an explicit scalar on the input path so the states keep
// physical units.
struct StateSpace {
    Eigen::Matrix3d A;
    Eigen::Vector3d B;        // (0, 0, 1)
    Eigen::RowVector3d C;     // (1, 0, 0)
    double plant_gain = 1.0;

    double omega_n() const { return std::sqrt(-A(2, 1)); }
    double zeta() const { return -A(2, 2) / (2.0 * omega_n()); }
    Eigen::Vector3d input_vector() const { return B * plant_gain; }
};

StateSpace build_state_space(double omega_n, double zeta, const PumpModel& pump,
                             double mass);

// Stabilizing solution of A'Y + YA - Y B R^-1 B' Y + Q = 0 via the stable
// invariant subspace of the Hamiltonian matrix. The input path includes the
// plant gain. Throws NumericError if the residual is out of tolerance.
Eigen::Matrix3d solve_riccati(const StateSpace& ss, const Eigen::Matrix3d& Q, double R);

// u = -R^-1 B' Y x with the gain-scaled input path.
Eigen::Vector3d lqr_gain(const Eigen::Matrix3d& Y, const StateSpace& ss, double R);

// True iff Y is positive definite and Acl'Y + YAcl is negative definite.
bool lyapunov_check(const Eigen::Matrix3d& Y, const Eigen::Matrix3d& closed_loop_A);

struct LQRDesign {
    Eigen::Matrix3d Q;
    double R = 1.0;
    double p = 100.0;
    Eigen::Matrix3d Y;
    Eigen::Vector3d gain;

    // Q = p diag(1, 0.3, 0). With normalized_weights the weights apply to the
    // frequency-normalized states (theta, theta'/w_n, theta''/w_n^2), i.e.
    // Q = p diag(1, 0.3/w_n^2, 0) on physical states.
    static LQRDesign synthesize(const StateSpace& ss, double p, double R,
                                bool normalized_weights = true);
};

struct ClosedLoopTrace {
    std::vector<double> times;      // s, sample instants
    std::vector<double> reference;  // rad
    std::vector<double> angle;      // rad
    std::vector<double> command;    // rev/s, post-saturation
    double settling_time = 0.0;     // first entry into the +-2% band with no later exit
    double steady_state_error = 0.0;
};

// Sampled closed loop: zero-order-hold control at period dt, command clamped
// to +-saturation, plant integrated with RK4 substeps <= dt/10. A nonzero
// zeta_perturb shifts the simulated plant's damping, not the designed gain.
ClosedLoopTrace simulate_closed_loop(const StateSpace& ss, const Eigen::Vector3d& gain,
                                     double reference, double dt, double duration,
                                     double saturation, double zeta_perturb = 0.0);

}  // namespace spa
