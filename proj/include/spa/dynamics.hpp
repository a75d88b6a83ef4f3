#pragma once

#include <utility>
#include <vector>

#include "spa/geometry.hpp"

namespace spa {

// Parameters of theta'' + 2 zeta w_n theta' + w_n^2 theta^n = F/M.
struct DynamicModel {
    double omega_n;     // rad/s
    double zeta;        // damping ratio
    double n;           // spring exponent
    double mass;        // kg
    double force_gain;  // 1/mass

    static DynamicModel from_design(const ActuatorDesign& design);
};

// Uniform-grid simulation output.
struct StepTrace {
    double dt = 0.0;
    std::vector<double> times;
    std::vector<double> angles;
    std::vector<double> velocities;
};

// K = ((n+1)/n)^n * E I_n / L^(n+1); the equivalent spring of the beam,
// satisfying F = K theta^n at static equilibrium.
double spring_constant(const ActuatorDesign& design);

// w_n = sqrt(K / M).
double natural_frequency(const ActuatorDesign& design);

// Bounds (C1, C2) for the dimensional constraint C1 <= E w (a+b)^(n+2) <= C2
// equivalent to placing w_n inside [omega_lo, omega_hi] given mass bounds:
//   C_k = (n/(n+1))^n * 2^(n+1) * (n+2) * M_k * omega_k^2 * L^(n+1).
std::pair<double, double> frequency_constraint_bounds(double omega_lo, double omega_hi,
                                                      double mass_lo, double mass_hi,
                                                      double length, double n);

// Fixed-step RK4 integration of the nonlinear model from rest under a
// constant forcing term. Throws NumericError past the divergence guard.
StepTrace simulate_open_loop(const DynamicModel& model, double force, double dt,
                             double duration, double divergence_guard = 1e4);

// Same with a sampled forcing series (zero-order hold per step).
StepTrace simulate_open_loop(const DynamicModel& model, const std::vector<double>& force,
                             double dt, double duration, double divergence_guard = 1e4);

struct SecondOrderFit {
    double omega_n;
    double zeta;
    double gain;      // steady-state level of the fit
    double residual;  // relative RMS misfit
};

// Least-squares fit of the underdamped linear step response to a trace.
// Log-decrement/rise-time seeding followed by Gauss-Newton refinement.
SecondOrderFit identify_second_order(const StepTrace& trace, double step_amplitude);

struct PowerLawFit {
    double coefficient;  // c in sigma = c * eps^n
    double exponent;     // n
    double residual;     // RMS misfit in log space
};

// Fits sigma = c * eps^n by linear least squares on log sigma vs log eps.
PowerLawFit fit_stress_strain(const std::vector<double>& strain,
                              const std::vector<double>& stress);

}  // namespace spa
