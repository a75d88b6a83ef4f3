#include "spa/control.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "spa/errors.hpp"

namespace spa {

PumpModel::PumpModel(double syringe_area_, double capacity_, double motor_gain_const_,
                     double lead_, double motor_speed_limit_)
    : syringe_area(syringe_area_), capacity(capacity_), motor_gain_const(motor_gain_const_),
      lead(lead_), motor_speed_limit(motor_speed_limit_) {
    if (!(syringe_area > 0.0 && capacity > 0.0 && motor_gain_const > 0.0 &&
          lead > 0.0 && motor_speed_limit > 0.0))
        throw std::invalid_argument("pump model fields must all be positive");
}

double PumpModel::plant_gain(double mass) const {
    if (!(mass > 0.0)) throw std::invalid_argument("plant_gain: mass must be positive");
    return lead * syringe_area * motor_gain_const /
           (2.0 * std::numbers::pi * capacity * mass);
}

StateSpace build_state_space(double omega_n, double zeta, const PumpModel& pump,
                             double mass) {
    if (!(omega_n > 0.0)) throw std::invalid_argument("build_state_space: omega_n > 0 required");
    if (!(zeta > 0.0 && zeta < 1.0))
        throw std::invalid_argument("build_state_space: 0 < zeta < 1 required");
    StateSpace ss;
    ss.A << 0.0, 1.0, 0.0,
            0.0, 0.0, 1.0,
            0.0, -omega_n * omega_n, -2.0 * zeta * omega_n;
    ss.B << 0.0, 0.0, 1.0;
    ss.C << 1.0, 0.0, 0.0;
    ss.plant_gain = pump.plant_gain(mass);
    return ss;
}

Eigen::Matrix3d solve_riccati(const StateSpace& ss, const Eigen::Matrix3d& Q, double R) {
    if (!(R > 0.0)) throw std::invalid_argument("solve_riccati: R must be positive");
    const Eigen::Vector3d b = ss.input_vector();

    Eigen::Matrix<double, 6, 6> hamiltonian;
    hamiltonian.topLeftCorner<3, 3>() = ss.A;
    hamiltonian.topRightCorner<3, 3>() = -b * b.transpose() / R;
    hamiltonian.bottomLeftCorner<3, 3>() = -Q;
    hamiltonian.bottomRightCorner<3, 3>() = -ss.A.transpose();

    Eigen::ComplexEigenSolver<Eigen::Matrix<std::complex<double>, 6, 6>> solver(
        hamiltonian.cast<std::complex<double>>());
    if (solver.info() != Eigen::Success)
        throw NumericError("solve_riccati: eigen decomposition failed");

    // Basis of the closest-to-stable 3-dimensional invariant subspace.
    std::array<int, 6> order{0, 1, 2, 3, 4, 5};
    const auto& values = solver.eigenvalues();
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return values(i).real() < values(j).real(); });

    Eigen::Matrix<std::complex<double>, 3, 3> x1, x2;
    for (int k = 0; k < 3; ++k) {
        const auto v = solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
        x1.col(k) = v.head<3>();
        x2.col(k) = v.tail<3>();
    }
    const Eigen::Matrix<std::complex<double>, 3, 3> x1_inv = x1.fullPivLu().inverse();
    if (!x1_inv.allFinite())
        throw NumericError("solve_riccati: stable subspace is degenerate (not stabilizable)");
    Eigen::Matrix3d y = (x2 * x1_inv).real();
    y = 0.5 * (y + y.transpose().eval());

    const double residual =
        (ss.A.transpose() * y + y * ss.A - y * b * b.transpose() * y / R + Q).norm();
    const double scale = std::max(Q.norm(), 1.0);
    if (!(residual < 1e-8 * scale))
        throw NumericError("solve_riccati: residual " + std::to_string(residual) +
                           " exceeds tolerance");
    return y;
}

Eigen::Vector3d lqr_gain(const Eigen::Matrix3d& Y, const StateSpace& ss, double R) {
    return ss.input_vector().transpose() * Y / R;
}

bool lyapunov_check(const Eigen::Matrix3d& Y, const Eigen::Matrix3d& closed_loop_A) {
    constexpr double tol = 1e-10;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> y_eigs(0.5 * (Y + Y.transpose()));
    if (y_eigs.eigenvalues().minCoeff() <= tol) return false;
    const Eigen::Matrix3d vdot = closed_loop_A.transpose() * Y + Y * closed_loop_A;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> v_eigs(0.5 * (vdot + vdot.transpose()));
    return v_eigs.eigenvalues().maxCoeff() < -tol;
}

LQRDesign LQRDesign::synthesize(const StateSpace& ss, double p, double R,
                                bool normalized_weights) {
    if (!(p >= 0.0)) throw std::invalid_argument("synthesize: p must be non-negative");
    LQRDesign design;
    design.p = p;
    design.R = R;
    double velocity_weight = 0.3;
    if (normalized_weights) {
        const double w = ss.omega_n();
        velocity_weight = 0.3 / (w * w);
    }
    design.Q = Eigen::Vector3d(1.0, velocity_weight, 0.0).asDiagonal();
    design.Q *= p;
    design.Y = solve_riccati(ss, design.Q, R);
    design.gain = lqr_gain(design.Y, ss, R);
    return design;
}

ClosedLoopTrace simulate_closed_loop(const StateSpace& ss, const Eigen::Vector3d& gain,
                                     double reference, double dt, double duration,
                                     double saturation, double zeta_perturb) {
    if (!(dt > 0.0)) throw std::invalid_argument("simulate_closed_loop: dt must be positive");
    if (!(saturation > 0.0))
        throw std::invalid_argument("simulate_closed_loop: saturation must be positive");

    // Perturb only the simulated plant's damping.
    Eigen::Matrix3d a_sim = ss.A;
    if (zeta_perturb != 0.0) {
        const double w = ss.omega_n();
        const double z = std::clamp(ss.zeta() + zeta_perturb, 1e-3, 0.999);
        a_sim(2, 2) = -2.0 * z * w;
    }
    const Eigen::Vector3d b_sim = ss.input_vector();

    const std::size_t steps = static_cast<std::size_t>(std::llround(duration / dt));
    ClosedLoopTrace trace;
    trace.times.reserve(steps + 1);
    trace.reference.reserve(steps + 1);
    trace.angle.reserve(steps + 1);
    trace.command.reserve(steps + 1);

    Eigen::Vector3d x = Eigen::Vector3d::Zero();
    const Eigen::Vector3d x_ref(reference, 0.0, 0.0);
    const int substeps = 20;  // dt/20, finer than the dt/10 contract
    const double hs = dt / substeps;
    const double guard = 50.0 * std::abs(reference) + 10.0;

    auto record = [&](double t_now, double u_now) {
        trace.times.push_back(t_now);
        trace.reference.push_back(reference);
        trace.angle.push_back(x(0));
        trace.command.push_back(u_now);
    };

    double u = std::clamp(-gain.dot(x - x_ref), -saturation, saturation);
    record(0.0, u);
    for (std::size_t k = 0; k < steps; ++k) {
        u = std::clamp(-gain.dot(x - x_ref), -saturation, saturation);
        trace.command.back() = u;  // command decided at the current sample
        auto deriv = [&](const Eigen::Vector3d& s) -> Eigen::Vector3d {
            return a_sim * s + b_sim * u;
        };
        for (int s = 0; s < substeps; ++s) {
            const Eigen::Vector3d k1 = deriv(x);
            const Eigen::Vector3d k2 = deriv(x + 0.5 * hs * k1);
            const Eigen::Vector3d k3 = deriv(x + 0.5 * hs * k2);
            const Eigen::Vector3d k4 = deriv(x + hs * k3);
            x += hs / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        if (!x.allFinite() || std::abs(x(0)) > guard)
            throw NumericError("simulate_closed_loop: trajectory diverged");
        record(static_cast<double>(k + 1) * dt,
               std::clamp(-gain.dot(x - x_ref), -saturation, saturation));
    }

    // Settling: last sample outside the +-2% band marks the entry point.
    const double band = 0.02 * std::abs(reference);
    if (reference == 0.0) {
        trace.settling_time = 0.0;
    } else {
        std::size_t last_outside = 0;
        bool any_outside = false;
        for (std::size_t i = 0; i < trace.times.size(); ++i) {
            if (std::abs(trace.angle[i] - reference) > band) {
                last_outside = i;
                any_outside = true;
            }
        }
        if (!any_outside) {
            trace.settling_time = 0.0;
        } else if (last_outside + 1 >= trace.times.size()) {
            trace.settling_time = std::numeric_limits<double>::infinity();
        } else {
            trace.settling_time = trace.times[last_outside + 1];
        }
    }
    trace.steady_state_error = std::abs(trace.angle.back() - reference);
    return trace;
}

}  // namespace spa
