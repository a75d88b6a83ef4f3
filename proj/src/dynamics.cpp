#include "spa/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "spa/errors.hpp"

namespace spa {

DynamicModel DynamicModel::from_design(const ActuatorDesign& design) {
    const double m = mass(design);
    return DynamicModel{natural_frequency(design), design.material.zeta,
                        design.material.n, m, 1.0 / m};
}

double spring_constant(const ActuatorDesign& design) {
    const double n = design.material.n;
    const double inertia = moment_of_inertia(design.cross_section, n);
    return std::pow((n + 1.0) / n, n) * design.material.elastic_modulus * inertia /
           std::pow(design.length, n + 1.0);
}

double natural_frequency(const ActuatorDesign& design) {
    const double m = mass(design);
    if (!(m > 0.0)) throw std::invalid_argument("natural_frequency: mass must be positive");
    return std::sqrt(spring_constant(design) / m);
}

std::pair<double, double> frequency_constraint_bounds(double omega_lo, double omega_hi,
                                                      double mass_lo, double mass_hi,
                                                      double length, double n) {
    if (!(omega_lo <= omega_hi))
        throw std::invalid_argument("frequency_constraint_bounds: omega_lo <= omega_hi required");
    if (!(mass_lo <= mass_hi))
        throw std::invalid_argument("frequency_constraint_bounds: mass_lo <= mass_hi required");
    if (!(omega_lo > 0.0) || !(mass_lo > 0.0) || !(length > 0.0))
        throw std::invalid_argument("frequency_constraint_bounds: inputs must be positive");
    if (!(n >= 1.0))
        throw std::invalid_argument("frequency_constraint_bounds: n must be >= 1");
    const double factor =
        std::pow(n / (n + 1.0), n) * std::pow(2.0, n + 1.0) * (n + 2.0) *
        std::pow(length, n + 1.0);
    return {factor * mass_lo * omega_lo * omega_lo,
            factor * mass_hi * omega_hi * omega_hi};
}

namespace {

// Odd extension keeps the restoring term well-defined for fractional n.
inline double signed_pow(double x, double n) {
    return x >= 0.0 ? std::pow(x, n) : -std::pow(-x, n);
}

StepTrace integrate(const DynamicModel& model, const std::vector<double>& force,
                    double dt, double duration, double guard) {
    if (!(dt > 0.0)) throw std::invalid_argument("simulate_open_loop: dt must be positive");
    if (!(duration >= dt))
        throw std::invalid_argument("simulate_open_loop: duration must be >= dt");

    const std::size_t steps = static_cast<std::size_t>(std::llround(duration / dt));
    StepTrace trace;
    trace.dt = dt;
    trace.times.reserve(steps + 1);
    trace.angles.reserve(steps + 1);
    trace.velocities.reserve(steps + 1);

    double theta = 0.0, vel = 0.0;
    trace.times.push_back(0.0);
    trace.angles.push_back(theta);
    trace.velocities.push_back(vel);

    const double w2 = model.omega_n * model.omega_n;
    const double damp = 2.0 * model.zeta * model.omega_n;
    for (std::size_t k = 0; k < steps; ++k) {
        const double f = force.empty() ? 0.0 : force[std::min(k, force.size() - 1)];
        const double drive = f * model.force_gain;
        auto accel = [&](double th, double v) {
            return drive - damp * v - w2 * signed_pow(th, model.n);
        };
        const double k1t = vel, k1v = accel(theta, vel);
        const double k2t = vel + 0.5 * dt * k1v, k2v = accel(theta + 0.5 * dt * k1t, vel + 0.5 * dt * k1v);
        const double k3t = vel + 0.5 * dt * k2v, k3v = accel(theta + 0.5 * dt * k2t, vel + 0.5 * dt * k2v);
        const double k4t = vel + dt * k3v, k4v = accel(theta + dt * k3t, vel + dt * k3v);
        theta += dt / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
        vel += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        if (!std::isfinite(theta) || std::abs(theta) > guard)
            throw NumericError("simulate_open_loop: trajectory diverged past guard");
        trace.times.push_back(static_cast<double>(k + 1) * dt);
        trace.angles.push_back(theta);
        trace.velocities.push_back(vel);
    }
    return trace;
}

}  // namespace

StepTrace simulate_open_loop(const DynamicModel& model, double force, double dt,
                             double duration, double divergence_guard) {
    return integrate(model, std::vector<double>{force}, dt, duration, divergence_guard);
}

StepTrace simulate_open_loop(const DynamicModel& model, const std::vector<double>& force,
                             double dt, double duration, double divergence_guard) {
    return integrate(model, force, dt, duration, divergence_guard);
}

namespace {

// Underdamped unit-step response scaled by gain.
inline double step_model(double t, double gain, double omega, double zeta) {
    const double zc = std::clamp(zeta, 1e-6, 0.999999);
    const double wd = omega * std::sqrt(1.0 - zc * zc);
    const double decay = std::exp(-zc * omega * t);
    return gain * (1.0 - decay * (std::cos(wd * t) +
                                  zc / std::sqrt(1.0 - zc * zc) * std::sin(wd * t)));
}

}  // namespace

SecondOrderFit identify_second_order(const StepTrace& trace, double step_amplitude) {
    const std::size_t m = trace.times.size();
    if (m < 10 || trace.angles.size() != m)
        throw std::invalid_argument("identify_second_order: need a trace of >= 10 samples");
    if (step_amplitude == 0.0)
        throw IdentificationError("identify_second_order: zero step amplitude");

    // Seed: steady level from the tail, omega from the first peak (or the 63%
    // rise when the response has no usable overshoot), zeta by log decrement.
    double tail = 0.0;
    const std::size_t tail_start = m - std::max<std::size_t>(m / 10, 2);
    for (std::size_t i = tail_start; i < m; ++i) tail += trace.angles[i];
    tail /= static_cast<double>(m - tail_start);

    double span = 0.0;
    for (double th : trace.angles) span = std::max(span, std::abs(th));
    if (span < 1e-12 || std::abs(tail) < 1e-12)
        throw IdentificationError("identify_second_order: degenerate (flat) trace");

    std::size_t ipk = 0;
    for (std::size_t i = 1; i < m; ++i)
        if (trace.angles[i] > trace.angles[ipk]) ipk = i;
    double gain = tail, omega = 1.0, zeta = 0.7;
    const double overshoot = (trace.angles[ipk] - tail) / tail;
    if (overshoot > 1e-3 && ipk > 0 && ipk < m - 1) {
        const double ln_m = std::log(overshoot);
        zeta = -ln_m / std::sqrt(M_PI * M_PI + ln_m * ln_m);
        omega = M_PI / (trace.times[ipk] * std::sqrt(1.0 - zeta * zeta));
    } else {
        std::size_t i63 = m - 1;
        for (std::size_t i = 0; i < m; ++i)
            if (trace.angles[i] >= 0.632 * tail) { i63 = i; break; }
        zeta = 0.9;
        omega = 1.0 / std::max(trace.times[i63], 1e-6);
    }

    // Gauss-Newton on (gain, omega, zeta) with a numeric Jacobian.
    std::array<double, 3> p{gain, omega, zeta};
    double rms = 0.0;
    bool converged = false;
    for (int iter = 0; iter < 80 && !converged; ++iter) {
        std::array<double, 3> g{};            // J^T r
        std::array<std::array<double, 3>, 3> h{};  // J^T J
        rms = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double t = trace.times[i];
            const double f = step_model(t, p[0], p[1], p[2]);
            const double r = f - trace.angles[i];
            rms += r * r;
            std::array<double, 3> jr;
            for (int j = 0; j < 3; ++j) {
                const double d = 1e-6 * std::max(std::abs(p[j]), 1e-3);
                std::array<double, 3> q = p;
                q[j] += d;
                jr[j] = (step_model(t, q[0], q[1], q[2]) - f) / d;
            }
            for (int j = 0; j < 3; ++j) {
                g[j] += jr[j] * r;
                for (int k = 0; k < 3; ++k) h[j][k] += jr[j] * jr[k];
            }
        }
        rms = std::sqrt(rms / static_cast<double>(m));

        // Solve h * dp = -g (3x3 Gaussian elimination with a ridge).
        std::array<std::array<double, 4>, 3> aug{};
        for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) aug[j][k] = h[j][k];
            aug[j][j] += 1e-12 * (1.0 + h[j][j]);
            aug[j][3] = -g[j];
        }
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int r2 = col + 1; r2 < 3; ++r2)
                if (std::abs(aug[r2][col]) > std::abs(aug[piv][col])) piv = r2;
            std::swap(aug[col], aug[piv]);
            if (std::abs(aug[col][col]) < 1e-300)
                throw IdentificationError("identify_second_order: singular normal equations");
            for (int r2 = 0; r2 < 3; ++r2) {
                if (r2 == col) continue;
                const double fac = aug[r2][col] / aug[col][col];
                for (int k = col; k < 4; ++k) aug[r2][k] -= fac * aug[col][k];
            }
        }
        double step_norm = 0.0;
        for (int j = 0; j < 3; ++j) {
            const double dp = aug[j][3] / aug[j][j];
            p[j] += dp;
            step_norm = std::max(step_norm, std::abs(dp) / std::max(std::abs(p[j]), 1e-9));
        }
        p[2] = std::clamp(p[2], 1e-4, 0.9999);
        if (p[1] <= 0.0) p[1] = omega;
        converged = step_norm < 1e-11;
    }

    const double rel_residual = rms / std::abs(p[0]);
    if (!converged && rel_residual > 0.05)
        throw IdentificationError("identify_second_order: fit did not converge, relative residual " +
                                  std::to_string(rel_residual));
    return SecondOrderFit{p[1], p[2], p[0], rel_residual};
}

PowerLawFit fit_stress_strain(const std::vector<double>& strain,
                              const std::vector<double>& stress) {
    if (strain.size() != stress.size() || strain.size() < 2)
        throw std::invalid_argument("fit_stress_strain: need >= 2 matched samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < strain.size(); ++i) {
        if (!(strain[i] > 0.0) || !(stress[i] > 0.0)) continue;
        const double x = std::log(strain[i]);
        const double y = std::log(stress[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++count;
    }
    if (count < 2)
        throw std::invalid_argument("fit_stress_strain: need >= 2 positive samples");
    const double denom = count * sxx - sx * sx;
    if (std::abs(denom) < 1e-300)
        throw NumericError("fit_stress_strain: strain values are all equal");
    const double n = (count * sxy - sx * sy) / denom;
    const double logc = (sy - n * sx) / count;

    double rss = 0.0;
    for (std::size_t i = 0; i < strain.size(); ++i) {
        if (!(strain[i] > 0.0) || !(stress[i] > 0.0)) continue;
        const double r = std::log(stress[i]) - (logc + n * std::log(strain[i]));
        rss += r * r;
    }
    return PowerLawFit{std::exp(logc), n, std::sqrt(rss / count)};
}

}  // namespace spa
