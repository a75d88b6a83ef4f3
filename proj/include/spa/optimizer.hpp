#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spa/geometry.hpp"

namespace spa {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double lo_, double hi_);

    double width() const { return hi - lo; }
    bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
};

// Box bounds on the cross-section plus the optional natural-frequency band.
// All lengths in meters, band in rad/s, mass in kg.
struct DesignSpace {
    Interval a;
    Interval b;
    Interval h;  // bound on a + b
    Interval w;
    Interval t;
    std::optional<Interval> frequency_band;
    std::optional<Interval> mass_bounds;

    // Human-finger-scale defaults: a 2..5, b 14..24, w 10..30, t 1.5..3,
    // h 15..25 (mm).
    static DesignSpace default_bounds();
};

struct OptimizationResult {
    CrossSection params;
    double objective = 0.0;
    long iterations = 0;
    std::vector<std::string> active_constraints;
    bool feasible = false;
};

struct FeasibilityReport {
    bool feasible = false;
    std::optional<CrossSection> witness;
    std::string certificate;
};

// Objective at a single point: normalized_objective at fixed pressure.
// Geometry that violates the cross-section invariants is rejected with a
// -inf sentinel, never clamped.
double evaluate(const CrossSection& point, const Material& material, double length,
                double pressure, double torque_norm, double angle_norm);

// Derived mass bounds for the frequency constraint when the space does not
// pin them: the wall-volume mass model evaluated at the smallest and largest
// sections admitted by the box.
Interval mass_bounds_from_box(const DesignSpace& space, const Material& material,
                              double length);

// Multi-start augmented-Lagrangian solver over the box (bounds by projection,
// h window and frequency band as penalized inequalities). Deterministic for a
// fixed seed. Throws InfeasibleError when the feasible set is provably empty.
OptimizationResult solve(const DesignSpace& space, const Material& material,
                         double length, double pressure, double torque_norm,
                         double angle_norm, std::uint64_t seed = 0, int starts = 8);

// Exhaustive evaluation of the feasible grid; the ground truth the continuous
// solver is tested against. OpenMP-parallel kernel with identical results to
// the serial reference (ties broken by lexicographic grid index).
OptimizationResult grid_oracle(const DesignSpace& space, const Material& material,
                               double length, double pressure, double torque_norm,
                               double angle_norm, double step);

// Serial reference kernel, kept for testing and benchmarking the parallel one.
OptimizationResult grid_oracle_serial(const DesignSpace& space, const Material& material,
                                      double length, double pressure, double torque_norm,
                                      double angle_norm, double step);

// Monotonicity-based feasibility certificate for the frequency band; returns
// a witness point when feasible, otherwise the violated-bound certificate.
FeasibilityReport check_feasibility(const DesignSpace& space, const Material& material,
                                    double length);

}  // namespace spa
