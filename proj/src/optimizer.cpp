#include "spa/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "spa/dynamics.hpp"
#include "spa/errors.hpp"
#include "spa/kinematics.hpp"

namespace spa {

namespace {

constexpr double kRejected = -std::numeric_limits<double>::infinity();
constexpr std::size_t kGridGuard = 10'000'000;

double objective_or_reject(double a, double b, double w, double t, const Material& material,
                           double length, double pressure, double torque_norm,
                           double angle_norm) {
    if (!CrossSection::valid(a, b, w, t)) return kRejected;
    const CrossSection cs(a, b, w, t);
    const ActuatorDesign design(cs, material, length);
    const TorqueBreakdown tq = torque(design, pressure);
    if (tq.total < 0.0) return kRejected;
    const BendingResult bend = bending_angle(design, pressure);
    return tq.total / torque_norm + bend.angle / angle_norm;
}

// E * w * (a+b)^(n+2), the monotone quantity bounded by the frequency band.
double stiffness_measure(double w, double h, const Material& material) {
    return material.elastic_modulus * w * std::pow(h, material.n + 2.0);
}

struct BandConstraint {
    double c1 = 0.0;
    double c2 = 0.0;
    bool active = false;
};

BandConstraint band_constraint(const DesignSpace& space, const Material& material,
                               double length) {
    BandConstraint out;
    if (!space.frequency_band) return out;
    const Interval masses = space.mass_bounds
                                ? *space.mass_bounds
                                : mass_bounds_from_box(space, material, length);
    const auto [c1, c2] =
        frequency_constraint_bounds(space.frequency_band->lo, space.frequency_band->hi,
                                    masses.lo, masses.hi, length, material.n);
    out.c1 = c1;
    out.c2 = c2;
    out.active = true;
    return out;
}

// Effective h window after intersecting the explicit bound with a+b reach.
Interval effective_height(const DesignSpace& space) {
    return Interval(std::max(space.h.lo, space.a.lo + space.b.lo),
                    std::min(space.h.hi, space.a.hi + space.b.hi));
}

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double unit_double(std::uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

struct GridAxis {
    double lo;
    double step;
    std::size_t count;

    double value(std::size_t i) const { return lo + static_cast<double>(i) * step; }
};

GridAxis make_axis(const Interval& iv, double step) {
    const std::size_t count =
        static_cast<std::size_t>(std::floor(iv.width() / step + 1e-9)) + 1;
    return GridAxis{iv.lo, step, count};
}

struct GridBest {
    double objective = kRejected;
    std::size_t index = std::numeric_limits<std::size_t>::max();

    // Exact comparator; ties resolved toward the smaller linear index so the
    // reduction is order-independent.
    bool better_than(const GridBest& other) const {
        if (objective != other.objective) return objective > other.objective;
        return index < other.index;
    }
};

}  // namespace

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo <= hi))
        throw std::invalid_argument("interval is empty (lo > hi)");
}

DesignSpace DesignSpace::default_bounds() {
    DesignSpace s;
    s.a = Interval(2e-3, 5e-3);
    s.b = Interval(14e-3, 24e-3);
    s.h = Interval(15e-3, 25e-3);
    s.w = Interval(10e-3, 30e-3);
    s.t = Interval(1.5e-3, 3e-3);
    return s;
}

double evaluate(const CrossSection& point, const Material& material, double length,
                double pressure, double torque_norm, double angle_norm) {
    return objective_or_reject(point.a, point.b, point.w, point.t, material, length,
                               pressure, torque_norm, angle_norm);
}

Interval mass_bounds_from_box(const DesignSpace& space, const Material& material,
                              double length) {
    const Interval h = effective_height(space);
    if (h.lo > h.hi)
        throw InfeasibleError("mass_bounds_from_box: empty height window");
    // Wall area w*h - (w-2t)(h-2t) increases in every dimension.
    const double area_lo = space.w.lo * h.lo - (space.w.lo - 2 * space.t.lo) * (h.lo - 2 * space.t.lo);
    const double area_hi = space.w.hi * h.hi - (space.w.hi - 2 * space.t.hi) * (h.hi - 2 * space.t.hi);
    return Interval(material.density * area_lo * length,
                    material.density * area_hi * length);
}

FeasibilityReport check_feasibility(const DesignSpace& space, const Material& material,
                                    double length) {
    FeasibilityReport report;
    const Interval h = effective_height(space);
    if (h.lo > h.hi) {
        report.certificate = "height window [h_lo, h_hi] does not intersect a+b reach";
        return report;
    }
    BandConstraint band;
    try {
        band = band_constraint(space, material, length);
    } catch (const std::invalid_argument& e) {
        report.certificate = e.what();
        return report;
    }
    if (band.active) {
        // E w (a+b)^(n+2) is increasing in w, a, b: the box extremes bound it.
        const double vmin = stiffness_measure(space.w.lo, h.lo, material);
        const double vmax = stiffness_measure(space.w.hi, h.hi, material);
        std::ostringstream cert;
        if (vmin > band.c2) {
            cert << "box minimum of E*w*(a+b)^(n+2) = " << vmin
                 << " exceeds C2 = " << band.c2;
            report.certificate = cert.str();
            return report;
        }
        if (vmax < band.c1) {
            cert << "box maximum of E*w*(a+b)^(n+2) = " << vmax
                 << " is below C1 = " << band.c1;
            report.certificate = cert.str();
            return report;
        }
    }
    // Coarse scan for a concrete witness.
    const int divisions = 12;
    for (int ia = 0; ia <= divisions; ++ia)
        for (int ib = 0; ib <= divisions; ++ib)
            for (int iw = 0; iw <= divisions; ++iw) {
                const double a = space.a.lo + space.a.width() * ia / divisions;
                const double b = space.b.lo + space.b.width() * ib / divisions;
                const double w = space.w.lo + space.w.width() * iw / divisions;
                const double t = space.t.lo;
                const double hh = a + b;
                if (!space.h.contains(hh) || !CrossSection::valid(a, b, w, t)) continue;
                if (band.active) {
                    const double v = stiffness_measure(w, hh, material);
                    if (v < band.c1 || v > band.c2) continue;
                }
                report.feasible = true;
                report.witness = CrossSection(a, b, w, t);
                report.certificate = "witness found";
                return report;
            }
    report.certificate = "no feasible point located by the witness scan";
    return report;
}

namespace {

struct GridProblem {
    GridAxis a, b, w, t;
    const DesignSpace* space;
    const Material* material;
    double length, pressure, torque_norm, angle_norm;
    BandConstraint band;

    std::size_t total() const { return a.count * b.count * w.count * t.count; }

    double eval_linear(std::size_t idx) const {
        const std::size_t it = idx % t.count;
        idx /= t.count;
        const std::size_t iw = idx % w.count;
        idx /= w.count;
        const std::size_t ib = idx % b.count;
        const std::size_t ia = idx / b.count;
        const double av = a.value(ia), bv = b.value(ib), wv = w.value(iw), tv = t.value(it);
        const double h = av + bv;
        if (!space->h.contains(h, 1e-12)) return kRejected;
        if (band.active) {
            const double v = stiffness_measure(wv, h, *material);
            if (v < band.c1 || v > band.c2) return kRejected;
        }
        return objective_or_reject(av, bv, wv, tv, *material, length, pressure,
                                   torque_norm, angle_norm);
    }

    CrossSection point(std::size_t idx) const {
        const std::size_t it = idx % t.count;
        idx /= t.count;
        const std::size_t iw = idx % w.count;
        idx /= w.count;
        const std::size_t ib = idx % b.count;
        const std::size_t ia = idx / b.count;
        return CrossSection(a.value(ia), b.value(ib), w.value(iw), t.value(it));
    }
};

GridProblem make_grid_problem(const DesignSpace& space, const Material& material,
                              double length, double pressure, double torque_norm,
                              double angle_norm, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("grid_oracle: step must be positive");
    GridProblem p{make_axis(space.a, step), make_axis(space.b, step),
                  make_axis(space.w, step), make_axis(space.t, step),
                  &space, &material, length, pressure, torque_norm, angle_norm,
                  band_constraint(space, material, length)};
    if (p.total() > kGridGuard)
        throw std::invalid_argument(
            "grid_oracle: grid of " + std::to_string(p.total()) +
            " points exceeds the guard; use a coarser step");
    return p;
}

OptimizationResult finish_grid(const GridProblem& problem, const GridBest& best) {
    if (best.objective == kRejected)
        throw InfeasibleError("grid_oracle: no feasible grid point");
    OptimizationResult result{problem.point(best.index), best.objective,
                              static_cast<long>(problem.total()), {}, true};
    return result;
}

}  // namespace

OptimizationResult grid_oracle_serial(const DesignSpace& space, const Material& material,
                                      double length, double pressure, double torque_norm,
                                      double angle_norm, double step) {
    const GridProblem problem = make_grid_problem(space, material, length, pressure,
                                                  torque_norm, angle_norm, step);
    GridBest best;
    const std::size_t total = problem.total();
    for (std::size_t idx = 0; idx < total; ++idx) {
        const GridBest candidate{problem.eval_linear(idx), idx};
        if (candidate.better_than(best)) best = candidate;
    }
    return finish_grid(problem, best);
}

OptimizationResult grid_oracle(const DesignSpace& space, const Material& material,
                               double length, double pressure, double torque_norm,
                               double angle_norm, double step) {
    const GridProblem problem = make_grid_problem(space, material, length, pressure,
                                                  torque_norm, angle_norm, step);
    GridBest best;
    const std::size_t total = problem.total();
#ifdef _OPENMP
#pragma omp parallel
    {
        GridBest local;
#pragma omp for schedule(static) nowait
        for (long long idx = 0; idx < static_cast<long long>(total); ++idx) {
            const GridBest candidate{problem.eval_linear(static_cast<std::size_t>(idx)),
                                     static_cast<std::size_t>(idx)};
            if (candidate.better_than(local)) local = candidate;
        }
#pragma omp critical(spa_grid_reduce)
        {
            if (local.better_than(best)) best = local;
        }
    }
#else
    for (std::size_t idx = 0; idx < total; ++idx) {
        const GridBest candidate{problem.eval_linear(idx), idx};
        if (candidate.better_than(best)) best = candidate;
    }
#endif
    return finish_grid(problem, best);
}

namespace {

// Augmented-Lagrangian state for one start point. Box bounds are handled by
// projection; the h window and frequency band are inequality constraints.
struct LocalSolve {
    std::array<double, 4> x;  // a, b, w, t in meters
    double objective = kRejected;
    long iterations = 0;
    bool feasible = false;
};

struct SolveContext {
    const DesignSpace* space;
    const Material* material;
    double length, pressure, torque_norm, angle_norm;
    BandConstraint band;
    double band_scale = 1.0;
    double h_scale = 1.0;

    std::array<double, 4> lo() const {
        return {space->a.lo, space->b.lo, space->w.lo, space->t.lo};
    }
    std::array<double, 4> hi() const {
        return {space->a.hi, space->b.hi, space->w.hi, space->t.hi};
    }

    // Nondimensionalized inequality constraints, c_i(x) <= 0.
    std::array<double, 4> constraints(const std::array<double, 4>& x) const {
        const double h = x[0] + x[1];
        std::array<double, 4> c{(space->h.lo - h) / h_scale, (h - space->h.hi) / h_scale,
                                0.0, 0.0};
        if (band.active) {
            const double v = stiffness_measure(x[2], h, *material);
            c[2] = (band.c1 - v) / band_scale;
            c[3] = (v - band.c2) / band_scale;
        }
        return c;
    }

    double objective_at(const std::array<double, 4>& x) const {
        return objective_or_reject(x[0], x[1], x[2], x[3], *material, length, pressure,
                                   torque_norm, angle_norm);
    }
};

double augmented_lagrangian(const SolveContext& ctx, const std::array<double, 4>& x,
                            const std::array<double, 4>& lambda, double mu) {
    const double obj = ctx.objective_at(x);
    if (obj == kRejected) return std::numeric_limits<double>::infinity();
    double value = -obj;
    const auto c = ctx.constraints(x);
    for (int i = 0; i < 4; ++i) {
        const double shifted = std::max(0.0, lambda[i] + mu * c[i]);
        value += (shifted * shifted - lambda[i] * lambda[i]) / (2.0 * mu);
    }
    return value;
}

LocalSolve solve_from(const SolveContext& ctx, std::array<double, 4> x) {
    const auto lo = ctx.lo();
    const auto hi = ctx.hi();
    auto project = [&](std::array<double, 4>& p) {
        for (int i = 0; i < 4; ++i) p[i] = std::clamp(p[i], lo[i], hi[i]);
    };
    project(x);

    std::array<double, 4> lambda{};
    double mu = 10.0;
    LocalSolve out;
    const double fd = 1e-7;  // meters; objective is smooth at this scale

    for (int outer = 0; outer < 12; ++outer) {
        double step = 1e-3;
        for (int inner = 0; inner < 400; ++inner) {
            ++out.iterations;
            const double f0 = augmented_lagrangian(ctx, x, lambda, mu);
            std::array<double, 4> grad{};
            for (int i = 0; i < 4; ++i) {
                std::array<double, 4> xp = x, xm = x;
                xp[i] = std::min(x[i] + fd, hi[i]);
                xm[i] = std::max(x[i] - fd, lo[i]);
                const double span = xp[i] - xm[i];
                grad[i] = span > 0.0
                              ? (augmented_lagrangian(ctx, xp, lambda, mu) -
                                 augmented_lagrangian(ctx, xm, lambda, mu)) / span
                              : 0.0;
            }
            double gnorm = 0.0;
            std::array<double, 4> trial;
            bool accepted = false;
            for (int bt = 0; bt < 40 && !accepted; ++bt) {
                trial = x;
                for (int i = 0; i < 4; ++i) trial[i] -= step * grad[i];
                project(trial);
                const double ft = augmented_lagrangian(ctx, trial, lambda, mu);
                if (ft < f0 - 1e-14) {
                    accepted = true;
                } else {
                    step *= 0.5;
                }
            }
            for (int i = 0; i < 4; ++i) gnorm = std::max(gnorm, std::abs(trial[i] - x[i]));
            x = trial;
            step = std::min(step * 2.0, 1e-2);
            if (!accepted || gnorm < 1e-10) break;
        }
        const auto c = ctx.constraints(x);
        double worst = 0.0;
        for (int i = 0; i < 4; ++i) {
            lambda[i] = std::max(0.0, lambda[i] + mu * c[i]);
            worst = std::max(worst, c[i]);
        }
        if (worst < 1e-10 && outer > 0) break;
        mu *= 4.0;
    }

    out.x = x;
    out.objective = ctx.objective_at(x);
    const auto c = ctx.constraints(x);
    out.feasible = out.objective != kRejected &&
                   std::all_of(c.begin(), c.end(), [](double v) { return v <= 1e-9; });
    return out;
}

}  // namespace

OptimizationResult solve(const DesignSpace& space, const Material& material, double length,
                         double pressure, double torque_norm, double angle_norm,
                         std::uint64_t seed, int starts) {
    if (starts < 1) throw std::invalid_argument("solve: need at least one start");
    const FeasibilityReport feas = check_feasibility(space, material, length);
    if (!feas.feasible)
        throw InfeasibleError("solve: feasible set is empty: " + feas.certificate);

    SolveContext ctx{&space, &material, length, pressure, torque_norm, angle_norm,
                     band_constraint(space, material, length)};
    ctx.h_scale = std::max(space.h.hi, 1e-9);
    if (ctx.band.active) ctx.band_scale = std::max(ctx.band.c2, 1e-30);

    // Deterministic start set: box center, the feasibility witness, then
    // seeded quasi-random interior points.
    std::vector<std::array<double, 4>> start_points;
    start_points.push_back({(space.a.lo + space.a.hi) / 2, (space.b.lo + space.b.hi) / 2,
                            (space.w.lo + space.w.hi) / 2, (space.t.lo + space.t.hi) / 2});
    if (feas.witness)
        start_points.push_back(
            {feas.witness->a, feas.witness->b, feas.witness->w, feas.witness->t});
    std::uint64_t rng = seed ^ 0x5bf0363546e57ecaULL;
    while (start_points.size() < static_cast<std::size_t>(starts)) {
        start_points.push_back({space.a.lo + space.a.width() * unit_double(rng),
                                space.b.lo + space.b.width() * unit_double(rng),
                                space.w.lo + space.w.width() * unit_double(rng),
                                space.t.lo + space.t.width() * unit_double(rng)});
    }

    std::vector<LocalSolve> locals(start_points.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long long i = 0; i < static_cast<long long>(start_points.size()); ++i)
        locals[static_cast<std::size_t>(i)] = solve_from(ctx, start_points[static_cast<std::size_t>(i)]);

    const LocalSolve* best = nullptr;
    long total_iterations = 0;
    for (const auto& cand : locals) {
        total_iterations += cand.iterations;
        if (!cand.feasible) continue;
        if (!best || cand.objective > best->objective ||
            (cand.objective == best->objective && cand.x < best->x))
            best = &cand;
    }
    if (!best)
        throw InfeasibleError("solve: no start converged to a feasible point");

    OptimizationResult result{CrossSection(best->x[0], best->x[1], best->x[2], best->x[3]),
                              best->objective, total_iterations, {}, true};

    const double tol = 1e-6;
    auto near = [&](double x, double bound, double scale) {
        return std::abs(x - bound) <= tol * std::max(scale, 1e-12);
    };
    if (near(best->x[0], space.a.lo, space.a.hi)) result.active_constraints.push_back("a_lo");
    if (near(best->x[0], space.a.hi, space.a.hi)) result.active_constraints.push_back("a_hi");
    if (near(best->x[1], space.b.lo, space.b.hi)) result.active_constraints.push_back("b_lo");
    if (near(best->x[1], space.b.hi, space.b.hi)) result.active_constraints.push_back("b_hi");
    if (near(best->x[2], space.w.lo, space.w.hi)) result.active_constraints.push_back("w_lo");
    if (near(best->x[2], space.w.hi, space.w.hi)) result.active_constraints.push_back("w_hi");
    if (near(best->x[3], space.t.lo, space.t.hi)) result.active_constraints.push_back("t_lo");
    if (near(best->x[3], space.t.hi, space.t.hi)) result.active_constraints.push_back("t_hi");
    const double h = best->x[0] + best->x[1];
    if (near(h, space.h.lo, space.h.hi)) result.active_constraints.push_back("h_lo");
    if (near(h, space.h.hi, space.h.hi)) result.active_constraints.push_back("h_hi");
    if (ctx.band.active) {
        const double v = stiffness_measure(best->x[2], h, material);
        if (std::abs(v - ctx.band.c1) <= 1e-6 * ctx.band_scale)
            result.active_constraints.push_back("frequency_lo");
        if (std::abs(v - ctx.band.c2) <= 1e-6 * ctx.band_scale)
            result.active_constraints.push_back("frequency_hi");
    }
    return result;
}

}  // namespace spa
