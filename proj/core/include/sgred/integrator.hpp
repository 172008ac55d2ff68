#ifndef SGRED_INTEGRATOR_HPP
#define SGRED_INTEGRATOR_HPP

#include <functional>
#include <span>
#include <vector>

#include "sgred/reduced_systems.hpp"
#include "sgred/types.hpp"

namespace sgred {

// Piecewise-linear path in the complex plane of the independent variable,
// parameterised by arclength.  Declared singular points must keep a distance
// of at least eps_pole from every segment.
class ComplexPath {
  public:
    ComplexPath(std::vector<Cx> waypoints, std::span<const Cx> singular_points = {},
                double eps_pole = kEpsPole);

    double length() const { return length_; }
    const std::vector<Cx>& waypoints() const { return pts_; }

    Cx at(double s) const;
    Cx direction(double s) const;
    // Arclength positions of the segment boundaries.
    const std::vector<double>& knots() const { return knots_; }

    ComplexPath reversed() const;

  private:
    std::vector<Cx> pts_;
    std::vector<double> knots_;
    double length_ = 0.0;
};

struct TrajectorySample {
    double s = 0.0;
    ReducedState state;
    Cx K2{}, K4{};
    double drift2 = 0.0, drift4 = 0.0;
};

// Derivatives of the state with respect to the path parameter at both ends of
// an accepted step; enough for quintic Hermite interpolation of (U', V').
struct DenseStep {
    double s0 = 0.0, s1 = 0.0;
    ReducedState y0, y1;
    Cx uppp0{}, vppp0{}, uppp1{}, vppp1{};
    Cx dir{};  // constant along a step (steps never cross waypoints)
};

struct DenseResult {
    ReducedState state;
    Cx uppp{}, vppp{};
};

using ReducedRhs = std::function<std::pair<Cx, Cx>(Cx xi, const ReducedState&)>;
using IntegralFn = std::function<std::pair<Residual, Residual>(const ReducedState&)>;

class Trajectory {
  public:
    const std::vector<TrajectorySample>& samples() const { return samples_; }
    double max_drift2() const { return max_drift2_; }
    double max_drift4() const { return max_drift4_; }
    double length() const { return length_; }

    // Dense output: interpolated state at path parameter s (OutOfRange outside
    // [0, length]); third derivatives are recomputed from the right-hand side,
    // never interpolated.
    DenseResult dense_eval(double s) const;

  private:
    friend Trajectory integrate(const ReducedRhs&, const ReducedState&, const ComplexPath&,
                                double, const IntegralFn&);
    std::vector<TrajectorySample> samples_;
    std::vector<DenseStep> steps_;
    ReducedRhs rhs_;
    double max_drift2_ = 0.0, max_drift4_ = 0.0;
    double length_ = 0.0;
};

// Adaptive Dormand-Prince 5(4) along the path, componentwise over the complex
// field, local error per step at most tol.  Throws StepSizeUnderflow when the
// step controller collapses (the designed failure near movable singularities).
Trajectory integrate(const ReducedRhs& rhs, const ReducedState& s0, const ComplexPath& path,
                     double tol, const IntegralFn& integrals = {});

// Convenience wrapper for one of the printed reduced systems, recording the
// printed first integrals and their drift.
Trajectory integrate_reduced(ReducedCase cs, const ReducedConstants& c, const ReducedState& s0,
                             const ComplexPath& path, double tol);

// Fixed poles of the case coefficients lying in the rectangle spanned by the
// path (tri: sinh(k xi) = 0; rat: xi = 0), for path validation.
std::vector<Cx> case_fixed_singularities(ReducedCase cs, const ReducedConstants& c,
                                         std::span<const Cx> waypoints);

// Single fixed Dormand-Prince step (order-check oracle hook).
void dp5_fixed_step(const ReducedRhs& rhs, Cx dir, Cx xi0, ReducedState& y, double h);

}  // namespace sgred

#endif
