#pragma once

#include "daefc/jet.hpp"

#include <functional>
#include <string>
#include <vector>

namespace daefc {

// Scalar signal of time with analytic derivative jets on demand.
struct SmoothSignal {
    std::function<Jet(double t, int order)> jet;

    double operator()(double t) const { return jet(t, 0).value(); }
    bool valid() const { return static_cast<bool>(jet); }
};

SmoothSignal smooth_zero();
SmoothSignal smooth_constant(double v);
// amp * sin(freq t + phase) / amp * cos(freq t + phase)
SmoothSignal smooth_sin(double amp, double freq, double phase = 0.0);
SmoothSignal smooth_cos(double amp, double freq, double phase = 0.0);
// c[0] + c[1] t + c[2] t^2 + ...
SmoothSignal smooth_poly(std::vector<double> ascending_coeffs);
SmoothSignal operator+(const SmoothSignal& a, const SmoothSignal& b);

// Funnel function phi with derivative jets. declared_bounds[j] is the
// declared sup of |phi^(j)|; funnel validity on an infinite horizon is a
// declared contract, only sampled here.
struct FunnelFunction {
    std::string name;
    int smoothness = 2; // order of the class Phi_k the function claims
    SmoothSignal signal;
    std::vector<double> declared_bounds;
    bool analytic_jets = true; // false ⇒ jets come from finite differences

    double operator()(double t) const { return signal(t); }
    Jet jet(double t, int order) const { return signal.jet(t, order); }
};

// phi(t) = t e^{-t} / 2 + 2 atan t; jets are closed-form at any order.
FunnelFunction default_phi();

// phi(t) = p(t) e^{-t} + a atan(b t).
FunnelFunction poly_atan_phi(std::vector<double> poly_coeffs, double a, double b,
                             std::string name = "poly-atan");

// Wraps a plain callable with central-difference jets (flagged).
FunnelFunction finite_difference_phi(std::function<double(double)> f, std::string name,
                                     double step = 1e-5);

struct PhiValidationIssue {
    std::string what;
    double time;
    double value;
};

struct PhiValidationReport {
    bool pass = true;
    double positivity_floor = 0.0; // min phi on [t_min, horizon]
    std::vector<PhiValidationIssue> issues;
};

// Sampled verification of the funnel-class conditions: phi > 0 for t > 0,
// |phi^(j)| within the declared bounds for j <= k, and phi >= floor after
// t_min (the liminf surrogate on the finite horizon).
PhiValidationReport validate_phi(const FunnelFunction& phi, int k, double horizon,
                                 int grid_points = 2000, double t_min = 0.05,
                                 double floor = 1e-3);

} // namespace daefc
