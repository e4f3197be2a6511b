#include "daefc/funnel.hpp"

#include "daefc/errors.hpp"

#include <cmath>

namespace daefc {

SmoothSignal smooth_zero() {
    return {[](double, int order) { return Jet(order); }};
}

SmoothSignal smooth_constant(double v) {
    return {[v](double, int order) { return Jet::constant(v, order); }};
}

SmoothSignal smooth_sin(double amp, double freq, double phase) {
    return {[=](double t, int order) {
        return amp * sin(Jet::variable(t, order) * freq + phase);
    }};
}

SmoothSignal smooth_cos(double amp, double freq, double phase) {
    return {[=](double t, int order) {
        return amp * cos(Jet::variable(t, order) * freq + phase);
    }};
}

SmoothSignal smooth_poly(std::vector<double> ascending_coeffs) {
    return {[c = std::move(ascending_coeffs)](double t, int order) {
        Jet x = Jet::variable(t, order);
        Jet acc = Jet(order);
        for (auto it = c.rbegin(); it != c.rend(); ++it)
            acc = acc * x + *it;
        return acc;
    }};
}

SmoothSignal operator+(const SmoothSignal& a, const SmoothSignal& b) {
    return {[fa = a.jet, fb = b.jet](double t, int order) {
        return fa(t, order) + fb(t, order);
    }};
}

FunnelFunction default_phi() {
    FunnelFunction phi;
    phi.name = "paper-sec5";
    phi.smoothness = 2;
    phi.signal = {[](double t, int order) {
        Jet x = Jet::variable(t, order);
        return 0.5 * x * exp(-x) + 2.0 * atan(x);
    }};
    // sup |phi| <= pi + 1/(2e); |phi'| <= 2.5 (attained at 0); |phi''| < 2.31.
    phi.declared_bounds = {3.326, 2.5, 2.31};
    return phi;
}

FunnelFunction poly_atan_phi(std::vector<double> poly_coeffs, double a, double b,
                             std::string name) {
    FunnelFunction phi;
    phi.name = std::move(name);
    phi.smoothness = 2;
    phi.signal = {[c = std::move(poly_coeffs), a, b](double t, int order) {
        Jet x = Jet::variable(t, order);
        Jet acc = Jet(order);
        for (auto it = c.rbegin(); it != c.rend(); ++it)
            acc = acc * x + *it;
        return acc * exp(-x) + a * atan(x * b);
    }};
    // Bounds depend on the parameters; callers get sampled bounds from
    // validate_phi and may overwrite declared_bounds.
    phi.declared_bounds = {};
    return phi;
}

FunnelFunction finite_difference_phi(std::function<double(double)> f, std::string name,
                                     double step) {
    FunnelFunction phi;
    phi.name = std::move(name);
    phi.analytic_jets = false;
    phi.signal = {[f = std::move(f), step](double t, int order) {
        Jet out(order);
        out.coeff_ref(0) = f(t);
        double fact = 1.0;
        for (int j = 1; j <= order; ++j) {
            fact *= j;
            // central difference of order j, clamped to t >= 0
            double h = step;
            double acc = 0.0;
            for (int i = 0; i <= j; ++i) {
                double sign = (j - i) % 2 == 0 ? 1.0 : -1.0;
                double binom = 1.0;
                for (int bi = 0; bi < i; ++bi)
                    binom = binom * (j - bi) / (bi + 1);
                double at = t + (i - j / 2.0) * h;
                acc += sign * binom * f(std::max(at, 0.0));
            }
            out.coeff_ref(j) = acc / std::pow(h, j) / fact;
        }
        return out;
    }};
    return phi;
}

PhiValidationReport validate_phi(const FunnelFunction& phi, int k, double horizon,
                                 int grid_points, double t_min, double floor) {
    PhiValidationReport rep;
    if (!phi.signal.valid())
        throw PreconditionError("funnel function has no jet callable");
    rep.positivity_floor = std::numeric_limits<double>::infinity();
    const double slack = 1e-9;
    for (int g = 0; g <= grid_points; ++g) {
        double t = horizon * g / grid_points;
        Jet j = phi.jet(t, k);
        double v = j.value();
        if (t > 0.0 && v <= 0.0) {
            rep.pass = false;
            rep.issues.push_back({"phi not positive", t, v});
        }
        if (t >= t_min)
            rep.positivity_floor = std::min(rep.positivity_floor, v);
        for (int d = 0; d <= k && d < static_cast<int>(phi.declared_bounds.size()); ++d) {
            double dv = j.deriv(d);
            if (std::abs(dv) > phi.declared_bounds[d] * (1.0 + slack)) {
                rep.pass = false;
                rep.issues.push_back({"derivative " + std::to_string(d) + " exceeds declared bound",
                                      t, dv});
            }
        }
    }
    if (rep.positivity_floor < floor) {
        rep.pass = false;
        rep.issues.push_back({"positivity floor below threshold (liminf surrogate)", t_min,
                              rep.positivity_floor});
    }
    if (!phi.analytic_jets)
        rep.issues.push_back({"jets are finite-difference approximations", 0.0, 0.0});
    return rep;
}

} // namespace daefc
