#pragma once

#include <vector>

namespace daefc {

// Truncated Taylor series of a scalar function of time at a fixed expansion
// point: coeff(j) = f^{(j)}(t0) / j!. Closed under arithmetic at fixed
// order; products truncate to the shorter operand.
class Jet {
public:
    Jet() = default;
    explicit Jet(int order) : c_(order + 1, 0.0) {}

    static Jet constant(double v, int order);
    static Jet variable(double t0, int order); // (t0, 1, 0, ...)

    int order() const { return static_cast<int>(c_.size()) - 1; }
    double value() const { return c_[0]; }
    double coeff(int j) const { return j <= order() ? c_[j] : 0.0; }
    double& coeff_ref(int j) { return c_[j]; }
    // j-th derivative value (j! * coeff).
    double deriv(int j) const;

    Jet truncated(int order) const;

    Jet operator+(const Jet&) const;
    Jet operator-(const Jet&) const;
    Jet operator-() const;
    Jet operator*(const Jet&) const;
    Jet operator+(double) const;
    Jet operator*(double) const;

    // Jet of the derivative function; order drops by one.
    Jet shift_derivative() const;

private:
    std::vector<double> c_;
};

inline Jet operator+(double a, const Jet& b) { return b + a; }
inline Jet operator*(double a, const Jet& b) { return b * a; }
inline Jet operator-(double a, const Jet& b) { return (-b) + a; }

// 1/a; requires a nonzero constant term.
Jet recip(const Jet& a);
Jet exp(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet atan(const Jet& a);

} // namespace daefc
