#include "daefc/jet.hpp"

#include "daefc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace daefc {

Jet Jet::constant(double v, int order) {
    Jet out(order);
    out.c_[0] = v;
    return out;
}

Jet Jet::variable(double t0, int order) {
    Jet out(order);
    out.c_[0] = t0;
    if (order >= 1)
        out.c_[1] = 1.0;
    return out;
}

double Jet::deriv(int j) const {
    double fact = 1.0;
    for (int i = 2; i <= j; ++i)
        fact *= i;
    return coeff(j) * fact;
}

Jet Jet::truncated(int order) const {
    Jet out(order);
    for (int j = 0; j <= std::min(order, this->order()); ++j)
        out.c_[j] = c_[j];
    return out;
}

Jet Jet::operator+(const Jet& other) const {
    const int n = std::min(order(), other.order());
    Jet out(n);
    for (int j = 0; j <= n; ++j)
        out.c_[j] = c_[j] + other.c_[j];
    return out;
}

Jet Jet::operator-(const Jet& other) const {
    const int n = std::min(order(), other.order());
    Jet out(n);
    for (int j = 0; j <= n; ++j)
        out.c_[j] = c_[j] - other.c_[j];
    return out;
}

Jet Jet::operator-() const {
    Jet out = *this;
    for (auto& v : out.c_)
        v = -v;
    return out;
}

Jet Jet::operator*(const Jet& other) const {
    const int n = std::min(order(), other.order());
    Jet out(n);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j)
            out.c_[i + j] += c_[i] * other.c_[j];
    return out;
}

Jet Jet::operator+(double v) const {
    Jet out = *this;
    out.c_[0] += v;
    return out;
}

Jet Jet::operator*(double v) const {
    Jet out = *this;
    for (auto& x : out.c_)
        x *= v;
    return out;
}

Jet Jet::shift_derivative() const {
    if (order() < 1)
        throw PreconditionError("derivative of an order-0 jet");
    Jet out(order() - 1);
    for (int j = 1; j <= order(); ++j)
        out.c_[j - 1] = c_[j] * j;
    return out;
}

Jet recip(const Jet& a) {
    if (a.value() == 0.0)
        throw PreconditionError("reciprocal of a jet with zero constant term");
    const int n = a.order();
    Jet out(n);
    out.coeff_ref(0) = 1.0 / a.value();
    for (int k = 1; k <= n; ++k) {
        double acc = 0.0;
        for (int j = 1; j <= k; ++j)
            acc += a.coeff(j) * out.coeff(k - j);
        out.coeff_ref(k) = -acc / a.value();
    }
    return out;
}

Jet exp(const Jet& a) {
    const int n = a.order();
    Jet out(n);
    out.coeff_ref(0) = std::exp(a.value());
    for (int k = 1; k <= n; ++k) {
        double acc = 0.0;
        for (int j = 1; j <= k; ++j)
            acc += j * a.coeff(j) * out.coeff(k - j);
        out.coeff_ref(k) = acc / k;
    }
    return out;
}

namespace {

void sincos_jets(const Jet& a, Jet& s, Jet& c) {
    const int n = a.order();
    s = Jet(n);
    c = Jet(n);
    s.coeff_ref(0) = std::sin(a.value());
    c.coeff_ref(0) = std::cos(a.value());
    for (int k = 1; k <= n; ++k) {
        double sa = 0.0, ca = 0.0;
        for (int j = 1; j <= k; ++j) {
            sa += j * a.coeff(j) * c.coeff(k - j);
            ca += j * a.coeff(j) * s.coeff(k - j);
        }
        s.coeff_ref(k) = sa / k;
        c.coeff_ref(k) = -ca / k;
    }
}

} // namespace

Jet sin(const Jet& a) {
    Jet s, c;
    sincos_jets(a, s, c);
    return s;
}

Jet cos(const Jet& a) {
    Jet s, c;
    sincos_jets(a, s, c);
    return c;
}

Jet atan(const Jet& a) {
    const int n = a.order();
    Jet out(n);
    out.coeff_ref(0) = std::atan(a.value());
    if (n == 0)
        return out;
    // atan(a)' = a' / (1 + a^2); integrate the quotient series.
    Jet da = a.shift_derivative();
    Jet denom = (a * a + 1.0).truncated(n - 1);
    Jet quot = da * recip(denom);
    for (int k = 1; k <= n; ++k)
        out.coeff_ref(k) = quot.coeff(k - 1) / k;
    return out;
}

} // namespace daefc
