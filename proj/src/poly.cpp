#include "daefc/poly.hpp"

#include "daefc/errors.hpp"

#include <sstream>

namespace daefc {

long Degree::value() const {
    if (!value_)
        throw PreconditionError("degree is minus infinity");
    return *value_;
}

Degree Degree::operator+(long shift) const {
    if (!value_)
        return minus_infinity();
    return of(*value_ + shift);
}

Degree Degree::operator-(const Degree& other) const {
    if (!value_)
        return minus_infinity();
    return of(*value_ - other.value());
}

bool Degree::operator<(const Degree& other) const {
    if (!value_)
        return other.value_.has_value();
    if (!other.value_)
        return false;
    return *value_ < *other.value_;
}

std::string Degree::str() const {
    return value_ ? std::to_string(*value_) : "-inf";
}

Poly::Poly(Rat constant) {
    coeffs_.push_back(std::move(constant));
    trim();
}

Poly::Poly(std::vector<Rat> ascending_coeffs) : coeffs_(std::move(ascending_coeffs)) {
    trim();
}

Poly Poly::one() {
    return Poly(Rat(1));
}

Poly Poly::s() {
    return Poly(std::vector<Rat>{Rat(0), Rat(1)});
}

Poly Poly::monomial(const Rat& coeff, int power) {
    std::vector<Rat> c(power + 1, Rat(0));
    c[power] = coeff;
    return Poly(std::move(c));
}

Degree Poly::degree() const {
    if (coeffs_.empty())
        return Degree::minus_infinity();
    return Degree::of(static_cast<long>(coeffs_.size()) - 1);
}

const Rat& Poly::leading() const {
    if (coeffs_.empty())
        throw PreconditionError("leading coefficient of the zero polynomial");
    return coeffs_.back();
}

const Rat& Poly::coeff(int power) const {
    static const Rat kZero(0);
    if (power < 0 || power >= static_cast<int>(coeffs_.size()))
        return kZero;
    return coeffs_[power];
}

void Poly::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0)
        coeffs_.pop_back();
}

Poly Poly::operator+(const Poly& other) const {
    std::vector<Rat> out(std::max(coeffs_.size(), other.coeffs_.size()), Rat(0));
    for (size_t i = 0; i < coeffs_.size(); ++i)
        out[i] += coeffs_[i];
    for (size_t i = 0; i < other.coeffs_.size(); ++i)
        out[i] += other.coeffs_[i];
    return Poly(std::move(out));
}

Poly Poly::operator-(const Poly& other) const {
    return *this + (-other);
}

Poly Poly::operator-() const {
    std::vector<Rat> out(coeffs_);
    for (auto& c : out)
        c = -c;
    return Poly(std::move(out));
}

Poly Poly::operator*(const Poly& other) const {
    if (is_zero() || other.is_zero())
        return zero();
    std::vector<Rat> out(coeffs_.size() + other.coeffs_.size() - 1, Rat(0));
    for (size_t i = 0; i < coeffs_.size(); ++i)
        for (size_t j = 0; j < other.coeffs_.size(); ++j)
            out[i + j] += coeffs_[i] * other.coeffs_[j];
    return Poly(std::move(out));
}

Poly Poly::operator*(const Rat& scalar) const {
    std::vector<Rat> out(coeffs_);
    for (auto& c : out)
        c *= scalar;
    return Poly(std::move(out));
}

PolyDivMod divmod(const Poly& a, const Poly& b) {
    if (b.is_zero())
        throw PreconditionError("polynomial division by zero");
    std::vector<Rat> rem(a.coeffs());
    const long dd = b.degree().is_minus_infinity() ? 0 : b.degree().value();
    if (static_cast<long>(rem.size()) - 1 < dd)
        return {Poly::zero(), a};
    std::vector<Rat> quot(rem.size() - dd, Rat(0));
    const Rat& lead = b.leading();
    for (long k = static_cast<long>(rem.size()) - 1; k >= dd; --k) {
        if (rem[k] == 0)
            continue;
        Rat factor = rem[k] / lead;
        quot[k - dd] = factor;
        for (long j = 0; j <= dd; ++j)
            rem[k - dd + j] -= factor * b.coeff(static_cast<int>(j));
    }
    return {Poly(std::move(quot)), Poly(std::move(rem))};
}

Poly Poly::exact_div(const Poly& divisor) const {
    auto dm = divmod(*this, divisor);
    if (!dm.remainder.is_zero())
        throw PreconditionError("polynomial division expected to be exact");
    return dm.quotient;
}

Poly Poly::derivative() const {
    if (coeffs_.size() <= 1)
        return zero();
    std::vector<Rat> out(coeffs_.size() - 1);
    for (size_t i = 1; i < coeffs_.size(); ++i)
        out[i - 1] = coeffs_[i] * Rat(static_cast<long>(i));
    return Poly(std::move(out));
}

Poly Poly::monic() const {
    if (is_zero())
        throw PreconditionError("monic form of the zero polynomial");
    Rat inv = 1 / leading();
    return *this * inv;
}

Rat Poly::eval(const Rat& at) const {
    Rat acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * at + *it;
    return acc;
}

std::complex<double> Poly::eval(const std::complex<double>& at) const {
    std::complex<double> acc(0.0, 0.0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * at + std::complex<double>(it->get_d(), 0.0);
    return acc;
}

std::string Poly::str(const std::string& var) const {
    if (is_zero())
        return "0";
    std::ostringstream out;
    bool first = true;
    for (long p = static_cast<long>(coeffs_.size()) - 1; p >= 0; --p) {
        const Rat& c = coeffs_[p];
        if (c == 0)
            continue;
        Rat mag = abs(c);
        if (first) {
            if (c < 0)
                out << "-";
            first = false;
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        if (p == 0 || mag != 1)
            out << mag.get_str();
        if (p > 0) {
            if (mag != 1)
                out << "*";
            out << var;
            if (p > 1)
                out << "^" << p;
        }
    }
    return out.str();
}

Poly gcd(const Poly& a, const Poly& b) {
    Poly x = a;
    Poly y = b;
    while (!y.is_zero()) {
        Poly r = divmod(x, y).remainder;
        // Keep the iterates monic so coefficient sizes stay tame.
        x = std::move(y);
        y = r.is_zero() ? Poly::zero() : r.monic();
    }
    return x.is_zero() ? Poly::zero() : x.monic();
}

Poly lcm(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero())
        return Poly::zero();
    return (a * b).exact_div(gcd(a, b));
}

} // namespace daefc
