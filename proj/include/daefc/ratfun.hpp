#pragma once

#include "daefc/poly.hpp"

#include <span>

namespace daefc {

// Element of the field of real rational functions, kept canonical:
// gcd(num, den) = 1 and den monic. The zero function is 0/1.
class RatFun {
public:
    RatFun() : num_(Poly::zero()), den_(Poly::one()) {}
    RatFun(Poly num, Poly den); // canonicalizes; throws if den is zero
    explicit RatFun(Poly num) : RatFun(std::move(num), Poly::one()) {}
    explicit RatFun(const Rat& constant) : RatFun(Poly(constant)) {}

    static RatFun zero() { return RatFun{}; }
    static RatFun one() { return RatFun{Poly::one()}; }
    static RatFun s() { return RatFun{Poly::s()}; }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    // deg num - deg den; representation-independent (common factors cancel
    // in the difference even before reduction), minus infinity for zero.
    Degree degree() const;

    RatFun operator+(const RatFun&) const;
    RatFun operator-(const RatFun&) const;
    RatFun operator-() const;
    RatFun operator*(const RatFun&) const;
    RatFun operator/(const RatFun&) const; // throws on division by zero
    RatFun recip() const;
    bool operator==(const RatFun&) const = default;

    // Exact evaluation; throws if `at` is a pole.
    Rat eval(const Rat& at) const;
    bool is_pole(const Rat& at) const { return den_.eval(at) == 0; }

    std::string str(const std::string& var = "s") const;

private:
    Poly num_;
    Poly den_;
};

// Maximum entry degree of a nonempty vector of rational functions.
Degree column_degree(std::span<const RatFun> entries);

// lim_{lambda->inf} r(lambda) * lambda^shift: 0 if the shifted degree is
// negative, the leading-coefficient ratio if it is zero, nullopt
// (divergence) if positive. Exact.
std::optional<Rat> limit_at_infinity(const RatFun& r, long shift);

} // namespace daefc
