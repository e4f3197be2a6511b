#pragma once

#include "daefc/rational.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace daefc {

// Degree of a polynomial or rational function. The zero element has degree
// "minus infinity", kept distinct from every integer (-1 is a legal degree
// of a rational function, so it cannot double as the sentinel).
class Degree {
public:
    static Degree minus_infinity() { return Degree{}; }
    static Degree of(long v) { return Degree{v}; }

    bool is_minus_infinity() const { return !value_.has_value(); }
    long value() const; // throws if minus infinity

    Degree operator+(long shift) const;
    Degree operator-(const Degree& other) const; // other must be finite

    bool operator==(const Degree&) const = default;
    bool operator<(const Degree& other) const;
    bool operator<=(const Degree& other) const { return *this < other || *this == other; }

    std::string str() const;

private:
    Degree() = default;
    explicit Degree(long v) : value_(v) {}
    std::optional<long> value_;
};

// Univariate polynomial over the exact rationals, coefficients ascending in
// the power of s. The zero polynomial is the empty coefficient sequence; a
// nonzero polynomial never stores a zero leading coefficient.
class Poly {
public:
    Poly() = default;
    explicit Poly(Rat constant);
    explicit Poly(std::vector<Rat> ascending_coeffs); // trims trailing zeros

    static Poly zero() { return Poly{}; }
    static Poly one();
    static Poly s(); // the monomial s
    static Poly monomial(const Rat& coeff, int power);

    bool is_zero() const { return coeffs_.empty(); }
    Degree degree() const;
    const std::vector<Rat>& coeffs() const { return coeffs_; }
    const Rat& leading() const; // throws on zero polynomial
    const Rat& coeff(int power) const; // 0 outside stored range

    Poly operator+(const Poly&) const;
    Poly operator-(const Poly&) const;
    Poly operator-() const;
    Poly operator*(const Poly&) const;
    Poly operator*(const Rat&) const;
    bool operator==(const Poly&) const = default;

    // Division known to be exact (remainder zero); throws otherwise.
    Poly exact_div(const Poly& divisor) const;

    Poly derivative() const;
    Poly monic() const; // throws on zero polynomial

    Rat eval(const Rat& at) const;
    std::complex<double> eval(const std::complex<double>& at) const;

    std::string str(const std::string& var = "s") const;

private:
    void trim();
    std::vector<Rat> coeffs_;
};

// Euclidean division: a = quotient * b + remainder, deg remainder < deg b.
struct PolyDivMod {
    Poly quotient;
    Poly remainder;
};
PolyDivMod divmod(const Poly& a, const Poly& b);

// Monic greatest common divisor (1 for coprime inputs, 0 only if both zero).
Poly gcd(const Poly& a, const Poly& b);
Poly lcm(const Poly& a, const Poly& b);

} // namespace daefc
