#include "daefc/ratfun.hpp"

#include "daefc/errors.hpp"

namespace daefc {

RatFun::RatFun(Poly num, Poly den) {
    if (den.is_zero())
        throw PreconditionError("rational function with zero denominator");
    if (num.is_zero()) {
        num_ = Poly::zero();
        den_ = Poly::one();
        return;
    }
    Poly g = gcd(num, den);
    num = num.exact_div(g);
    den = den.exact_div(g);
    Rat scale = 1 / den.leading();
    num_ = num * scale;
    den_ = den * scale;
}

Degree RatFun::degree() const {
    if (num_.is_zero())
        return Degree::minus_infinity();
    return num_.degree() - den_.degree();
}

RatFun RatFun::operator+(const RatFun& other) const {
    return RatFun(num_ * other.den_ + other.num_ * den_, den_ * other.den_);
}

RatFun RatFun::operator-(const RatFun& other) const {
    return RatFun(num_ * other.den_ - other.num_ * den_, den_ * other.den_);
}

RatFun RatFun::operator-() const {
    RatFun out = *this;
    out.num_ = -out.num_;
    return out;
}

RatFun RatFun::operator*(const RatFun& other) const {
    return RatFun(num_ * other.num_, den_ * other.den_);
}

RatFun RatFun::operator/(const RatFun& other) const {
    if (other.is_zero())
        throw PreconditionError("division by the zero rational function");
    return RatFun(num_ * other.den_, den_ * other.num_);
}

RatFun RatFun::recip() const {
    if (is_zero())
        throw PreconditionError("reciprocal of the zero rational function");
    return RatFun(den_, num_);
}

Rat RatFun::eval(const Rat& at) const {
    Rat d = den_.eval(at);
    if (d == 0)
        throw PreconditionError("evaluation at a pole");
    return num_.eval(at) / d;
}

std::string RatFun::str(const std::string& var) const {
    if (den_ == Poly::one())
        return num_.str(var);
    return "(" + num_.str(var) + ")/(" + den_.str(var) + ")";
}

Degree column_degree(std::span<const RatFun> entries) {
    if (entries.empty())
        throw PreconditionError("column degree of an empty vector");
    Degree best = Degree::minus_infinity();
    for (const auto& e : entries) {
        Degree d = e.degree();
        if (best < d)
            best = d;
    }
    return best;
}

std::optional<Rat> limit_at_infinity(const RatFun& r, long shift) {
    if (r.is_zero())
        return Rat(0);
    Degree shifted = r.degree() + shift;
    if (shifted < Degree::of(0))
        return Rat(0);
    if (Degree::of(0) < shifted)
        return std::nullopt;
    return r.num().leading() / r.den().leading();
}

} // namespace daefc
