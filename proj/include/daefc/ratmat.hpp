#pragma once

#include "daefc/ratfun.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace daefc {

// Dense matrix over the rational-function field, row-major.
class RatMat {
public:
    RatMat() = default;
    RatMat(int rows, int cols); // zero-filled
    RatMat(int rows, int cols, std::vector<RatFun> entries);

    static RatMat identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const RatFun& operator()(int r, int c) const;
    RatFun& operator()(int r, int c);

    RatMat operator+(const RatMat&) const;
    RatMat operator-(const RatMat&) const;
    RatMat operator*(const RatMat&) const;
    RatMat transpose() const;
    bool operator==(const RatMat&) const = default;

    RatMat block(int row0, int col0, int nrows, int ncols) const;
    void set_block(int row0, int col0, const RatMat& src);

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<RatFun> entries_;
};

// Rank over the rational-function field: clears denominators row-wise, then
// fraction-free (Bareiss) elimination with full pivoting on the resulting
// polynomial matrix.
int rank(const RatMat& m);

// Exact determinant; throws on non-square input.
RatFun determinant(const RatMat& m);

// Determinant known to be polynomial (entries with denominator 1), e.g. of
// sE - A or of the system pencil; throws if a denominator survives.
Poly poly_determinant(const RatMat& m);

// Exact inverse; throws PreconditionError on singular/non-square input.
RatMat inverse(const RatMat& m);

// Solves A X = B exactly; throws PreconditionError if A is singular.
RatMat solve(const RatMat& a, const RatMat& b);

// Left inverse L with L m = I, canonical choice (m^T m)^{-1} m^T; throws
// PreconditionError if m lacks full column rank.
RatMat left_inverse(const RatMat& m);

// Matrix of exact rational numbers (degree-zero data such as E, A, B, C or
// the limit matrix of H(s)).
class QMat {
public:
    QMat() = default;
    QMat(int rows, int cols); // zero-filled
    QMat(int rows, int cols, std::vector<Rat> entries);

    static QMat identity(int n);
    static QMat from_ints(int rows, int cols, std::initializer_list<int> entries);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const Rat& operator()(int r, int c) const;
    Rat& operator()(int r, int c);

    QMat operator+(const QMat&) const;
    QMat operator-(const QMat&) const;
    QMat operator*(const QMat&) const;
    QMat transpose() const;
    bool operator==(const QMat&) const = default;

    RatMat to_ratmat() const;
    Eigen::MatrixXd to_float() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Rat> entries_;
};

int rank(const QMat& m);
QMat inverse(const QMat& m); // throws PreconditionError if singular

// Entry-wise evaluation at a rational point; throws if any entry has a pole
// there.
QMat eval(const RatMat& m, const Rat& at);

} // namespace daefc
