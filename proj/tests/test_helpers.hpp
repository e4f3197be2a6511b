#pragma once

#include "daefc/linear_dae.hpp"

#include <random>

namespace daefc::testing {

inline Poly poly(std::initializer_list<int> ascending) {
    std::vector<Rat> c;
    for (int v : ascending)
        c.emplace_back(v);
    return Poly(std::move(c));
}

inline RatFun rf(std::initializer_list<int> num, std::initializer_list<int> den = {1}) {
    return RatFun(poly(num), poly(den));
}

// Independent oracle: cofactor-expansion determinant over the rational
// function field. Exponential, for tiny matrices only; deliberately a
// different route than the library's fraction-free elimination.
inline RatFun cofactor_determinant(const RatMat& m) {
    const int n = m.rows();
    if (n == 1)
        return m(0, 0);
    RatFun acc;
    for (int j = 0; j < n; ++j) {
        if (m(0, j).is_zero())
            continue;
        RatMat minor(n - 1, n - 1);
        for (int r = 1; r < n; ++r) {
            int cc = 0;
            for (int c = 0; c < n; ++c) {
                if (c == j)
                    continue;
                minor(r - 1, cc++) = m(r, c);
            }
        }
        RatFun term = m(0, j) * cofactor_determinant(minor);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

// Independent oracle: plain Gaussian elimination rank over the field.
inline int elimination_rank(RatMat m) {
    int rank = 0;
    for (int col = 0; col < m.cols() && rank < m.rows(); ++col) {
        int pivot = -1;
        for (int i = rank; i < m.rows(); ++i)
            if (!m(i, col).is_zero()) {
                pivot = i;
                break;
            }
        if (pivot < 0)
            continue;
        for (int c = 0; c < m.cols(); ++c)
            std::swap(m(pivot, c), m(rank, c));
        for (int i = rank + 1; i < m.rows(); ++i) {
            if (m(i, col).is_zero())
                continue;
            RatFun f = m(i, col) / m(rank, col);
            for (int c = col; c < m.cols(); ++c)
                m(i, c) = m(i, c) - f * m(rank, c);
        }
        ++rank;
    }
    return rank;
}

inline Rat random_rat(std::mt19937& rng, int lo = -3, int hi = 3) {
    std::uniform_int_distribution<int> dist(lo, hi);
    return Rat(dist(rng));
}

inline QMat random_qmat(std::mt19937& rng, int rows, int cols, int lo = -2, int hi = 2) {
    QMat m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m(i, j) = random_rat(rng, lo, hi);
    return m;
}

inline RatFun random_ratfun(std::mt19937& rng, int max_deg = 2) {
    std::uniform_int_distribution<int> deg(0, max_deg);
    auto rand_poly = [&](bool nonzero) {
        std::vector<Rat> c(deg(rng) + 1);
        for (auto& v : c)
            v = random_rat(rng);
        Poly p(std::move(c));
        if (nonzero && p.is_zero())
            p = Poly::one();
        return p;
    };
    return RatFun(rand_poly(false), rand_poly(true));
}

inline LinearDae random_system(std::mt19937& rng, int n, int m, int p) {
    LinearDae sys;
    sys.E = random_qmat(rng, n, n);
    sys.A = random_qmat(rng, n, n);
    sys.B = random_qmat(rng, n, m);
    sys.C = random_qmat(rng, p, n);
    return sys;
}

} // namespace daefc::testing
