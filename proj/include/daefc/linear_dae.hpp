#pragma once

#include "daefc/ratmat.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace daefc {

// Linear constant-coefficient DAE d/dt(E x) = A x + B u, y = C x with exact
// rational entries. Not required to be regular.
struct LinearDae {
    QMat E; // l x n
    QMat A; // l x n
    QMat B; // l x m
    QMat C; // p x n

    int l() const { return E.rows(); }
    int n() const { return E.cols(); }
    int m() const { return B.cols(); }
    int p() const { return C.rows(); }

    // Throws PreconditionError unless all blocks are dimension-consistent
    // and every dimension is at least one.
    void validate() const;
};

struct InvariantZero {
    std::complex<double> value;
    double radius; // certified: a true root lies within this distance

    bool operator==(const InvariantZero&) const = default;
};

struct AnalysisReport {
    bool regular = false;
    bool zd_autonomous = false;
    // Full-row-rank pencil criterion; proven equivalent to behavioral
    // right-invertibility only for regular systems, hence "surrogate".
    bool right_invertible = false;
    bool right_invertible_is_rank_surrogate = true;
    std::optional<bool> zd_asymptotically_stable; // nullopt = unknown
    std::string stability_note;
    std::vector<InvariantZero> invariant_zeros;

    bool operator==(const AnalysisReport&) const = default;
};

struct TvrdReport {
    bool exists = false;
    std::vector<int> r; // length p, entries >= 0
    int q = 0;          // number of nonzero entries of r
    QMat gamma_hat;     // m x p, exact limit matrix
    QMat gamma_hat_q;   // m x q, columns of gamma_hat with r_i > 0
    RatMat H;           // m x p

    bool operator==(const TvrdReport&) const = default;
};

struct VrdReport {
    bool exists = false;
    std::vector<int> r; // length p, possibly negative; 0 for a zero row of G
    QMat gamma;         // p x m
    bool strict = false; // all r_i equal (and exists)

    bool operator==(const VrdReport&) const = default;
};

struct GammaDecomposition {
    QMat gamma;                      // m x m, block form [[G11inv, 0], [-G21 G11inv, I]]
    std::vector<int> input_reordering; // new position -> original row index
};

// Block matrix [-sE+A, B; C, 0] of size (l+p) x (n+m).
RatMat system_pencil(const LinearDae& sys);

// l = n and det(sE - A) != 0 as a polynomial.
bool is_regular(const LinearDae& sys);

// Zero dynamics autonomous iff the pencil has full column rank over R(s).
bool zero_dynamics_autonomous(const LinearDae& sys);

// Full-row-rank pencil criterion (see AnalysisReport).
bool is_right_invertible(const LinearDae& sys);

// G(s) = C (sE - A)^{-1} B; throws PreconditionError if not regular.
RatMat transfer_function(const LinearDae& sys);

// H(s) = -[0 I_m] L(s) [0; I_p] for any left inverse L(s) of the pencil;
// the result is independent of the choice. Throws PreconditionError if the
// zero dynamics are not autonomous.
RatMat compute_H(const LinearDae& sys);

// Truncated vector relative degree from the column degrees of H(s); exact
// rank test on gamma_hat_q. Throws PreconditionError (distinct messages)
// if the zero dynamics are not autonomous or the system is not
// right-invertible.
TvrdReport truncated_vrd(const LinearDae& sys);

// Classical vector relative degree from the row degrees of the transfer
// function; throws PreconditionError if not regular.
VrdReport vector_rd(const LinearDae& sys);

// [E, A + BKC, B, C].
LinearDae apply_output_feedback(const LinearDae& sys, const QMat& K);

// New output i is old output sigma[i] (0-based); the truncated vector
// relative degree of the result is (r_{sigma(1)}, ..., r_{sigma(p)}).
LinearDae permute_outputs(const LinearDae& sys, const std::vector<int>& sigma);

// Builds the unitriangular gain transform with Gamma * reordered(gamma_hat_q)
// = [I_q; 0]. Picks the lexicographically first row subset that makes the
// top block invertible. Throws PreconditionError if rank(gamma_hat_q) < q.
GammaDecomposition gamma_decomposition(const QMat& gamma_hat, const std::vector<int>& r);

struct ZeroComputation {
    std::vector<InvariantZero> zeros;
    std::optional<bool> stable;
    std::string note;
};

// Roots of det(pencil) for square pencils, with certified radii from exact
// evaluation of n |p(z)/p'(z)|. Verdict "unknown" when a root is too close
// to the imaginary axis or the pencil is not square.
ZeroComputation invariant_zeros(const LinearDae& sys, double margin_scale = 1e-9);

inline std::optional<bool> zero_dynamics_stable(const LinearDae& sys) {
    return invariant_zeros(sys).stable;
}

AnalysisReport analyze(const LinearDae& sys);

// Roots of a rational-coefficient polynomial via the companion matrix, with
// the certified radius bound above. Exposed for the CLI and tests.
std::vector<InvariantZero> certified_roots(const Poly& p);

} // namespace daefc
