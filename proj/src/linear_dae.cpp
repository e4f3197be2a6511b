#include "daefc/linear_dae.hpp"

#include "daefc/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace daefc {

void LinearDae::validate() const {
    if (l() < 1 || n() < 1 || m() < 1 || p() < 1)
        throw PreconditionError("system dimensions must all be at least one");
    if (A.rows() != l() || A.cols() != n())
        throw PreconditionError("A must be l x n");
    if (B.rows() != l())
        throw PreconditionError("B must have l rows");
    if (C.cols() != n())
        throw PreconditionError("C must have n columns");
}

RatMat system_pencil(const LinearDae& sys) {
    sys.validate();
    const int l = sys.l(), n = sys.n(), m = sys.m(), p = sys.p();
    RatMat pencil(l + p, n + m);
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < n; ++j) {
            Poly entry = Poly::monomial(-sys.E(i, j), 1) + Poly(sys.A(i, j));
            pencil(i, j) = RatFun(std::move(entry));
        }
    pencil.set_block(0, n, sys.B.to_ratmat());
    pencil.set_block(l, 0, sys.C.to_ratmat());
    return pencil;
}

bool is_regular(const LinearDae& sys) {
    sys.validate();
    if (sys.l() != sys.n())
        return false;
    RatMat pencil(sys.l(), sys.n());
    for (int i = 0; i < sys.l(); ++i)
        for (int j = 0; j < sys.n(); ++j)
            pencil(i, j) = RatFun(Poly::monomial(sys.E(i, j), 1) - Poly(sys.A(i, j)));
    return !poly_determinant(pencil).is_zero();
}

bool zero_dynamics_autonomous(const LinearDae& sys) {
    return rank(system_pencil(sys)) == sys.n() + sys.m();
}

bool is_right_invertible(const LinearDae& sys) {
    return rank(system_pencil(sys)) == sys.l() + sys.p();
}

RatMat transfer_function(const LinearDae& sys) {
    if (!is_regular(sys))
        throw PreconditionError("transfer function requires a regular system");
    const int n = sys.n();
    RatMat sEmA(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            sEmA(i, j) = RatFun(Poly::monomial(sys.E(i, j), 1) - Poly(sys.A(i, j)));
    return sys.C.to_ratmat() * solve(sEmA, sys.B.to_ratmat());
}

RatMat compute_H(const LinearDae& sys) {
    if (!zero_dynamics_autonomous(sys))
        throw PreconditionError("H(s) requires autonomous zero dynamics");
    const int l = sys.l(), n = sys.n(), m = sys.m(), p = sys.p();
    RatMat pencil = system_pencil(sys);
    RatMat rhs(l + p, p);
    for (int i = 0; i < p; ++i)
        rhs(l + i, i) = RatFun::one();

    RatMat z; // L(s) [0; I_p], (n+m) x p
    if (l + p == n + m) {
        z = solve(pencil, rhs);
    } else {
        RatMat pt = pencil.transpose();
        z = solve(pt * pencil, pt * rhs);
    }
    // Sign convention: with this pencil, [0 I_m] L(s) [0; I_p] equals
    // G(s)^{-1} for regular square systems with invertible G, which is the
    // normalization the worked examples use.
    RatMat h(m, p);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < p; ++j)
            h(i, j) = z(n + i, j);
    return h;
}

TvrdReport truncated_vrd(const LinearDae& sys) {
    if (!zero_dynamics_autonomous(sys))
        throw PreconditionError("truncated vector relative degree requires autonomous zero dynamics");
    if (!is_right_invertible(sys))
        throw PreconditionError("truncated vector relative degree requires a right-invertible system");
    const int m = sys.m(), p = sys.p();

    TvrdReport rep;
    rep.H = compute_H(sys);
    rep.r.resize(p);
    rep.gamma_hat = QMat(m, p);
    for (int i = 0; i < p; ++i) {
        std::vector<RatFun> column(m);
        for (int j = 0; j < m; ++j)
            column[j] = rep.H(j, i);
        Degree d = column_degree(column);
        rep.r[i] = (d.is_minus_infinity() || d.value() < 0) ? 0 : static_cast<int>(d.value());
        for (int j = 0; j < m; ++j) {
            auto lim = limit_at_infinity(rep.H(j, i), -rep.r[i]);
            // r_i bounds every degree in the column, so the limit exists.
            rep.gamma_hat(j, i) = *lim;
        }
    }

    rep.q = static_cast<int>(std::count_if(rep.r.begin(), rep.r.end(), [](int v) { return v > 0; }));
    rep.gamma_hat_q = QMat(m, rep.q);
    int col = 0;
    for (int i = 0; i < p; ++i) {
        if (rep.r[i] == 0)
            continue;
        for (int j = 0; j < m; ++j)
            rep.gamma_hat_q(j, col) = rep.gamma_hat(j, i);
        ++col;
    }
    rep.exists = rank(rep.gamma_hat_q) == rep.q;
    return rep;
}

VrdReport vector_rd(const LinearDae& sys) {
    RatMat g = transfer_function(sys); // checks regularity
    const int p = sys.p(), m = sys.m();

    VrdReport rep;
    rep.r.resize(p, 0);
    rep.gamma = QMat(p, m);
    bool any_zero_row = false;
    for (int i = 0; i < p; ++i) {
        std::vector<RatFun> row(m);
        for (int j = 0; j < m; ++j)
            row[j] = g(i, j);
        Degree d = column_degree(row);
        if (d.is_minus_infinity()) {
            // A zero output row admits no relative degree; keep r_i = 0 and
            // report non-existence through the rank test below.
            any_zero_row = true;
            continue;
        }
        rep.r[i] = static_cast<int>(-d.value());
        for (int j = 0; j < m; ++j)
            rep.gamma(i, j) = *limit_at_infinity(g(i, j), rep.r[i]);
    }
    rep.exists = !any_zero_row && rank(rep.gamma) == p;
    rep.strict = rep.exists && std::all_of(rep.r.begin(), rep.r.end(),
                                           [&](int v) { return v == rep.r.front(); });
    return rep;
}

LinearDae apply_output_feedback(const LinearDae& sys, const QMat& K) {
    sys.validate();
    if (K.rows() != sys.m() || K.cols() != sys.p())
        throw PreconditionError("feedback gain must be m x p");
    LinearDae out = sys;
    out.A = sys.A + sys.B * K * sys.C;
    return out;
}

LinearDae permute_outputs(const LinearDae& sys, const std::vector<int>& sigma) {
    sys.validate();
    const int p = sys.p();
    if (static_cast<int>(sigma.size()) != p)
        throw PreconditionError("permutation length must equal the output dimension");
    std::vector<bool> seen(p, false);
    for (int v : sigma) {
        if (v < 0 || v >= p || seen[v])
            throw PreconditionError("not a permutation of the outputs");
        seen[v] = true;
    }
    LinearDae out = sys;
    out.C = QMat(p, sys.n());
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < sys.n(); ++j)
            out.C(i, j) = sys.C(sigma[i], j);
    return out;
}

GammaDecomposition gamma_decomposition(const QMat& gamma_hat, const std::vector<int>& r) {
    const int m = gamma_hat.rows();
    const int p = gamma_hat.cols();
    if (static_cast<int>(r.size()) != p)
        throw PreconditionError("relative-degree vector length must equal the column count");

    QMat gq(m, 0);
    {
        std::vector<int> keep;
        for (int i = 0; i < p; ++i)
            if (r[i] > 0)
                keep.push_back(i);
        gq = QMat(m, static_cast<int>(keep.size()));
        for (int c = 0; c < gq.cols(); ++c)
            for (int j = 0; j < m; ++j)
                gq(j, c) = gamma_hat(j, keep[c]);
    }
    const int q = gq.cols();
    if (rank(gq) != q)
        throw PreconditionError("gamma_hat_q is rank deficient; no truncated vector relative degree");

    GammaDecomposition out;
    out.input_reordering.reserve(m);
    // Greedy scan keeps the lexicographically first independent row subset.
    QMat chosen(0, q);
    std::vector<int> rest;
    for (int i = 0; i < m; ++i) {
        if (chosen.rows() < q) {
            QMat trial(chosen.rows() + 1, q);
            for (int rr = 0; rr < chosen.rows(); ++rr)
                for (int c = 0; c < q; ++c)
                    trial(rr, c) = chosen(rr, c);
            for (int c = 0; c < q; ++c)
                trial(chosen.rows(), c) = gq(i, c);
            if (rank(trial) == trial.rows()) {
                chosen = std::move(trial);
                out.input_reordering.push_back(i);
                continue;
            }
        }
        rest.push_back(i);
    }
    out.input_reordering.insert(out.input_reordering.end(), rest.begin(), rest.end());

    QMat g11inv = q > 0 ? inverse(chosen) : QMat(0, 0);
    out.gamma = QMat(m, m);
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j)
            out.gamma(i, j) = g11inv(i, j);
    for (int i = q; i < m; ++i)
        out.gamma(i, i) = 1;
    if (q > 0 && m > q) {
        QMat g21(m - q, q);
        for (int i = 0; i < m - q; ++i)
            for (int j = 0; j < q; ++j)
                g21(i, j) = gq(rest[i], j);
        QMat low = g21 * g11inv;
        for (int i = 0; i < m - q; ++i)
            for (int j = 0; j < q; ++j)
                out.gamma(q + i, j) = -low(i, j);
    }
    return out;
}

std::vector<InvariantZero> certified_roots(const Poly& p) {
    std::vector<InvariantZero> out;
    if (p.degree().is_minus_infinity() || p.degree().value() == 0)
        return out;
    const long deg = p.degree().value();

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
    for (long i = 1; i < deg; ++i)
        companion(i, i - 1) = 1.0;
    for (long i = 0; i < deg; ++i)
        companion(i, deg - 1) = -Rat(p.coeff(static_cast<int>(i)) / p.leading()).get_d();
    Eigen::VectorXcd eig = companion.eigenvalues();

    Poly dp = p.derivative();
    for (long i = 0; i < deg; ++i) {
        InvariantZero z;
        z.value = eig(i);
        std::complex<double> pv = p.eval(z.value);
        std::complex<double> dv = dp.eval(z.value);
        if (std::abs(dv) > 0.0) {
            z.radius = static_cast<double>(deg) * std::abs(pv) / std::abs(dv);
        } else {
            // Multiple-root cluster; fall back to a crude containment radius.
            z.radius = std::pow(std::abs(pv) / std::abs(p.leading().get_d()), 1.0 / deg);
        }
        out.push_back(z);
    }
    return out;
}

ZeroComputation invariant_zeros(const LinearDae& sys, double margin_scale) {
    ZeroComputation out;
    sys.validate();
    if (sys.l() + sys.p() != sys.n() + sys.m()) {
        out.stable = std::nullopt;
        out.note = "non-square pencil: exact determinant path unavailable";
        return out;
    }
    Poly det = poly_determinant(system_pencil(sys));
    if (det.is_zero()) {
        out.stable = false;
        out.note = "pencil determinant vanishes identically (zero dynamics not autonomous)";
        return out;
    }
    out.zeros = certified_roots(det);

    double coeff_scale = 1.0;
    for (const auto& c : det.coeffs())
        coeff_scale = std::max(coeff_scale, std::abs(Rat(c / det.leading()).get_d()));
    const double margin = margin_scale * coeff_scale;

    bool all_left = true;
    bool any_right = false;
    for (const auto& z : out.zeros) {
        const double unc = std::max(margin, z.radius);
        if (z.value.real() + unc < 0.0)
            continue;
        all_left = false;
        if (z.value.real() - unc > 0.0)
            any_right = true;
    }
    if (all_left)
        out.stable = true;
    else if (any_right)
        out.stable = false;
    else {
        out.stable = std::nullopt;
        out.note = "a pencil zero lies within the resolution margin of the imaginary axis";
    }
    return out;
}

AnalysisReport analyze(const LinearDae& sys) {
    AnalysisReport rep;
    rep.regular = is_regular(sys);
    rep.zd_autonomous = zero_dynamics_autonomous(sys);
    rep.right_invertible = is_right_invertible(sys);
    ZeroComputation zc = invariant_zeros(sys);
    rep.invariant_zeros = zc.zeros;
    rep.stability_note = zc.note;
    if (!rep.zd_autonomous)
        rep.zd_asymptotically_stable = false;
    else
        rep.zd_asymptotically_stable = zc.stable;
    return rep;
}

} // namespace daefc
